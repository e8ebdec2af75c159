#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "census/family.hpp"

namespace census {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

/// Throws InputError unless j carries the current schema version.
void check_schema(const Json& j);

Json lpoly_to_json(const LPolynomial& L);
LPolynomial lpoly_from_json(const Json& j);
std::string rational_to_string(const mpq_class& x);

Json survey_record_json(const SurveyRecord& r, const SurveyConfig& cfg);
Json survey_config_json(const SurveyConfig& cfg);

// ------------------------------------------------------------------- CSV

std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
/// statistic,r,empirical,theoretical,tail,tolerance,pass
void write_moment_csv(std::ostream& out, const MomentReport& rep);

// ----------------------------------------------------------------- cache

uint32_t crc32_of(const std::string& s);

/// Append-only JSONL cache of L-polynomials, one checksummed entry per line.
class LCache {
 public:
  explicit LCache(std::filesystem::path dir);

  std::optional<LPolynomial> get(const HyperellipticCurve& H);
  /// Write-once: an existing key is left untouched.
  void put(const HyperellipticCurve& H, const LPolynomial& L);
  /// Cached lookup, computing and storing on a miss.
  LPolynomial l_polynomial(const HyperellipticCurve& H);

  const std::filesystem::path& file() const { return file_; }
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }
  /// Lines dropped on load for a bad checksum, bad JSON or unknown schema.
  uint64_t corrupt_lines() const { return corrupt_; }

  static std::string key(const HyperellipticCurve& H);

 private:
  std::filesystem::path file_;
  std::mutex mu_;
  std::unordered_map<std::string, LPolynomial> entries_;
  uint64_t hits_ = 0, misses_ = 0, corrupt_ = 0;
};

/// Cache directory: MODULI_CENSUS_CACHE wins over the flag; empty means no cache.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag_value);

}  // namespace census
