#include "census/records.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "census/errors.hpp"

namespace census {

void check_schema(const Json& j) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_number_integer())
    throw InputError("record has no schema version");
  if (j["schema"].get<int>() != kSchemaVersion)
    throw InputError("unknown schema version " + j["schema"].dump());
}

Json lpoly_to_json(const LPolynomial& L) {
  Json a = Json::array();
  for (const auto& c : L.a) a.push_back(c.get_str());
  return Json{{"q", L.q.get_str()}, {"g", L.g}, {"a", a}};
}

LPolynomial lpoly_from_json(const Json& j) {
  LPolynomial L;
  L.q = mpz_class(j.at("q").get<std::string>());
  L.g = j.at("g").get<int>();
  for (const auto& c : j.at("a")) L.a.emplace_back(c.get<std::string>());
  check_functional_equation(L);
  return L;
}

std::string rational_to_string(const mpq_class& x) { return x.get_str(); }

Json survey_config_json(const SurveyConfig& cfg) {
  return Json{{"q", cfg.q},
              {"gamma", cfg.gamma},
              {"mode", cfg.exhaustive ? "exhaustive" : "sample"},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"Z", cfg.truncation()},
              {"rank", cfg.n},
              {"deg", cfg.d},
              {"r_max", cfg.r_max},
              {"degree_bound", cfg.degree_bound},
              {"strata", to_string(cfg.strata)},
              {"beta1_variant", to_string(cfg.beta1)},
              {"ntilde_reading", to_string(cfg.ntilde_reading)}};
}

Json survey_record_json(const SurveyRecord& r, const SurveyConfig& cfg) {
  Json j{{"schema", kSchemaVersion},
         {"index", r.index},
         {"q", cfg.q},
         {"gamma", cfg.gamma},
         {"F", r.F},
         {"genus", r.genus},
         {"delta", r.delta}};
  if (!r.error.empty()) {
    j["error"] = r.error;
    j["error_code"] = r.error_code;
    return j;
  }
  j["L"] = lpoly_to_json(r.L)["a"];
  j["NJ"] = r.NJ.get_str();
  j["NJ_q2"] = r.NJ_q2.get_str();
  j["two_torsion"] = r.two_torsion.get_str();
  j["counts"] = Json{{"ml", Json{{"n", cfg.n}, {"d", cfg.d}, {"value", r.ml.get_str()}}},
                     {"ms20", r.ms20.get_str()},
                     {"ntilde", r.ntilde.get_str()}};
  j["delta_z"] = Json{{"Z", cfg.truncation()},
                      {"exact", rational_to_string(r.delta_z)},
                      {"value", format_real(r.delta_z_real)},
                      {"paths_checked", r.delta_z_checked}};
  j["statistics"] = Json{{"mnd_raw", format_real(r.raw_mnd)},
                         {"mnd_centered", format_real(r.centered_mnd)},
                         {"ms20", format_real(r.ms20_stat)},
                         {"ntilde", format_real(r.ntilde_stat)},
                         {"ntilde_gap", format_real(r.ntilde_gap)}};
  return j;
}

// ------------------------------------------------------------------- CSV

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

void write_moment_csv(std::ostream& out, const MomentReport& rep) {
  write_csv_row(out, {"statistic", "r", "empirical", "theoretical", "tail", "tolerance", "pass"});
  for (const auto& row : rep.rows) {
    std::string tol = row.tolerance ? format_real(Real(*row.tolerance), 6) : "";
    std::string pass = row.tolerance ? (row.pass ? "true" : "false") : "";
    write_csv_row(out, {row.statistic, std::to_string(row.r), format_real(row.empirical, 17),
                        format_real(row.theoretical, 17), format_real(row.tail, 6), tol, pass});
  }
}

// ----------------------------------------------------------------- cache

uint32_t crc32_of(const std::string& s) {
  return static_cast<uint32_t>(::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

namespace {

std::string hex32(uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string entry_line(const std::string& key, const LPolynomial& L) {
  Json entry{{"schema", kSchemaVersion}, {"key", key}, {"L", lpoly_to_json(L)}};
  std::string body = entry.dump();
  return Json{{"entry", entry}, {"crc32", hex32(crc32_of(body))}}.dump();
}

}  // namespace

std::string LCache::key(const HyperellipticCurve& H) {
  std::ostringstream os;
  os << H.field->p() << '^' << H.field->degree() << ';';
  for (auto c : H.field->modulus()) os << c << '.';
  os << ';' << H.gamma << ';';
  auto low = H.F.low_labels();
  for (size_t i = 0; i < low.size(); ++i) os << (i ? "," : "") << low[i];
  return os.str();
}

LCache::LCache(std::filesystem::path dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create cache directory " + dir.string() + ": " + ec.message());
  file_ = dir / "lpoly_cache.jsonl";
  std::ifstream in(file_);
  std::vector<std::string> good;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      const Json& entry = j.at("entry");
      if (j.at("crc32").get<std::string>() != hex32(crc32_of(entry.dump()))) throw InputError("checksum mismatch");
      check_schema(entry);
      auto L = lpoly_from_json(entry.at("L"));
      if (entries_.emplace(entry.at("key").get<std::string>(), L).second) good.push_back(line);
    } catch (const std::exception&) {
      ++corrupt_;
    }
  }
  in.close();
  if (corrupt_) {
    // rewrite without the bad lines
    auto tmp = file_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      for (const auto& l : good) out << l << '\n';
    }
    std::filesystem::rename(tmp, file_);
  }
}

std::optional<LPolynomial> LCache::get(const HyperellipticCurve& H) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key(H));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void LCache::put(const HyperellipticCurve& H, const LPolynomial& L) {
  const std::string k = key(H);
  std::lock_guard<std::mutex> lock(mu_);
  if (!entries_.emplace(k, L).second) return;
  std::ofstream out(file_, std::ios::app);
  out << entry_line(k, L) << '\n';
  if (!out) throw ResourceError("cannot write cache file " + file_.string());
}

LPolynomial LCache::l_polynomial(const HyperellipticCurve& H) {
  if (auto L = get(H)) {
    std::lock_guard<std::mutex> lock(mu_);
    ++hits_;
    return *L;
  }
  LPolynomial L = census::l_polynomial(H);
  put(H, L);
  std::lock_guard<std::mutex> lock(mu_);
  ++misses_;
  return L;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("MODULI_CENSUS_CACHE"); env && *env) return std::filesystem::path(env);
  if (!flag_value.empty()) return std::filesystem::path(flag_value);
  return std::nullopt;
}

}  // namespace census
