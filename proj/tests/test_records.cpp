#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "census/errors.hpp"
#include "census/records.hpp"

using namespace census;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("census_records_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("CRC32 matches the standard check value") {
  CHECK(crc32_of("123456789") == 0xCBF43926u);
  CHECK(crc32_of("") == 0u);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  write_csv_row(os, {"x", "1,2", ""});
  CHECK(os.str() == "x,\"1,2\",\r\n");
}

TEST_CASE("L-polynomial JSON round trip") {
  auto H = HyperellipticCurve::from_labels(make_field(5, 1), {1, 1, 3, 0, 0, 2, 0});
  auto L = l_polynomial(H);
  auto j = lpoly_to_json(L);
  CHECK(j["a"][0] == "1");
  CHECK(lpoly_from_json(Json::parse(j.dump())) == L);
  j["a"][1] = "12345";
  CHECK_THROWS_AS(lpoly_from_json(j), InvariantError);
}

TEST_CASE("schema check") {
  CHECK_NOTHROW(check_schema(Json{{"schema", kSchemaVersion}}));
  CHECK_THROWS_AS(check_schema(Json{{"schema", kSchemaVersion + 1}}), InputError);
  CHECK_THROWS_AS(check_schema(Json{{"other", 1}}), InputError);
}

TEST_CASE("survey record JSON uses decimal strings") {
  SurveyConfig cfg;
  auto H = HyperellipticCurve::from_labels(make_field(3, 1), {1, 2, 0, 0, 0});
  auto rec = analyze_curve(H, cfg, nullptr, 4);
  auto j = survey_record_json(rec, cfg);
  CHECK(j["schema"] == kSchemaVersion);
  CHECK(j["index"] == 4);
  CHECK(j["counts"]["ml"]["value"] == "49");
  CHECK(j["counts"]["ms20"] == "23");
  CHECK(j["NJ"] == "29");
  CHECK(j["F"] == Json::array({1, 2, 0, 0, 0}));
  CHECK(j["L"].size() == 5);
  CHECK(j["statistics"]["mnd_raw"].is_string());
}

TEST_CASE("cache: miss, hit, persistence") {
  auto dir = fresh_dir("basic");
  auto f = make_field(3, 1);
  auto H = HyperellipticCurve::from_labels(f, {1, 2, 0, 0, 0});
  auto H2 = HyperellipticCurve::from_labels(f, {0, 1, 0, 0, 0});
  {
    LCache c(dir);
    uint64_t before = point_count_calls();
    auto L = c.l_polynomial(H);
    CHECK(point_count_calls() > before);
    CHECK(c.misses() == 1);
    before = point_count_calls();
    CHECK(c.l_polynomial(H) == L);
    CHECK(point_count_calls() == before);
    CHECK(c.hits() == 1);
    c.l_polynomial(H2);
    c.put(H, L);
  }
  CHECK(lines_of(dir / "lpoly_cache.jsonl").size() == 2);
  LCache again(dir);
  uint64_t before = point_count_calls();
  CHECK(again.l_polynomial(H) == l_polynomial(H));
  CHECK(again.hits() == 1);
  CHECK(again.corrupt_lines() == 0);
  CHECK(point_count_calls() > before);  // only the direct call above counted
  fs::remove_all(dir);
}

TEST_CASE("cache heals corrupt lines") {
  auto dir = fresh_dir("corrupt");
  auto f = make_field(5, 1);
  auto H = HyperellipticCurve::from_labels(f, {1, 2, 0, 0, 0});
  auto H2 = HyperellipticCurve::from_labels(f, {2, 2, 0, 0, 0});
  {
    LCache c(dir);
    c.l_polynomial(H);
    c.l_polynomial(H2);
  }
  auto lines = lines_of(dir / "lpoly_cache.jsonl");
  REQUIRE(lines.size() == 2);
  // flip a digit inside the first entry
  auto pos = lines[0].find("\"a\":[\"1\"");
  REQUIRE(pos != std::string::npos);
  lines[0][pos + 6] = '7';
  {
    std::ofstream out(dir / "lpoly_cache.jsonl", std::ios::trunc);
    out << lines[0] << '\n' << lines[1] << '\n' << "not json at all\n";
  }
  LCache c(dir);
  CHECK(c.corrupt_lines() == 2);
  CHECK(lines_of(dir / "lpoly_cache.jsonl").size() == 1);
  CHECK_FALSE(c.get(H).has_value());
  CHECK(c.l_polynomial(H) == l_polynomial(H));
  CHECK(c.misses() == 1);
  CHECK(lines_of(dir / "lpoly_cache.jsonl").size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("cache keys distinguish the field modulus") {
  auto a = make_field_with_modulus(3, {1, 0});
  auto b = make_field_with_modulus(3, {2, 1});
  auto Ha = HyperellipticCurve::from_labels(a, {1, 2, 0, 0, 0});
  auto Hb = HyperellipticCurve::from_labels(b, {1, 2, 0, 0, 0});
  CHECK(LCache::key(Ha) != LCache::key(Hb));
}

TEST_CASE("cache directory resolution") {
  ::unsetenv("MODULI_CENSUS_CACHE");
  CHECK_FALSE(resolve_cache_dir("").has_value());
  CHECK(resolve_cache_dir("/tmp/x").value() == fs::path("/tmp/x"));
  ::setenv("MODULI_CENSUS_CACHE", "/tmp/env", 1);
  CHECK(resolve_cache_dir("/tmp/x").value() == fs::path("/tmp/env"));
  ::unsetenv("MODULI_CENSUS_CACHE");
}

TEST_CASE("moment CSV") {
  MomentReport rep;
  rep.rows.push_back(MomentRow{"deltaZ", 1, Real(0.5), Real(0.25), Real(1e-9), 0.01, false});
  rep.rows.push_back(MomentRow{"centered_mnd", 1, Real(1), Real(0), Real(0), std::nullopt, true});
  std::ostringstream os;
  write_moment_csv(os, rep);
  std::string s = os.str();
  CHECK(s.rfind("statistic,r,empirical,theoretical,tail,tolerance,pass\r\n", 0) == 0);
  CHECK(s.find(",false\r\n") != std::string::npos);
  CHECK(s.find("centered_mnd,1,") != std::string::npos);
}
