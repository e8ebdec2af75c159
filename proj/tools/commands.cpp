#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "census/errors.hpp"
#include "census/hn.hpp"
#include "census/records.hpp"

namespace census::cli {
namespace {

std::unique_ptr<LCache> open_cache(const Options& o) {
  auto dir = resolve_cache_dir(o.cache_dir);
  if (!dir) return nullptr;
  auto c = std::make_unique<LCache>(*dir);
  if (c->corrupt_lines())
    std::cerr << "cache: dropped " << c->corrupt_lines() << " corrupt line(s) from " << c->file().string()
              << "; they will be recomputed\n";
  return c;
}

LPolynomial curve_l(const HyperellipticCurve& H, const std::unique_ptr<LCache>& cache) {
  return cache ? cache->l_polynomial(H) : l_polynomial(H);
}

void report_verbose(const Options& o, const std::unique_ptr<LCache>& cache) {
  if (!o.verbose) return;
  std::cerr << "point_count_calls=" << point_count_calls();
  if (cache) std::cerr << " cache_hits=" << cache->hits() << " cache_misses=" << cache->misses();
  std::cerr << "\n";
}

Json exact_and_real(const mpq_class& x) { return Json{{"exact", x.get_str()}, {"value", format_real(to_real(x))}}; }

Json curve_header(const char* command, const HyperellipticCurve& H) {
  return Json{{"schema", kSchemaVersion}, {"command", command}, {"q", H.field->order()},
              {"gamma", H.gamma},         {"genus", H.genus},   {"F", H.F.low_labels()}};
}

void emit(const Options& o, std::ostream& out, const Json& j) {
  const std::string line = j.dump();
  out << line << "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::trunc);
    f << line << "\n";
    if (!f) throw ResourceError("cannot write " + o.out);
  }
}

ModuliInput moduli_input(const Options& o, const HyperellipticCurve& H, const std::unique_ptr<LCache>& cache, int r = 1) {
  LPolynomial L = curve_l(H, cache);
  if (r > 1) L = base_change(L, r);
  return ModuliInput::make(L, rational_two_torsion(H, r));
}

}  // namespace

std::vector<uint64_t> parse_labels(const std::string& s) {
  std::vector<uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw InputError("empty coefficient in --poly");
    item = item.substr(a, b - a + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("--poly coefficients must be nonnegative integer labels, got '" + item + "'");
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw InputError("--poly coefficient out of range: " + item);
    }
  }
  if (out.empty()) throw InputError("--poly is empty");
  return out;
}

HyperellipticCurve parse_curve(const Options& o) {
  if (o.q == 0) throw InputError("--q is required");
  if (o.poly.empty()) throw InputError("--poly is required");
  auto f = make_field_of_order(o.q);
  auto labels = parse_labels(o.poly);
  for (auto l : labels)
    if (l >= o.q) throw InputError("coefficient label " + std::to_string(l) + " is not below q");
  if (o.gamma > 0) {
    if (int(labels.size()) == o.gamma + 1 && labels.back() == 1) labels.pop_back();
    if (int(labels.size()) != o.gamma)
      throw InputError("--poly needs gamma = " + std::to_string(o.gamma) + " coefficients");
  } else if (labels.size() >= 6 && labels.back() == 1) {
    labels.pop_back();  // explicit leading coefficient
  }
  return HyperellipticCurve::from_labels(f, labels);
}

int cmd_curve(const Options& o, std::ostream& out) {
  auto H = parse_curve(o);
  auto cache = open_cache(o);
  auto L = curve_l(H, cache);
  Json j = curve_header("curve", H);
  Json counts = Json::object();
  for (int m = 1; m <= H.genus + 2; ++m) counts[std::to_string(m)] = points_from_l(L, m).get_str();
  j["N"] = counts;
  j["L"] = lpoly_to_json(L)["a"];
  j["NJ"] = jacobian_order(L, 1).get_str();
  j["NJ_q2"] = jacobian_order(L, 2).get_str();
  j["twist_order"] = twist_order(L).get_str();
  j["two_torsion"] = rational_two_torsion(H).get_str();
  Json z = Json::object();
  for (int k = 2; k <= 4; ++k) z[std::to_string(k)] = exact_and_real(zeta_value(L, k));
  j["zeta"] = z;
  emit(o, out, j);
  report_verbose(o, cache);
  return 0;
}

int cmd_moduli(const Options& o, std::ostream& out) {
  auto H = parse_curve(o);
  auto cache = open_cache(o);
  auto in = moduli_input(o, H, cache);
  auto c = count_ml(in.ctx, o.rank, o.deg);
  Json j = curve_header("moduli", H);
  j["rank"] = o.rank;
  j["deg"] = o.deg;
  j["value"] = c.value.get_str();
  j["statistics"] = Json{{"raw", format_real(statistic_mnd_raw(c.value, in.ctx.q, o.rank, H.genus))},
                         {"centered", format_real(statistic_mnd(c.value, in.ctx.q, o.rank, H.genus, H.delta))}};
  emit(o, out, j);
  report_verbose(o, cache);
  return 0;
}

int cmd_stable20(const Options& o, std::ostream& out) {
  auto H = parse_curve(o);
  auto cache = open_cache(o);
  auto in = moduli_input(o, H, cache);
  auto strata = parse_strata_model(o.strata);
  auto variant = parse_beta1_variant(o.beta1_variant);
  Json j = curve_header("stable20", H);
  j["strata"] = to_string(strata);
  j["beta1_variant"] = to_string(variant);
  auto k = kummer_strata(in, strata);
  j["kummer"] = Json{{"A", k.sizeA.get_str()}, {"B", k.sizeB.get_str()}, {"K0", k.sizeK0.get_str()}};
  j["assembly"] = ms20_assembly(in, strata, variant).get_str();
  if (variant == Beta1Variant::kPaper) j["closed_form"] = ms20_closed_form(in, strata).get_str();
  auto c = count_ms20(in, strata, variant);
  j["value"] = c.value.get_str();
  j["statistic"] = format_real(statistic_ms20(c.value, in.ctx.q, H.genus, H.delta));
  emit(o, out, j);
  report_verbose(o, cache);
  return 0;
}

int cmd_ntilde(const Options& o, std::ostream& out) {
  auto H = parse_curve(o);
  auto cache = open_cache(o);
  auto strata = parse_strata_model(o.strata);
  auto variant = parse_beta1_variant(o.beta1_variant);
  auto reading = parse_ntilde_reading(o.ntilde_reading);
  const int r = reading == NtildeReading::kBase ? 1 : 2;
  auto in = moduli_input(o, H, cache, r);
  auto parts = desingularization_parts(in, strata, variant);
  auto c = count_desingularization(in, strata, variant);
  Json j = curve_header("ntilde", H);
  j["reading"] = to_string(reading);
  j["strata"] = to_string(strata);
  j["beta1_variant"] = to_string(variant);
  j["parts"] = Json{{"ms20", parts.ms20.get_str()}, {"Y", parts.Y.get_str()}, {"R", parts.R.get_str()},
                    {"S", parts.S.get_str()},       {"K0", parts.K0.get_str()}};
  j["value"] = c.value.get_str();
  const mpz_class& Q = in.ctx.q;
  j["statistic"] = format_real(statistic_ntilde(c.value, Q, H.genus, H.delta));
  j["gap"] = format_real(statistic_ntilde_gap(c.value, jacobian_order(in.ctx.L, 2), Q, H.genus));
  emit(o, out, j);
  report_verbose(o, cache);
  return 0;
}

int cmd_survey(const Options& o, std::ostream& out) {
  if (o.q == 0) throw InputError("--q is required");
  if (o.gamma == 0) throw InputError("--gamma is required");
  if (!o.exhaustive && o.samples == 0) throw InputError("survey needs --exhaustive or --samples N");
  SurveyConfig cfg;
  cfg.q = o.q;
  cfg.gamma = o.gamma;
  cfg.exhaustive = o.exhaustive;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.Z = o.Z;
  cfg.n = o.rank;
  cfg.d = o.deg;
  cfg.r_max = o.r_max;
  cfg.degree_bound = o.degree_bound;
  cfg.threads = o.threads;
  cfg.strata = parse_strata_model(o.strata);
  cfg.beta1 = parse_beta1_variant(o.beta1_variant);
  cfg.ntilde_reading = parse_ntilde_reading(o.ntilde_reading);

  auto cache = open_cache(o);
  LSource source;
  if (cache) source = [&](const HyperellipticCurve& H) { return cache->l_polynomial(H); };

  std::ofstream jsonl, csv;
  std::ostream* rec_out = &out;
  std::ostream* csv_out = &std::cerr;
  if (!o.out.empty()) {
    jsonl.open(o.out + ".jsonl", std::ios::trunc);
    csv.open(o.out + ".csv", std::ios::trunc | std::ios::binary);
    std::ofstream conf(o.out + ".config.json", std::ios::trunc);
    conf << survey_config_json(cfg).dump(2) << "\n";
    if (!jsonl || !csv || !conf) throw ResourceError("cannot open output files with prefix " + o.out);
    rec_out = &jsonl;
    csv_out = &csv;
  }
  auto rep = survey(
      cfg, [&](const SurveyRecord& r) { *rec_out << survey_record_json(r, cfg).dump() << "\n"; }, source);
  write_moment_csv(*csv_out, rep);
  if (!o.out.empty()) {
    out << "wrote " << rep.curves << " records to " << o.out << ".jsonl; summary in " << o.out << ".csv\n";
  }
  if (rep.failed) std::cerr << rep.failed << " curve(s) failed; see the error fields in the records\n";
  report_verbose(o, cache);
  return rep.all_pass() ? 0 : 1;
}

int cmd_theory(const Options& o, std::ostream& out) {
  if (o.q == 0) throw InputError("--q is required");
  const mpz_class q(std::to_string(o.q));
  if (o.theory_kind == "hr") {
    write_csv_row(out, {"form", "q", "r", "D", "value", "tail"});
    const int lo = o.r > 0 ? o.r : 1, hi = o.r > 0 ? o.r : o.r_max;
    for (int r = lo; r <= hi; ++r) {
      for (auto form : {HForm::kPrimePowers, HForm::kDistinctPrimes}) {
        auto h = moment_h(q, r, o.degree_bound, form);
        write_csv_row(out, {form == HForm::kPrimePowers ? "prime_powers" : "distinct_primes", std::to_string(o.q),
                            std::to_string(r), std::to_string(o.degree_bound), format_real(h.value, 20),
                            format_real(h.tail, 6)});
      }
    }
    return 0;
  }
  if (o.theory_kind == "phi") {
    std::vector<double> taus = o.tau.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : o.tau;
    write_csv_row(out, {"tau", "re", "im"});
    for (double t : taus) {
      auto v = char_fn_phi(q, t, o.degree_bound, o.r_max);
      write_csv_row(out, {format_real(Real(t), 17), format_real(Real(v.real()), 17), format_real(Real(v.imag()), 17)});
    }
    return 0;
  }
  throw InputError("theory needs 'hr' or 'phi'");
}

namespace {

struct CheckRow {
  std::string name;
  bool pass;
  std::string detail;
};

}  // namespace

int cmd_check(const Options& o, std::ostream& out) {
  std::vector<CheckRow> rows;
  auto run = [&](const std::string& name, const std::function<std::string()>& fn) {
    try {
      rows.push_back({name, true, fn()});
    } catch (const std::exception& e) {
      rows.push_back({name, false, e.what()});
    }
  };
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvariantError(what);
  };
  const auto strata = parse_strata_model(o.strata);
  const auto variant = parse_beta1_variant(o.beta1_variant);

  run("finite-field laws (F_9, F_27, F_25)", [&] {
    uint64_t n = 0;
    for (uint64_t q : {9, 27, 25}) {
      auto f = make_field_of_order(q);
      for (uint64_t a = 1; a < q; ++a) {
        auto x = f->from_label(a);
        require((x * x.inv()).is_one(), "inverse");
        require(x.pow(q) == x, "Frobenius fixes F_q");
        ++n;
      }
    }
    return std::to_string(n) + " elements";
  });
  run("prime polynomial theorem (q=3, m<=6)", [&] {
    auto f = make_field(3, 1);
    for (int m = 1; m <= 6; ++m) {
      mpz_class s = 0;
      for (int d = 1; d <= m; ++d)
        if (m % d == 0) s += d * mpz_class(static_cast<unsigned long>(irreducibles_of_degree(*f, d).size()));
      mpz_class qm;
      mpz_ui_pow_ui(qm.get_mpz_t(), 3, m);
      require(s == qm, "sum d N_d != q^m");
    }
    return std::string("ok");
  });

  std::vector<HyperellipticCurve> curves;
  {
    std::vector<std::pair<uint64_t, std::vector<uint64_t>>> specs{
        {3, {1, 2, 0, 0, 0}}, {3, {0, 1, 0, 0, 0}}, {5, {1, 0, 3, 0, 0}}, {5, {2, 1, 1, 4, 0, 1, 0}}, {7, {3, 0, 1, 0, 0, 2}}};
    for (auto& [q, low] : specs) curves.push_back(HyperellipticCurve::from_labels(make_field_of_order(q), low));
  }
  run("golden C_L: floor forms and beta'(2,0)", [&] {
    int n = 0;
    for (auto& H : curves) {
      auto ctx = CurveContext::make(l_polynomial(H));
      require(c_l(ctx, {1, 1}, 0) == beta_prime_20(ctx), "C(1,1;0) != beta'");
      for (long d = 0; d <= 2; ++d, ++n) {
        require(c_l(ctx, {1, 1, 1}, d) == c111_floor_form(ctx, d), "C(1,1,1)");
        require(c_l(ctx, {2, 1}, d) == c21_floor_form(ctx, d), "C(2,1)");
        require(c_l(ctx, {1, 2}, d) == c12_floor_form(ctx, d), "C(1,2)");
      }
    }
    return std::to_string(n) + " (curve, d) pairs";
  });
  run("box oracle (n<=3, R=20)", [&] {
    int n = 0;
    for (size_t i = 0; i < 3; ++i) {
      auto ctx = CurveContext::make(l_polynomial(curves[i]));
      for (int r = 2; r <= 3; ++r)
        for (const auto& comp : compositions(r))
          for (long d = 0; d < r; ++d, ++n) {
            auto box = c_l_box_oracle(ctx, comp, d, 20);
            mpq_class diff = c_l(ctx, comp, d) - box.value;
            require(diff >= 0 && diff <= box.tail_bound, "outside certified tail");
          }
    }
    return std::to_string(n) + " strata";
  });
  run("integrality (" + to_string(strata) + " strata, " + to_string(variant) + " beta1)", [&] {
    for (auto& H : curves) {
      auto in = ModuliInput::make(H);
      for (auto [n, d] : std::vector<std::pair<int, long>>{{2, 1}, {3, 1}, {3, 2}, {4, 1}}) count_ml(in.ctx, n, d);
      count_ms20(in, strata, variant);
      count_desingularization(in, strata, variant);
    }
    return std::to_string(curves.size()) + " curves";
  });
  run("Delta_Z path equality (q=3, Z<=6)", [&] {
    auto f = make_field(3, 1);
    PrimeTable primes(f, 6);
    int n = 0;
    for (uint64_t i = 0; i < 10; ++i) {
      auto H = HyperellipticCurve::make(f, sample_curve(f, 5 + int(i % 3), 99, i));
      auto L = l_polynomial(H);
      for (int Z = 1; Z <= 6; ++Z, ++n)
        require(delta_z_characters(H, Z, primes) == delta_z_spectral(L, H.delta, Z), "paths disagree");
    }
    return std::to_string(n) + " comparisons";
  });
  run("H(r) cross-form (r<=3, q in {3,5,7}, D=12)", [&] {
    for (int q : {3, 5, 7})
      for (int r = 1; r <= 3; ++r) {
        auto a = moment_h(q, r, 12, HForm::kPrimePowers), b = moment_h(q, r, 12, HForm::kDistinctPrimes);
        require(abs(a.value - b.value) <= a.tail + b.tail, "forms disagree");
      }
    return std::string("ok");
  });
  if (auto dir = resolve_cache_dir(o.cache_dir)) {
    run("L-polynomial cache", [&] {
      LCache cache(*dir);
      std::string note = std::to_string(cache.corrupt_lines()) + " corrupt line(s) dropped";
      for (auto& H : curves) require(cache.l_polynomial(H) == l_polynomial(H), "cached L differs");
      return note + ", " + std::to_string(cache.hits()) + " hit(s)";
    });
  }
  bool ok = true;
  for (const auto& r : rows) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.pass;
  }
  return ok ? 0 : 5;
}

}  // namespace census::cli
