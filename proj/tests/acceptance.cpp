// Acceptance battery: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "census/errors.hpp"
#include "census/family.hpp"
#include "census/hn.hpp"
#include "census/moduli.hpp"
#include "census/records.hpp"

using namespace census;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string fmt(const Real& x) { return fmt(static_cast<double>(x)); }

HyperellipticCurve random_curve(const FieldPtr& f, int gamma, uint64_t seed, uint64_t index) {
  return HyperellipticCurve::make(f, sample_curve(f, gamma, seed, index));
}

HyperellipticCurve random_curve(uint64_t q, int gamma, uint64_t seed, uint64_t index) {
  return random_curve(make_field_of_order(q), gamma, seed, index);
}

// 1. integrality
Outcome integrality() {
  Outcome o;
  int curves = 0, counts = 0;
  for (uint64_t q : {3, 5, 7}) {
    for (int gamma : {5, 7}) {
      for (uint64_t i = 0; i < 50; ++i, ++curves) {
        auto H = random_curve(q, gamma, 1001, i);
        try {
          auto in = ModuliInput::make(H);
          for (auto [n, d] : std::vector<std::pair<int, long>>{{2, 1}, {3, 1}, {3, 2}, {4, 1}}) {
            count_ml(in.ctx, n, d);
            ++counts;
          }
          count_ms20(in);
          count_desingularization(in);
          counts += 2;
        } catch (const Error& e) {
          o.pass = false;
          if (o.detail.empty()) o.detail = "q=" + std::to_string(q) + " gamma=" + std::to_string(gamma) + ": " + e.what();
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(counts) + " counts on " + std::to_string(curves) + " curves integral and positive";
  return o;
}

// 2. printed rank-3 forms and C_L(1,1;0)
Outcome golden() {
  int c111_bad = 0, c21_bad = 0, c11_bad = 0, cases = 0;
  const std::vector<std::pair<uint64_t, int>> shapes{{3, 5}, {3, 6}, {5, 5}, {5, 7}, {7, 5}};
  for (uint64_t i = 0; i < 10; ++i) {
    auto [q, gamma] = shapes[i % shapes.size()];
    auto ctx = CurveContext::make(l_polynomial(random_curve(q, gamma, 2002, i)));
    const mpz_class& Q = ctx.q;
    mpz_class qg;
    mpz_pow_ui(qg.get_mpz_t(), Q.get_mpz_t(), ctx.g - 1);
    mpq_class c11(ctx.NJ * qg, (Q - 1) * (Q - 1) * (Q - 1) * (Q + 1));
    c11.canonicalize();
    c11_bad += c_l(ctx, {1, 1}, 0) != c11;
    for (long d = 0; d <= 2; ++d, ++cases) {
      c111_bad += c_l(ctx, {1, 1, 1}, d) != c111_closed_form(ctx);
      c21_bad += c_l(ctx, {2, 1}, d) != c21_closed_form(ctx);
    }
  }
  Outcome o;
  o.pass = c111_bad == 0 && c21_bad == 0 && c11_bad == 0;
  o.detail = "C(1,1,1) printed form mismatches " + std::to_string(c111_bad) + "/" + std::to_string(cases) +
             ", C(2,1) printed form mismatches " + std::to_string(c21_bad) + "/" + std::to_string(cases) +
             ", C(1,1;0) mismatches " + std::to_string(c11_bad) + "/10";
  return o;
}

// 3. box oracle
Outcome box_oracle() {
  Outcome o;
  int checked = 0;
  double worst = 0;
  for (uint64_t q : {3, 5}) {
    for (uint64_t i = 0; i < 2; ++i) {
      auto ctx = CurveContext::make(l_polynomial(random_curve(q, 5 + int(i), 3003, i)));
      for (int n = 2; n <= 4; ++n) {
        for (const auto& comp : compositions(n)) {
          for (long d = 0; d < n; ++d, ++checked) {
            auto box = c_l_box_oracle(ctx, comp, d, 60);
            mpq_class diff = c_l(ctx, comp, d) - box.value;
            if (abs(diff) > box.tail_bound) o.pass = false;
            if (box.tail_bound > 0) worst = std::max(worst, mpq_class(abs(diff) / box.tail_bound).get_d());
          }
        }
      }
    }
  }
  o.detail = std::to_string(checked) + " strata, max |diff|/tail = " + fmt(worst);
  return o;
}

// 4. L-polynomials
Outcome lpoly_soundness() {
  Outcome o;
  int weil = 0, roundtrip = 0;
  auto fail = [&](const std::string& why) {
    if (o.pass) o.detail = why;
    o.pass = false;
  };
  const std::vector<std::pair<uint64_t, int>> shapes{{3, 5}, {3, 6}, {5, 5}, {5, 7}, {7, 5}, {7, 6}, {9, 5}, {11, 7}};
  for (uint64_t i = 0; i < 200; ++i) {
    auto [q, gamma] = shapes[i % shapes.size()];
    auto H = random_curve(q, gamma, 4004, i);
    auto L = l_polynomial(H);
    try {
      check_functional_equation(L);
    } catch (const Error& e) {
      fail(e.what());
    }
    for (int r = 1; r <= 2; ++r, ++weil) {
      Real s = pow(Real(q), Real(r) / 2);
      Real lo = pow(s - 1, 2 * L.g), hi = pow(s + 1, 2 * L.g);
      Real nj = to_real(jacobian_order(L, r));
      if (nj < lo || nj > hi) fail("N_{q^" + std::to_string(r) + "}(J) outside the Weil interval");
    }
    if (q == 3 && gamma == 5) {
      for (int m = L.g + 1; m <= L.g + 2; ++m, ++roundtrip)
        if (points_from_l(L, m) != count_points(H, m, Kernel::kReference)) fail("round trip N_" + std::to_string(m));
    }
  }
  if (o.pass)
    o.detail = "200 functional equations, " + std::to_string(weil) + " Weil intervals, " + std::to_string(roundtrip) +
               " brute-force round trips";
  return o;
}

// 5. Delta_Z paths
Outcome delta_paths() {
  Outcome o;
  auto f = make_field_of_order(3);
  PrimeTable primes(f, 6);
  int n = 0;
  for (uint64_t i = 0; i < 20; ++i) {
    auto H = random_curve(f, 5 + int(i % 2), 5005, i);
    auto L = l_polynomial(H);
    for (int Z = 1; Z <= 6; ++Z, ++n)
      if (delta_z_characters(H, Z, primes) != delta_z_spectral(L, H.delta, Z)) o.pass = false;
  }
  o.detail = std::to_string(n) + " exact comparisons";
  return o;
}

SurveyConfig exhaustive_q3() {
  SurveyConfig c;
  c.q = 3;
  c.gamma = 5;
  c.exhaustive = true;
  c.Z = 5;
  return c;
}

// 6. moment identity
Outcome moment_identity() {
  auto rep = survey(exhaustive_q3(), [](const SurveyRecord&) {});
  Outcome o;
  o.pass = rep.failed == 0;
  std::ostringstream s;
  s << rep.curves << " curves";
  for (const auto& row : rep.rows) {
    if (row.statistic != "deltaZ" || row.r > 2) continue;
    Real gap = abs(row.empirical - row.theoretical);
    o.pass = o.pass && row.pass;
    s << "; r=" << row.r << " |<D^r>-H|=" << fmt(gap) << " <= " << fmt(*row.tolerance) << "+" << fmt(row.tail);
  }
  o.detail = s.str();
  return o;
}

// 7. H(r) cross-form
Outcome h_cross_form() {
  Outcome o;
  double worst = 0;
  for (uint64_t q : {3, 5, 7}) {
    for (int r = 1; r <= 3; ++r) {
      auto a = moment_h(q, r, 12, HForm::kPrimePowers);
      auto b = moment_h(q, r, 12, HForm::kDistinctPrimes);
      Real gap = abs(a.value - b.value), tol = a.tail + b.tail;
      if (gap > tol) o.pass = false;
      worst = std::max(worst, static_cast<double>(gap / tol));
    }
  }
  o.detail = "9 (q, r) pairs, max gap/tail = " + fmt(worst);
  return o;
}

// 8. H(r) asymptotics
Outcome h_asymptotics() {
  Outcome o;
  std::ostringstream s;
  for (uint64_t q : {9, 13, 25}) {
    Real q3 = pow(Real(q), 3);
    auto h1 = moment_h(q, 1, 12), h2 = moment_h(q, 2, 12);
    Real e2 = abs(h2.value * q3 - 1) + h2.tail * q3;
    Real e1 = abs(h1.value) * q3 + h1.tail * q3;
    Real b2 = 20 / pow(Real(q), Real(3) / 2);
    if (e2 > b2 || e1 > 20) o.pass = false;
    s << (q == 9 ? "" : "; ") << "q=" << q << " H(2)q^3=" << fmt(h2.value * q3) << " H(1)q^3=" << fmt(h1.value * q3);
  }
  o.detail = s.str();
  return o;
}

// 9. CLT desk check
struct CltOutcome {
  Outcome main, centered;
};

CltOutcome clt() {
  SurveyConfig c;
  c.q = 13;
  c.gamma = 9;
  c.samples = 20'000;
  c.seed = 9009;
  c.threads = 8;
  std::vector<Real> centered;
  const Real scale = pow(Real(13), Real(3) / 2);
  auto rep = survey(c, [&](const SurveyRecord& r) {
    if (r.error.empty()) centered.push_back(scale * r.centered_mnd);
  });
  auto judge = [](const Standardized& m) {
    return abs(m.mean) <= 0.05 && abs(m.var - 1) <= 0.15 && abs(m.skew) <= 0.2 && abs(m.kurt - 3) <= 0.4;
  };
  auto show = [](const std::string& name, const Standardized& m) {
    return name + " (mean " + fmt(m.mean) + ", var " + fmt(m.var) + ", skew " + fmt(m.skew) + ", kurt " +
           fmt(m.kurt) + ")";
  };
  CltOutcome o;
  const bool a = judge(rep.mnd_scaled), b = judge(rep.ms20_scaled), n = judge(rep.ntilde_scaled);
  o.main.pass = a && b && n && rep.failed == 0;
  o.main.detail = std::to_string(rep.curves) + " samples; " + show(std::string("M_L(2,1) ") + (a ? "ok" : "off"), rep.mnd_scaled) +
                  "; " + show(std::string("M^s ") + (b ? "ok" : "off"), rep.ms20_scaled) + "; " +
                  show(std::string("Ntilde ") + (n ? "ok" : "off"), rep.ntilde_scaled);
  auto m = standardized_moments(centered);
  o.centered.pass = judge(m);
  o.centered.detail = show("centered M_L(2,1)", m);
  return o;
}

// 10. bound monitoring
Outcome bounds() {
  Outcome o;
  std::ostringstream s;
  int bound_bad = 0, gap_bad = 0, seen = 0;
  double worst_ratio = 0, worst_gap = 0;
  for (uint64_t q : {9, 13, 25}) {
    for (int gamma : {7, 9}) {
      SurveyConfig c;
      c.q = q;
      c.gamma = gamma;
      c.samples = 200;
      c.seed = 10010 + q * 100 + gamma;
      const int g = (gamma - 1) / 2;
      const double A = 2 * (1 / std::sqrt(double(q)) + std::log(std::log(double(g))) / (double(q) * q));
      survey(c, [&](const SurveyRecord& r) {
        ++seen;
        if (!r.error.empty()) {
          ++bound_bad;
          return;
        }
        double dev = std::fabs(static_cast<double>(r.raw_mnd));
        worst_ratio = std::max(worst_ratio, dev / (10 * A));
        bound_bad += dev > 10 * A;
        double gap = std::fabs(static_cast<double>(r.ntilde_gap) - std::log(0.5));
        worst_gap = std::max(worst_gap, gap);
        gap_bad += gap > 1;
      });
    }
  }
  o.pass = bound_bad == 0 && gap_bad == 0;
  s << seen << " samples; M_L(2,1) bound violations " << bound_bad << " (max dev/10A " << fmt(worst_ratio)
    << "); Ntilde gap violations " << gap_bad << " (max |gap-log(1/2)| " << fmt(worst_gap) << ")";
  o.detail = s.str();
  return o;
}

// 11. determinism
Outcome determinism() {
  auto render = [](SurveyConfig c, int threads) {
    c.threads = threads;
    std::ostringstream s;
    auto rep = survey(c, [&](const SurveyRecord& r) { s << survey_record_json(r, c).dump() << "\n"; });
    write_moment_csv(s, rep);
    return s.str();
  };
  SurveyConfig sampled;
  sampled.q = 7;
  sampled.gamma = 7;
  sampled.samples = 1000;
  sampled.seed = 11011;
  Outcome o;
  size_t bytes = 0;
  for (const auto& c : {exhaustive_q3(), sampled}) {
    auto one = render(c, 1), eight = render(c, 8);
    bytes += one.size();
    if (one != eight) o.pass = false;
  }
  o.detail = std::to_string(bytes) + " bytes compared (exhaustive q=3 and 1000 samples at q=7), threads 1 vs 8";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int k) { return only.empty() || only.count(k); };

  bool all = true;
  auto report = [&](const std::string& tag, const std::string& name, const Outcome& o, double secs, bool counts) {
    if (counts) all = all && o.pass;
    std::printf("%s %-4s %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", tag.c_str(), name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  };
  auto timed = [&](int k, const std::string& name, const std::function<Outcome()>& fn) {
    if (!wanted(k)) return;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report("C" + std::to_string(k), name, o, dt.count(), true);
  };

  timed(1, "integrality battery", integrality);
  timed(2, "golden closed forms", golden);
  timed(3, "box-oracle agreement", box_oracle);
  timed(4, "L-polynomial soundness", lpoly_soundness);
  timed(5, "Delta_Z two paths", delta_paths);
  timed(6, "moment identity", moment_identity);
  timed(7, "H(r) cross-form", h_cross_form);
  timed(8, "H(r) asymptotics", h_asymptotics);
  if (wanted(9)) {
    auto t0 = std::chrono::steady_clock::now();
    CltOutcome o;
    try {
      o = clt();
    } catch (const std::exception& e) {
      o.main = {false, std::string("exception: ") + e.what()};
      o.centered = {false, "not run"};
    }
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report("C9", "CLT desk check", o.main, dt.count(), true);
    report("info", "CLT, centered statistic", o.centered, 0, false);
  }
  timed(10, "bound monitoring", bounds);
  timed(11, "determinism", determinism);
  return all ? 0 : 1;
}
