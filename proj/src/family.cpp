#include "census/family.hpp"

#include <omp.h>

#include <cmath>
#include <map>
#include <random>

#include "census/errors.hpp"

namespace census {

Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real to_real(const mpq_class& x) {
  Real r;
  mpfr_set_q(r.backend().data(), x.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real log_exact(const mpz_class& z) {
  if (z <= 0) throw InvariantError("log of a non-positive count");
  return log(to_real(z));
}

Real log_exact(const mpq_class& x) {
  if (x <= 0) throw InvariantError("log of a non-positive value");
  return log_exact(mpz_class(x.get_num())) - log_exact(mpz_class(x.get_den()));
}

std::string format_real(const Real& x, int digits) {
  if (x == 0) return "0";
  return x.str(digits, std::ios_base::scientific);
}

namespace {

mpz_class zpow(const mpz_class& q, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// rejection keeps the draw uniform and independent of the standard library
uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

uint64_t checked_scan_size(uint64_t q, int gamma) {
  unsigned __int128 total = 1;
  for (int i = 0; i < gamma; ++i) {
    total *= q;
    if (total > kMaxFamilyScan)
      throw ResourceError("exhaustive family exceeds " + std::to_string(kMaxFamilyScan) + " monic polynomials");
  }
  return static_cast<uint64_t>(total);
}

}  // namespace

mpz_class family_size(const mpz_class& q, int gamma) { return zpow(q, gamma) - zpow(q, gamma - 1); }

Poly monic_from_index(const FieldSpec& f, int gamma, uint64_t j) {
  std::vector<uint64_t> low(gamma);
  for (int i = 0; i < gamma; ++i) {
    low[i] = j % f.order();
    j /= f.order();
  }
  return Poly::monic_from_labels(f, low);
}

void enumerate_family(const FieldPtr& f, int gamma, const std::function<void(const Poly&)>& fn) {
  if (gamma < 5) throw InputError("gamma must be at least 5");
  const uint64_t total = checked_scan_size(f->order(), gamma);
  for (uint64_t j = 0; j < total; ++j) {
    Poly F = monic_from_index(*f, gamma, j);
    if (is_squarefree(F)) fn(F);
  }
}

Poly sample_curve(const FieldPtr& f, int gamma, uint64_t seed, uint64_t index, uint64_t* attempts) {
  if (gamma < 5) throw InputError("gamma must be at least 5");
  for (uint64_t attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    std::seed_seq ss{uint32_t(seed), uint32_t(seed >> 32), uint32_t(index), uint32_t(index >> 32),
                     uint32_t(attempt), uint32_t(attempt >> 32)};
    std::mt19937_64 rng(ss);
    std::vector<uint64_t> low(gamma);
    for (auto& c : low) c = uniform_below(rng, f->order());
    Poly F = Poly::monic_from_labels(*f, low);
    if (is_squarefree(F)) {
      if (attempts) *attempts = attempt + 1;
      return F;
    }
  }
  throw ResourceError("squarefree sampling exceeded the attempt cap");
}

// ---------------------------------------------------------------- statistics

Real mnd_centering_constant(const mpz_class& q, int n) {
  mpz_class den = 1;
  for (int k = 2; k <= n; ++k) den *= (zpow(q, k - 1) - 1) * (zpow(q, k) - 1);
  return log_exact(mpq_class(zpow(q, long(n) * n - 1), den));
}

Real statistic_mnd_raw(const mpz_class& count, const mpz_class& q, int n, int g) {
  return log_exact(count) - Real(long(n) * n - 1) * Real(g - 1) * log_exact(q);
}

Real statistic_mnd(const mpz_class& count, const mpz_class& q, int n, int g, int delta) {
  Real v = statistic_mnd_raw(count, q, n, g) - mnd_centering_constant(q, n);
  if (delta) {
    mpq_class prod = 1;
    for (int k = 2; k <= n; ++k) prod *= 1 - mpq_class(1, zpow(q, k));
    v += log_exact(prod);
  }
  return v;
}

Real statistic_ms20(const mpz_class& count, const mpz_class& q, int g, int delta) {
  Real v = log_exact(count) - Real(3 * (g - 1)) * log_exact(q) -
           log_exact(mpq_class(zpow(q, 3), (q - 1) * (q - 1) * (q + 1)));
  if (delta) v += log_exact(1 - mpq_class(1, q * q));
  return v;
}

Real statistic_ntilde(const mpz_class& count, const mpz_class& q, int g, int delta) {
  Real v = log_exact(count) - Real(4 * g - 4) * log_exact(q);
  if (delta) v += log_exact(1 - mpq_class(1, q * q));
  return v;
}

Real statistic_ntilde_gap(const mpz_class& count, const mpz_class& nj_q2, const mpz_class& q, int g) {
  Real lq = log_exact(q);
  return (log_exact(count) - Real(4 * g - 4) * lq) - (log_exact(nj_q2) - Real(2 * g) * lq);
}

// ---------------------------------------------------------------- Delta_Z

PrimeTable::PrimeTable(FieldPtr f, int max_degree) : field(std::move(f)), by_degree(max_degree + 1) {
  for (int m = 1; m <= max_degree; ++m) by_degree[m] = irreducibles_of_degree(*field, m);
}

mpq_class delta_z_characters(const HyperellipticCurve& H, int Z, const PrimeTable& primes) {
  if (Z < 1) throw InputError("Z must be positive");
  if (primes.max_degree() < Z) throw InputError("prime table too short for Z");
  if (primes.field.get() != H.field.get()) throw InputError("prime table built over another field");
  std::vector<std::vector<int>> chi(Z + 1);
  for (int d = 1; d <= Z; ++d)
    for (const auto& P : primes.by_degree[d]) chi[d].push_back(legendre_poly(H.F, P, false));
  const mpz_class q = H.field->order_big();
  mpq_class total = 0;
  for (int m = 1; m <= Z; ++m) {
    long inner = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d) continue;
      const int k = m / d;
      for (int c : chi[d]) inner += d * ((k % 2 == 0) ? c * c : c);
    }
    total += mpq_class(inner) / mpq_class(zpow(q, 2 * m) * m);
  }
  return total;
}

mpq_class delta_z_characters(const HyperellipticCurve& H, int Z) {
  return delta_z_characters(H, Z, PrimeTable(H.field, Z));
}

mpq_class delta_z_spectral(const LPolynomial& L, int delta, int Z) {
  if (Z < 1) throw InputError("Z must be positive");
  auto s = power_sums(L, Z);
  mpq_class total = 0;
  for (int m = 1; m <= Z; ++m) total += mpq_class(-s[m] - delta) / mpq_class(zpow(L.q, 2 * m) * m);
  return total;
}

// ----------------------------------------------------------------- H(r)

namespace {

struct DegreeData {
  Real N, y, c, u, v;
};

std::vector<DegreeData> degree_data(const mpz_class& q, int D, LocalFactor lf) {
  std::vector<DegreeData> out;
  const Real Q = to_real(q);
  for (int d = 1; d <= D; ++d) {
    DegreeData x;
    x.N = to_real(count_irreducibles(q, d));
    Real inv = pow(Q, -d);
    x.y = inv * inv;
    x.c = lf == LocalFactor::kDensity ? Real(1) / (1 + inv) : (1 - inv) * (1 + x.y);
    x.u = -log1p(-x.y);
    x.v = log1p(x.y);
    out.push_back(x);
  }
  return out;
}

// log(1 + f) for f_0 = 0, truncated at degree n
std::vector<Real> series_log1p(const std::vector<Real>& f) {
  const size_t n = f.size();
  std::vector<Real> g(n, Real(0));
  for (size_t k = 1; k < n; ++k) {
    Real acc = Real(k) * f[k];
    for (size_t j = 1; j < k; ++j) acc -= Real(j) * g[j] * f[k - j];
    g[k] = acc / Real(k);
  }
  return g;
}

std::vector<Real> series_exp(const std::vector<Real>& a) {
  const size_t n = a.size();
  std::vector<Real> h(n, Real(0));
  h[0] = 1;
  for (size_t k = 1; k < n; ++k) {
    Real acc = 0;
    for (size_t j = 1; j <= k; ++j) acc += Real(j) * a[j] * h[k - j];
    h[k] = acc / Real(k);
  }
  return h;
}

Real factorial(int r) {
  Real f = 1;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

HValue moment_prime_powers(const mpz_class& q, int r, int D, LocalFactor lf) {
  auto data = degree_data(q, D, lf);
  std::vector<Real> A(r + 1, Real(0));
  Real B = 0;
  for (int d = 1; d <= D; ++d) {
    const auto& x = data[d - 1];
    const int K = D / d;
    Real sp = 0, sm = 0, yk = 1;
    for (int k = 1; k <= K; ++k) {
      yk *= x.y;
      sp += yk / k;
      sm += (k % 2 ? -yk : yk) / k;
    }
    B += x.N * sp;
    std::vector<Real> f(r + 1, Real(0));
    for (int b = 1; b <= r; ++b) f[b] = x.c * (pow(sp, b) + pow(sm, b)) / 2 / factorial(b);
    auto g = series_log1p(f);
    for (int k = 1; k <= r; ++k) A[k] += x.N * g[k];
  }
  auto h = series_exp(A);
  const Real Q = to_real(q);
  Real tau = pow(Q, -D) / (Real(D + 1) * (Q - 1));
  return HValue{factorial(r) * h[r], pow(B + tau, r) - pow(B, r)};
}

void compositions_into(int r, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (m == 0) {
    if (r == 0) out.push_back(cur);
    return;
  }
  for (int x = 1; x <= r - (m - 1); ++x) {
    cur.push_back(x);
    compositions_into(r - x, m - 1, cur, out);
    cur.pop_back();
  }
}

// restricted growth strings of length m
void set_partitions(int m, const std::function<void(const std::vector<int>&, int)>& fn) {
  std::vector<int> a(m, 0);
  auto rec = [&](auto&& self, int i, int blocks) -> void {
    if (i == m) {
      fn(a, blocks);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      a[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  if (m == 0) fn(a, 0);
  else rec(rec, 0, 0);
}

HValue moment_distinct_primes(const mpz_class& q, int r, int D, LocalFactor lf) {
  auto data = degree_data(q, D, lf);
  // hv[d][l] = c (u^l + (-v)^l) / l!
  std::vector<std::vector<Real>> hv(D, std::vector<Real>(r + 1, Real(0)));
  for (int d = 0; d < D; ++d)
    for (int l = 1; l <= r; ++l) {
      const auto& x = data[d];
      hv[d][l] = x.c * (pow(x.u, l) + pow(-x.v, l)) / factorial(l);
    }
  Real total = 0;
  for (int m = 1; m <= r; ++m) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions_into(r, m, cur, comps);
    Real sum_m = 0;
    for (const auto& lam : comps) {
      Real distinct = 0;
      set_partitions(m, [&](const std::vector<int>& a, int blocks) {
        Real term = 1;
        for (int b = 0; b < blocks; ++b) {
          int size = 0;
          Real pb = 0;
          for (int d = 0; d < D; ++d) {
            Real prod = data[d].N;
            for (int j = 0; j < m; ++j)
              if (a[j] == b) prod *= hv[d][lam[j]];
            pb += prod;
          }
          for (int j = 0; j < m; ++j) size += a[j] == b;
          term *= pb * ((size % 2) ? 1 : -1) * factorial(size - 1);
        }
        distinct += term;
      });
      sum_m += distinct;
    }
    total += factorial(r) / (pow(Real(2), m) * factorial(m)) * sum_m;
  }
  Real B = 0;
  for (const auto& x : data) B += x.N * x.u;
  const Real Q = to_real(q);
  Real tau = 2 * pow(Q, -D) / (Real(D + 1) * (Q - 1));
  return HValue{total, pow(B + tau, r) - pow(B, r)};
}

}  // namespace

HValue moment_h(const mpz_class& q, int r, int D, HForm form, LocalFactor lf) {
  if (q < 3) throw InputError("q must be at least 3");
  if (r < 0 || r > 6) throw InputError("moment order must be in 0..6");
  if (D < 1) throw InputError("degree bound must be positive");
  if (r == 0) return HValue{Real(1), Real(0)};
  return form == HForm::kPrimePowers ? moment_prime_powers(q, r, D, lf) : moment_distinct_primes(q, r, D, lf);
}

std::complex<double> char_fn_phi(const mpz_class& q, double tau, int D, int r_max, LocalFactor lf) {
  using C = std::complex<long double>;
  if (r_max < 0) throw InputError("r_max must be nonnegative");
  auto data = degree_data(q, D, lf);
  std::vector<C> A(r_max + 1, C(0));
  const C i(0, 1);
  for (const auto& x : data) {
    const long double u = x.u.convert_to<long double>();
    const long double v = x.v.convert_to<long double>();
    const long double c = x.c.convert_to<long double>();
    const long double N = x.N.convert_to<long double>();
    // (1 - y)^{-i tau} = exp(i tau u), (1 + y)^{-i tau} = exp(-i tau v)
    C g = c * (std::exp(i * (long double)tau * u) + std::exp(-i * (long double)tau * v) - 2.0L);
    C a = g / 2.0L, ak = 1;
    for (int k = 1; k <= r_max; ++k) {
      ak *= a;
      A[k] += N * ak * ((k % 2) ? 1.0L : -1.0L) / (long double)k;
    }
  }
  std::vector<C> h(r_max + 1, C(0));
  h[0] = 1;
  for (int k = 1; k <= r_max; ++k) {
    C acc = 0;
    for (int j = 1; j <= k; ++j) acc += (long double)j * A[j] * h[k - j];
    h[k] = acc / (long double)k;
  }
  C phi = 0;
  for (const auto& c : h) phi += c;
  return std::complex<double>(double(phi.real()), double(phi.imag()));
}

// ----------------------------------------------------------------- survey

NtildeReading parse_ntilde_reading(const std::string& s) {
  if (s == "base") return NtildeReading::kBase;
  if (s == "base-change") return NtildeReading::kBaseChange;
  throw InputError("unknown ntilde reading: " + s);
}

std::string to_string(NtildeReading r) { return r == NtildeReading::kBase ? "base" : "base-change"; }

SurveyRecord analyze_curve(const HyperellipticCurve& H, const SurveyConfig& cfg, const PrimeTable* primes,
                           uint64_t index, const LSource& lsource) {
  SurveyRecord rec;
  rec.index = index;
  rec.F = H.F.low_labels();
  rec.genus = H.genus;
  rec.delta = H.delta;
  try {
    const mpz_class q = H.field->order_big();
    const int g = H.genus;
    rec.L = lsource ? lsource(H) : l_polynomial(H);
    rec.NJ = jacobian_order(rec.L, 1);
    rec.NJ_q2 = jacobian_order(rec.L, 2);
    rec.two_torsion = rational_two_torsion(H, 1);
    auto in = ModuliInput::make(rec.L, rec.two_torsion);
    rec.ml = count_ml(in.ctx, cfg.n, cfg.d).value;
    rec.ms20 = count_ms20(in, cfg.strata, cfg.beta1).value;

    const int Z = cfg.truncation();
    rec.delta_z = delta_z_spectral(rec.L, H.delta, Z);
    if (primes && primes->max_degree() >= Z) {
      mpq_class other = delta_z_characters(H, Z, *primes);
      if (other != rec.delta_z) throw InvariantError("Delta_Z paths disagree");
      rec.delta_z_checked = true;
    }
    rec.delta_z_real = to_real(rec.delta_z);
    rec.raw_mnd = statistic_mnd_raw(rec.ml, q, cfg.n, g);
    rec.centered_mnd = statistic_mnd(rec.ml, q, cfg.n, g, H.delta);
    rec.ms20_stat = statistic_ms20(rec.ms20, q, g, H.delta);
    if (cfg.ntilde_reading == NtildeReading::kBase) {
      rec.ntilde = count_desingularization(in, cfg.strata, cfg.beta1).value;
      rec.ntilde_stat = statistic_ntilde(rec.ntilde, q, g, H.delta);
      rec.ntilde_gap = statistic_ntilde_gap(rec.ntilde, rec.NJ_q2, q, g);
    } else {
      const mpz_class Q = q * q;
      auto in2 = ModuliInput::make(base_change(rec.L, 2), rational_two_torsion(H, 2));
      rec.ntilde = count_desingularization(in2, cfg.strata, cfg.beta1).value;
      rec.ntilde_stat = statistic_ntilde(rec.ntilde, Q, g, H.delta);
      rec.ntilde_gap = statistic_ntilde_gap(rec.ntilde, jacobian_order(rec.L, 4), Q, g);
    }
  } catch (const Error& e) {
    rec.error = e.what();
    rec.error_code = e.exit_code();
  }
  return rec;
}

Standardized standardized_moments(const std::vector<Real>& xs) {
  Standardized s{0, 0, 0, 0};
  if (xs.empty()) return s;
  const Real n = Real(xs.size());
  for (const auto& x : xs) s.mean += x;
  s.mean /= n;
  Real m2 = 0, m3 = 0, m4 = 0;
  for (const auto& x : xs) {
    Real c = x - s.mean, c2 = c * c;
    m2 += c2;
    m3 += c2 * c;
    m4 += c2 * c2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.var = m2;
  if (m2 > Real(1e-60) * (s.mean * s.mean + 1)) {
    s.skew = m3 / pow(m2, Real(1.5));
    s.kurt = m4 / (m2 * m2);
  }
  return s;
}

bool MomentReport::all_pass() const {
  if (failed) return false;
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

namespace {

void add_standardized_rows(MomentReport& rep, const std::string& name, const Standardized& s, bool judged) {
  const Real emp[4] = {s.mean, s.var, s.skew, s.kurt};
  const double target[4] = {0, 1, 0, 3};
  const double tol[4] = {0.05, 0.15, 0.2, 0.4};
  for (int r = 0; r < 4; ++r) {
    MomentRow row{name, r + 1, emp[r], Real(target[r]), Real(0), std::nullopt, true};
    if (judged) {
      row.tolerance = tol[r];
      row.pass = abs(emp[r] - target[r]) <= tol[r];
    }
    rep.rows.push_back(row);
  }
}

}  // namespace

MomentReport survey(const SurveyConfig& cfg, const std::function<void(const SurveyRecord&)>& sink,
                    const LSource& lsource) {
  if (cfg.gamma < 5) throw InputError("gamma must be at least 5");
  if (cfg.r_max < 1 || cfg.r_max > 6) throw InputError("r-max must be in 1..6");
  if (cfg.n < 2 || cfg.n > kMaxRank) throw UnsupportedError("rank must be in 2..6");
  auto field = make_field_of_order(cfg.q);
  const mpz_class q = field->order_big();
  const int Z = cfg.truncation();
  if (Z < 1) throw InputError("Z must be positive");

  std::unique_ptr<PrimeTable> primes;
  {
    mpz_class qz = zpow(q, Z);
    if (qz <= mpz_class(std::to_string(cfg.character_path_cap))) primes = std::make_unique<PrimeTable>(field, Z);
  }

  uint64_t total;
  if (cfg.exhaustive) total = checked_scan_size(cfg.q, cfg.gamma);
  else {
    if (cfg.samples == 0) throw InputError("samples must be positive");
    total = cfg.samples;
  }

  MomentReport rep;
  rep.Z = Z;
  rep.D = cfg.degree_bound;
  std::vector<Real> deltas, centered, mnd, ms, nt;
  uint64_t next_index = 0;
  const uint64_t block = 256;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  for (uint64_t start = 0; start < total; start += block) {
    const uint64_t end = std::min(total, start + block);
    std::vector<std::optional<SurveyRecord>> out(end - start);
    std::vector<std::string> fatal(end - start);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int64_t j = int64_t(start); j < int64_t(end); ++j) {
      try {
        Poly F = cfg.exhaustive ? monic_from_index(*field, cfg.gamma, uint64_t(j))
                                : sample_curve(field, cfg.gamma, cfg.seed, uint64_t(j));
        if (cfg.exhaustive && !is_squarefree(F)) continue;
        out[j - start] = analyze_curve(HyperellipticCurve::make(field, F), cfg, primes.get(), uint64_t(j), lsource);
      } catch (const std::exception& e) {
        fatal[j - start] = e.what();
      }
    }
    for (uint64_t k = 0; k < out.size(); ++k) {
      if (!fatal[k].empty()) throw ResourceError(fatal[k]);
      if (!out[k]) continue;
      SurveyRecord& rec = *out[k];
      rec.index = next_index++;
      sink(rec);
      ++rep.curves;
      if (!rec.error.empty()) {
        ++rep.failed;
        continue;
      }
      const Real Qn = to_real(cfg.ntilde_reading == NtildeReading::kBase ? q : mpz_class(q * q));
      const Real scale = pow(to_real(q), Real(1.5));
      deltas.push_back(rec.delta_z_real);
      centered.push_back(rec.centered_mnd);
      mnd.push_back(scale * rec.raw_mnd);
      ms.push_back(scale * rec.ms20_stat);
      nt.push_back(Qn * rec.ntilde_stat);
    }
  }

  const Real n = Real(std::max<size_t>(deltas.size(), 1));
  const Real qZ = pow(to_real(q), -Z);
  for (int r = 1; r <= cfg.r_max; ++r) {
    Real s = 0, s2 = 0, c = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
      Real p = pow(deltas[i], r);
      s += p;
      s2 += p * p;
      c += pow(centered[i], r);
    }
    Real mean = s / n;
    rep.delta_moments.push_back(mean);
    rep.centered_moments.push_back(c / n);
    rep.h.push_back(moment_h(q, r, cfg.degree_bound));
    const HValue& h = rep.h.back();
    double tol = r == 1 ? 0.01 : 0.02;
    if (!cfg.exhaustive && deltas.size() > 1) {
      Real var = s2 / n - mean * mean;
      if (var < 0) var = 0;
      tol += 3 * sqrt(var / n).convert_to<double>();
    }
    MomentRow row{"deltaZ", r, mean, h.value, h.tail + qZ, tol, true};
    row.pass = abs(mean - h.value) <= Real(tol) + row.tail;
    rep.rows.push_back(row);
  }
  for (int r = 1; r <= cfg.r_max; ++r)
    rep.rows.push_back(MomentRow{"centered_mnd", r, rep.centered_moments[r - 1], rep.h[r - 1].value,
                                 rep.h[r - 1].tail, std::nullopt, true});
  const bool judged = cfg.q >= 9;
  rep.mnd_scaled = standardized_moments(mnd);
  rep.ms20_scaled = standardized_moments(ms);
  rep.ntilde_scaled = standardized_moments(nt);
  add_standardized_rows(rep, "mnd_scaled", rep.mnd_scaled, judged);
  add_standardized_rows(rep, "ms20_scaled", rep.ms20_scaled, judged);
  add_standardized_rows(rep, "ntilde_scaled", rep.ntilde_scaled, judged);
  return rep;
}

}  // namespace census
