#include "census/curve.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "census/errors.hpp"

namespace census {

HyperellipticCurve HyperellipticCurve::make(FieldPtr field, const Poly& F) {
  if (F.field() != field.get()) throw InputError("curve polynomial is over a different field");
  if (!F.is_monic()) throw InputError("curve polynomial must be monic");
  if (F.degree() < 5) throw InputError("curve polynomial must have degree >= 5");
  if (!is_squarefree(F)) throw InputError("F is not squarefree: gcd(F, F') != 1");
  HyperellipticCurve H{std::move(field), F, F.degree(), (F.degree() - 1) / 2, F.degree() % 2 == 0 ? 1 : 0};
  return H;
}

HyperellipticCurve HyperellipticCurve::from_labels(FieldPtr field, const std::vector<uint64_t>& low) {
  for (auto l : low) {
    if (l >= field->order()) throw InputError("coefficient label " + std::to_string(l) + " is not below q");
  }
  Poly F = Poly::monic_from_labels(*field, low);
  return make(std::move(field), F);
}

namespace {

std::atomic<uint64_t> g_count_calls{0};

struct LogTables {
  uint32_t n;                  // Q - 1
  std::vector<uint32_t> log;   // indexed by label; log[0] unused
  std::vector<int32_t> zech;   // log(1 + g^k), -1 when 1 + g^k = 0
};

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::unique_ptr<LogTables> build_tables(const FieldSpec& f) {
  const uint64_t Q = f.order();
  const uint64_t n = Q - 1;
  const auto factors = prime_factors(n);
  FieldElement gen;
  for (uint64_t l = 1; l < Q; ++l) {
    FieldElement c = f.from_label(l);
    bool ok = true;
    for (auto r : factors) {
      if (c.pow(n / r).is_one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = c;
      break;
    }
  }
  auto t = std::make_unique<LogTables>();
  t->n = static_cast<uint32_t>(n);
  t->log.assign(Q, 0);
  std::vector<uint64_t> exp_label(n);
  const int e = f.degree();
  const uint64_t p = f.p();
  std::vector<uint64_t> cur(e, 0), next(e, 0);
  cur[0] = 1;
  for (uint64_t k = 0; k < n; ++k) {
    uint64_t label = 0;
    for (int i = e; i-- > 0;) label = label * p + cur[i];
    exp_label[k] = label;
    t->log[label] = static_cast<uint32_t>(k);
    f.mul_into(cur.data(), gen.coeffs().data(), next.data());
    std::swap(cur, next);
  }
  t->zech.assign(n, -1);
  for (uint64_t k = 0; k < n; ++k) {
    uint64_t label = exp_label[k];
    uint64_t c0 = label % p;
    uint64_t plus_one = label - c0 + (c0 + 1) % p;
    if (plus_one != 0) t->zech[k] = static_cast<int32_t>(t->log[plus_one]);
  }
  return t;
}

const LogTables& tables_for(const FieldSpec& f) {
  static std::mutex mu;
  static auto* cache = new std::map<const FieldSpec*, std::unique_ptr<LogTables>>();
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache->find(&f);
  if (it == cache->end()) it = cache->emplace(&f, build_tables(f)).first;
  return *it->second;
}

std::vector<FieldElement> embedded_coeffs(const HyperellipticCurve& H, const FieldSpec& ext) {
  std::vector<FieldElement> out;
  for (const auto& c : H.F.coeffs()) out.push_back(embed(*H.field, ext, c));
  return out;
}

int64_t char_sum_reference(const std::vector<FieldElement>& c, const FieldSpec& ext) {
  const Poly F(&ext, c);
  int64_t s = 0;
  for (uint64_t l = 0; l < ext.order(); ++l) s += quadratic_character(F.evaluate(ext.from_label(l)));
  return s;
}

int64_t char_sum_table(const std::vector<FieldElement>& c, const FieldSpec& ext, bool parallel) {
  const LogTables& t = tables_for(ext);
  const int deg = static_cast<int>(c.size()) - 1;
  // log of c_0..c_{deg-1}; -1 marks a zero coefficient
  std::vector<int32_t> lc(deg);
  for (int i = 0; i < deg; ++i) lc[i] = c[i].is_zero() ? -1 : static_cast<int32_t>(t.log[c[i].label()]);
  const int64_t n = t.n;
  const int32_t* zech = t.zech.data();
  const int32_t* lcp = lc.data();
  int64_t s = lc[0] < 0 ? 0 : (lc[0] & 1 ? -1 : 1);
#pragma omp parallel for reduction(+ : s) schedule(static) if (parallel)
  for (int64_t k = 0; k < n; ++k) {
    int64_t ly = 0;
    bool zero = false;
    for (int i = deg - 1; i >= 0; --i) {
      if (!zero) {
        ly += k;
        if (ly >= n) ly -= n;
      }
      const int32_t a = lcp[i];
      if (a < 0) continue;
      if (zero) {
        ly = a;
        zero = false;
        continue;
      }
      int64_t d = a - ly;
      if (d < 0) d += n;
      const int32_t z = zech[d];
      if (z < 0) {
        zero = true;
      } else {
        ly += z;
        if (ly >= n) ly -= n;
      }
    }
    s += zero ? 0 : ((ly & 1) ? -1 : 1);
  }
  return s;
}

mpz_class ui_pow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
std::vector<mpz_class> elementary_from_power_sums(const std::vector<mpz_class>& p, int K) {
  std::vector<mpz_class> e(K + 1);
  e[0] = 1;
  for (int k = 1; k <= K; ++k) {
    mpz_class acc = 0;
    for (int i = 1; i <= k; ++i) {
      if (i % 2) acc += e[k - i] * p[i];
      else acc -= e[k - i] * p[i];
    }
    if (!mpz_divisible_ui_p(acc.get_mpz_t(), k)) throw InvariantError("Newton identity division is not exact at k=" + std::to_string(k));
    mpz_divexact_ui(e[k].get_mpz_t(), acc.get_mpz_t(), k);
  }
  return e;
}

}  // namespace

uint64_t point_count_calls() { return g_count_calls.load(); }

mpz_class count_points(const HyperellipticCurve& H, int m, Kernel kernel) {
  if (m < 1) throw InputError("extension degree must be >= 1");
  g_count_calls.fetch_add(1);
  FieldPtr ext = extension_field(H.field, m);
  const auto c = embedded_coeffs(H, *ext);
  int64_t s;
  if (kernel == Kernel::kReference || ext->order() > kMaxTableOrder) {
    if (ext->order() > (1ULL << 40)) throw ResourceError("point count over a field of order > 2^40 is out of scope");
    s = char_sum_reference(c, *ext);
  } else {
    s = char_sum_table(c, *ext, kernel == Kernel::kTableParallel);
  }
  return ext->order_big() + s + (H.delta ? 2 : 1);
}

mpz_class LPolynomial::at(const mpz_class& t) const {
  mpz_class acc = 0;
  for (size_t i = a.size(); i-- > 0;) acc = acc * t + a[i];
  return acc;
}

void check_functional_equation(const LPolynomial& L) {
  if (static_cast<int>(L.a.size()) != 2 * L.g + 1 || L.a[0] != 1) throw InvariantError("L-polynomial must have a_0 = 1 and degree 2g");
  for (int i = 0; i <= 2 * L.g; ++i) {
    if (i <= L.g && L.a[2 * L.g - i] != ui_pow(L.q, L.g - i) * L.a[i]) {
      throw InvariantError("functional equation violated at i=" + std::to_string(i));
    }
  }
}

LPolynomial l_polynomial_from_counts(const mpz_class& q, int g, const std::vector<mpz_class>& counts) {
  if (static_cast<int>(counts.size()) < g) throw InvariantError("need N_1..N_g");
  std::vector<mpz_class> s(g + 1);
  for (int m = 1; m <= g; ++m) s[m] = ui_pow(q, m) + 1 - counts[m - 1];
  auto e = elementary_from_power_sums(s, g);
  LPolynomial L{q, g, std::vector<mpz_class>(2 * g + 1)};
  for (int k = 0; k <= g; ++k) L.a[k] = (k % 2) ? mpz_class(-e[k]) : e[k];
  for (int i = 0; i < g; ++i) L.a[2 * g - i] = ui_pow(q, g - i) * L.a[i];
  return L;
}

LPolynomial l_polynomial(const HyperellipticCurve& H, Kernel kernel) {
  std::vector<mpz_class> counts;
  for (int m = 1; m <= H.genus; ++m) counts.push_back(count_points(H, m, kernel));
  LPolynomial L = l_polynomial_from_counts(H.field->order_big(), H.genus, counts);
  check_functional_equation(L);
  return L;
}

std::vector<mpz_class> power_sums(const LPolynomial& L, int M) {
  std::vector<mpz_class> s(M + 1);
  const int deg = 2 * L.g;
  for (int k = 1; k <= M; ++k) {
    mpz_class acc = k <= deg ? mpz_class(-k * L.a[k]) : mpz_class(0);
    for (int i = 1; i < k && i <= deg; ++i) acc -= L.a[i] * s[k - i];
    s[k] = acc;
  }
  return s;
}

mpz_class power_sum(const LPolynomial& L, int m) {
  if (m < 1) throw InputError("power sum index must be >= 1");
  return power_sums(L, m)[m];
}

mpz_class points_from_l(const LPolynomial& L, int m) { return ui_pow(L.q, m) + 1 - power_sum(L, m); }

LPolynomial base_change(const LPolynomial& L, int r) {
  if (r < 1) throw InputError("base change degree must be >= 1");
  const int deg = 2 * L.g;
  auto s = power_sums(L, r * deg);
  std::vector<mpz_class> t(deg + 1);
  for (int k = 1; k <= deg; ++k) t[k] = s[r * k];
  auto e = elementary_from_power_sums(t, deg);
  LPolynomial out{ui_pow(L.q, r), L.g, std::vector<mpz_class>(deg + 1)};
  for (int k = 0; k <= deg; ++k) out.a[k] = (k % 2) ? mpz_class(-e[k]) : e[k];
  check_functional_equation(out);
  return out;
}

mpz_class jacobian_order(const LPolynomial& L, int r) { return base_change(L, r).at(1); }

mpz_class twist_order(const LPolynomial& L) { return L.at(-1); }

mpq_class zeta_value(const LPolynomial& L, int k) {
  if (k < 2) throw InputError("zeta_X(k) needs k >= 2 (pole at k = 1)");
  mpq_class t(1, 1);
  t /= mpq_class(ui_pow(L.q, k));
  mpq_class acc = 0;
  for (size_t i = L.a.size(); i-- > 0;) acc = acc * t + L.a[i];
  mpq_class den = (1 - t) * (1 - t * L.q);
  mpq_class z = acc / den;
  z.canonicalize();
  return z;
}

double zeta_log_tail_bound(double q, int k, int Z, int g) {
  if (Z < 1 || k < 2) throw InputError("tail bound needs Z >= 1 and k >= 2");
  const double h = (2.0 * k - 1.0) / 2.0;
  if (Z == 1) return 2.0 * g / (std::pow(q, 2.0 * k - 1.0) - std::pow(q, h));
  return (2.0 * g / (Z + 1)) * std::pow(q, -h * (Z + 1)) / (1.0 - std::pow(q, -h));
}

std::vector<int> weierstrass_cycle_type(const HyperellipticCurve& H) {
  std::vector<int> cycles = factor_degrees(H.F);
  if (!H.delta) cycles.insert(cycles.begin(), 1);
  return cycles;
}

mpz_class rational_two_torsion(const HyperellipticCurve& H, int r) {
  std::vector<int> cycles;
  for (int d : weierstrass_cycle_type(H)) {
    const int c = std::gcd(d, r);
    for (int i = 0; i < c; ++i) cycles.push_back(d / c);
  }
  // points of W laid out cycle by cycle; sigma shifts within each cycle
  const int w = std::accumulate(cycles.begin(), cycles.end(), 0);
  if (w > 20) throw ResourceError("too many Weierstrass points for the 2-torsion count");
  std::vector<int> sigma(w);
  int pos = 0;
  for (int len : cycles) {
    for (int i = 0; i < len; ++i) sigma[pos + i] = pos + (i + 1) % len;
    pos += len;
  }
  const uint32_t full = (w == 32) ? 0xffffffffu : ((1u << w) - 1);
  uint64_t fixed = 0;
  for (uint32_t S = 0; S <= full; ++S) {
    if (__builtin_popcount(S) % 2) continue;
    uint32_t img = 0;
    for (int i = 0; i < w; ++i) {
      if (S >> i & 1) img |= 1u << sigma[i];
    }
    if (img == S || img == (full ^ S)) ++fixed;
  }
  return mpz_class(std::to_string(fixed / 2));
}

}  // namespace census
