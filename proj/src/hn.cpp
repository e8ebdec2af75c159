#include "census/hn.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "census/errors.hpp"

namespace census {
namespace {

long floor_div(long a, long b) {
  long r = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --r;
  return r;
}

long mod_nonneg(long a, long b) { return a - b * floor_div(a, b); }

mpq_class qpow(const mpz_class& q, long e) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  if (e >= 0) return mpq_class(p);
  mpq_class r(mpz_class(1), p);
  r.canonicalize();
  return r;
}

mpz_class zpow(const mpz_class& q, long e) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
  return p;
}

void check_composition(const Composition& comp) {
  if (comp.empty()) throw InputError("empty composition");
  int n = 0;
  for (int x : comp) {
    if (x < 1) throw InputError("composition parts must be positive");
    n += x;
  }
  if (n > kMaxRank) throw UnsupportedError("rank above " + std::to_string(kMaxRank) + " is not supported");
}

long pair_weight(const Composition& comp) {
  long w = 0;
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t k = i + 1; k < comp.size(); ++k) w += long(comp[i]) * comp[k];
  return w;
}

long slope_sum(const Composition& comp, const std::vector<long>& d) {
  long s = 0;
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t k = i + 1; k < comp.size(); ++k) s += d[i] * comp[k] - d[k] * comp[i];
  return s;
}

// key: residues d_i mod n_i; value: chi -> count
using Groups = std::map<std::vector<long>, std::map<long, mpz_class>>;

mpq_class evaluate_groups(const CurveContext& ctx, const Composition& comp, const Groups& groups) {
  mpq_class total = 0;
  for (const auto& [key, by_chi] : groups) {
    mpq_class weight = 1;
    for (size_t i = 0; i < comp.size(); ++i) weight *= beta(ctx, comp[i], key[i]);
    long lo = by_chi.begin()->first, hi = by_chi.rbegin()->first;
    mpz_class acc = 0;
    long prev = lo;
    for (const auto& [chi, count] : by_chi) {
      acc *= zpow(ctx.q, chi - prev);
      acc += count;
      prev = chi;
    }
    mpq_class s = mpq_class(acc) * qpow(ctx.q, -hi);
    total += weight * s;
  }
  return total;
}

}  // namespace

CurveContext CurveContext::make(const LPolynomial& L) {
  CurveContext c;
  c.q = L.q;
  c.g = L.g;
  c.L = L;
  c.NJ = L.at(1);
  c.zeta.assign(kMaxRank + 1, 0);
  for (int k = 2; k <= kMaxRank; ++k) c.zeta[k] = zeta_value(L, k);
  return c;
}

long euler_exponent(const Composition& parts, const std::vector<long>& degrees, int g) {
  if (parts.size() != degrees.size()) throw InputError("composition and degree lengths differ");
  return slope_sum(parts, degrees) + long(1 - g) * pair_weight(parts);
}

std::vector<Composition> compositions(int n, int min_parts) {
  std::vector<Composition> out;
  Composition cur;
  auto rec = [&](auto&& self, int left) -> void {
    if (left == 0) {
      if (int(cur.size()) >= min_parts) out.push_back(cur);
      return;
    }
    for (int x = 1; x <= left; ++x) {
      cur.push_back(x);
      self(self, left - x);
      cur.pop_back();
    }
  };
  if (n >= 1) rec(rec, n);
  return out;
}

mpq_class siegel_mass(const CurveContext& ctx, int n) {
  mpq_class m = qpow(ctx.q, long(n * n - 1) * (ctx.g - 1));
  for (int k = 2; k <= n; ++k) m *= ctx.zeta[k];
  return m / mpq_class(ctx.q - 1);
}

mpq_class c_l(const CurveContext& ctx, const Composition& comp, long d, int modulus_multiplier) {
  check_composition(comp);
  if (modulus_multiplier < 1) throw InputError("modulus multiplier must be positive");
  const size_t m = comp.size();
  if (m < 2) throw InputError("a stratum needs at least two parts");
  const long n = std::accumulate(comp.begin(), comp.end(), 0L);

  std::vector<long> above(m, 0);  // above[j] = n_{j+1} + ... + n_{m-1}
  for (size_t j = m - 1; j-- > 0;) above[j] = above[j + 1] + comp[j + 1];

  const size_t gaps = m - 1;
  long den = 1;
  for (size_t j = 0; j < gaps; ++j) den = std::lcm(den, n * comp[j] * comp[j + 1]);

  // den * d_i = base[i] + sum_j K[i][j] e_j
  std::vector<long> base(m);
  std::vector<std::vector<long>> K(m, std::vector<long>(gaps));
  for (size_t i = 0; i < m; ++i) {
    base[i] = comp[i] * d * (den / n);
    for (size_t j = 0; j < gaps; ++j) {
      long a = comp[i] * (above[j] - (j < i ? n : 0));
      K[i][j] = a * (den / (n * comp[j] * comp[j + 1]));
    }
  }
  std::vector<long> M(gaps, 1);
  for (size_t j = 0; j < gaps; ++j) {
    for (size_t i = 0; i < m; ++i) {
      long modn = den * comp[i];
      long gg = std::gcd(std::labs(K[i][j]), modn);
      M[j] = std::lcm(M[j], modn / gg);
    }
    M[j] *= modulus_multiplier;
  }

  // chi increment for e_j -> e_j + M_j
  std::vector<long> step(gaps);
  for (size_t j = 0; j < gaps; ++j) {
    std::vector<long> delta(m);
    for (size_t i = 0; i < m; ++i) delta[i] = K[i][j] * M[j] / den;
    step[j] = slope_sum(comp, delta);
    if (step[j] <= 0) throw InvariantError("non-positive cone direction");
  }

  Groups groups;
  std::vector<long> r(gaps, 1), di(m), key(m);
  const long shift = long(1 - ctx.g) * pair_weight(comp);
  while (true) {
    bool integral = true;
    for (size_t i = 0; i < m && integral; ++i) {
      long num = base[i];
      for (size_t j = 0; j < gaps; ++j) num += K[i][j] * r[j];
      if (num % den != 0) integral = false;
      else di[i] = num / den;
    }
    if (integral) {
      for (size_t i = 0; i < m; ++i) key[i] = mod_nonneg(di[i], comp[i]);
      groups[key][slope_sum(comp, di) + shift] += 1;
    }
    size_t j = 0;
    while (j < gaps && r[j] == M[j]) r[j++] = 1;
    if (j == gaps) break;
    ++r[j];
  }
  if (groups.empty()) return 0;

  mpq_class v = evaluate_groups(ctx, comp, groups);
  for (size_t j = 0; j < gaps; ++j) {
    mpz_class qe = zpow(ctx.q, step[j]);
    v *= mpq_class(qe, qe - 1);
  }
  mpz_class nj;
  mpz_pow_ui(nj.get_mpz_t(), ctx.NJ.get_mpz_t(), gaps);
  return v * nj;
}

BoxSum c_l_box_oracle(const CurveContext& ctx, const Composition& comp, long d, int R) {
  check_composition(comp);
  const size_t m = comp.size();
  if (m < 2) throw InputError("a stratum needs at least two parts");
  if (R < 1) throw InputError("box radius must be positive");
  const long n = std::accumulate(comp.begin(), comp.end(), 0L);
  const long shift = long(1 - ctx.g) * pair_weight(comp);

  // |d_i - n_i d/n| <= R  <=>  |n d_i - n_i d| <= nR
  auto lo = [&](size_t i) { return -floor_div(-(comp[i] * d - n * R), n); };
  auto hi = [&](size_t i) { return floor_div(comp[i] * d + n * R, n); };

  Groups groups;
  std::vector<long> di(m), key(m);
  auto rec = [&](auto&& self, size_t i, long used) -> void {
    if (i + 1 == m) {
      long last = d - used;
      if (std::labs(n * last - comp[i] * d) > n * R) return;
      di[i] = last;
      for (size_t k = 0; k + 1 < m; ++k)
        if (di[k] * comp[k + 1] <= di[k + 1] * comp[k]) return;
      for (size_t k = 0; k < m; ++k) key[k] = mod_nonneg(di[k], comp[k]);
      groups[key][slope_sum(comp, di) + shift] += 1;
      return;
    }
    for (long x = lo(i); x <= hi(i); ++x) {
      di[i] = x;
      self(self, i + 1, used + x);
    }
  };
  rec(rec, 0, 0);

  BoxSum out;
  mpz_class nj;
  mpz_pow_ui(nj.get_mpz_t(), ctx.NJ.get_mpz_t(), m - 1);
  out.value = groups.empty() ? mpq_class(0) : evaluate_groups(ctx, comp, groups) * nj;

  // Outside the box the slope sum is at least nR + 1 and each level set has at most (s+1)^{m-1} points.
  mpq_class C = mpq_class(nj) * qpow(ctx.q, -shift);
  for (int ni : comp) {
    mpq_class best = 0;
    for (long res = 0; res < ni; ++res) best = std::max(best, mpq_class(abs(beta(ctx, ni, res))));
    C *= best;
  }
  auto term = [&](long s) -> mpq_class {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), mpz_class(s + 1).get_mpz_t(), m - 1);
    return mpq_class(p) * qpow(ctx.q, -s);
  };
  long s = n * R + 1;
  mpq_class tail = 0;
  while (true) {
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), mpz_class(s + 2).get_mpz_t(), m - 1);
    mpz_pow_ui(b.get_mpz_t(), mpz_class(s + 1).get_mpz_t(), m - 1);
    mpq_class rho(a, b * ctx.q);
    rho.canonicalize();
    if (rho < 1) {
      tail += term(s) / (1 - rho);
      break;
    }
    tail += term(s);
    ++s;
  }
  out.tail_bound = C * tail;
  return out;
}

mpq_class beta(const CurveContext& ctx, int n, long d) {
  if (n < 1) throw InputError("rank must be positive");
  if (n > kMaxRank) throw UnsupportedError("rank above " + std::to_string(kMaxRank) + " is not supported");
  if (n == 1) return mpq_class(1) / mpq_class(ctx.q - 1);
  const std::pair<int, long> key{n, mod_nonneg(d, n)};
  {
    std::lock_guard<std::mutex> lock(ctx.betas->mu);
    auto it = ctx.betas->values.find(key);
    if (it != ctx.betas->values.end()) return it->second;
  }
  mpq_class v = siegel_mass(ctx, n);
  for (const auto& comp : compositions(n)) v -= c_l(ctx, comp, key.second);
  std::lock_guard<std::mutex> lock(ctx.betas->mu);
  ctx.betas->values.emplace(key, v);
  return v;
}

mpq_class c111_closed_form(const CurveContext& ctx) {
  const mpz_class& q = ctx.q;
  mpq_class num = mpq_class(zpow(q, 5) * ctx.NJ * ctx.NJ) * qpow(q, 3L * (ctx.g - 1));
  mpz_class den = (q - 1) * (q - 1) * (q - 1) * (q * q - 1) * (q * q * q - 1);
  return num / mpq_class(den);
}

mpq_class c21_closed_form(const CurveContext& ctx) {
  const mpz_class& q = ctx.q;
  const long g = ctx.g;
  mpq_class front = mpq_class(zpow(q, 6) * ctx.NJ) * qpow(q, 2 * (g - 1)) / mpq_class((q - 1) * (zpow(q, 6) - 1));
  mpz_class c3 = (q - 1) * (q - 1) * (q - 1);
  mpq_class brace = 2 * qpow(q, 3 * (g - 1)) * ctx.zeta[2] / mpq_class(q - 1) -
                    qpow(q, g - 1) * mpq_class(ctx.NJ) / mpq_class(c3 * (q + 1)) -
                    qpow(q, g) * mpq_class(ctx.NJ) / mpq_class(c3 * (q + 1));
  return front * brace;
}

mpq_class c11_floor_form(const CurveContext& ctx, long d) {
  const mpz_class& q = ctx.q;
  long s = floor_div(d, 2) + 1;
  mpq_class v = mpq_class(ctx.NJ) * qpow(q, d + ctx.g - 1 - 2 * s) / mpq_class((q - 1) * (q - 1));
  return v / (1 - qpow(q, -2));
}

mpq_class c111_floor_form(const CurveContext& ctx, long d) {
  const mpz_class& q = ctx.q;
  mpz_class q2 = q * q, q4 = q2 * q2, q6 = q4 * q2;
  mpq_class S = mod_nonneg(d, 3) == 0 ? mpq_class(q6 + 1, (q4 - 1) * (q6 - 1)) : mpq_class(q2, (q2 - 1) * (q6 - 1));
  S.canonicalize();
  return mpq_class(ctx.NJ * ctx.NJ) * qpow(q, 3L * (ctx.g - 1)) / mpq_class((q - 1) * (q - 1) * (q - 1)) * S;
}

mpq_class c21_floor_form(const CurveContext& ctx, long d) {
  const mpz_class& q = ctx.q;
  long s = floor_div(2 * d, 3) + 1;
  mpq_class v = mpq_class(ctx.NJ) * qpow(q, 2 * d + 2L * (ctx.g - 1)) / mpq_class(q - 1);
  v *= qpow(q, -3 * s) * (beta(ctx, 2, s) + qpow(q, -3) * beta(ctx, 2, s + 1));
  return v / (1 - qpow(q, -6));
}

mpq_class c12_floor_form(const CurveContext& ctx, long d) {
  const mpz_class& q = ctx.q;
  long s = floor_div(d, 3) + 1;
  mpq_class v = mpq_class(ctx.NJ) * qpow(q, d + 2L * (ctx.g - 1)) / mpq_class(q - 1);
  v *= qpow(q, -3 * s) * (beta(ctx, 2, d - s) + qpow(q, -3) * beta(ctx, 2, d - s - 1));
  return v / (1 - qpow(q, -6));
}

}  // namespace census
