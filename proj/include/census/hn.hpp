#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "census/curve.hpp"

namespace census {

inline constexpr int kMaxRank = 6;

using Composition = std::vector<int>;

struct BetaTable {
  std::mutex mu;
  std::map<std::pair<int, long>, mpq_class> values;
};

/// Everything the Siegel pipeline needs from one curve.
struct CurveContext {
  mpz_class q;
  int g = 0;
  LPolynomial L;
  mpz_class NJ;
  /// zeta[k] = zeta_X(k) for 2 <= k <= kMaxRank.
  std::vector<mpq_class> zeta;
  std::shared_ptr<BetaTable> betas = std::make_shared<BetaTable>();

  static CurveContext make(const LPolynomial& L);
};

/// sum_{i<j} (d_i n_j - d_j n_i) + (1-g) sum_{i<j} n_i n_j
long euler_exponent(const Composition& parts, const std::vector<long>& degrees, int g);

/// Ordered compositions of n with at least min_parts parts.
std::vector<Composition> compositions(int n, int min_parts = 2);

/// q^{(n^2-1)(g-1)} prod_{k=2}^n zeta_X(k) / (q-1).
mpq_class siegel_mass(const CurveContext& ctx, int n);

/// Exact HN stratum mass C_L(n_1..n_m) over the cone d_1/n_1 > ... > d_m/n_m, sum d_i = d.
/// modulus_multiplier scales every residue modulus; the value must not change.
mpq_class c_l(const CurveContext& ctx, const Composition& comp, long d, int modulus_multiplier = 1);

struct BoxSum {
  mpq_class value;
  /// Certified upper bound on the omitted part of the cone.
  mpq_class tail_bound;
};
/// Direct summation over max_i |d_i - n_i d/n| <= R.
BoxSum c_l_box_oracle(const CurveContext& ctx, const Composition& comp, long d, int R);

/// Semistable mass beta(n, d), memoized by (n, d mod n).
mpq_class beta(const CurveContext& ctx, int n, long d);

/// Rank-3 closed forms exactly as printed (independent of d).
mpq_class c111_closed_form(const CurveContext& ctx);
mpq_class c21_closed_form(const CurveContext& ctx);

/// Closed forms obtained by summing the geometric series with floor bounds.
mpq_class c11_floor_form(const CurveContext& ctx, long d);
mpq_class c111_floor_form(const CurveContext& ctx, long d);
mpq_class c21_floor_form(const CurveContext& ctx, long d);
mpq_class c12_floor_form(const CurveContext& ctx, long d);

}  // namespace census
