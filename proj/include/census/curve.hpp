#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "census/field.hpp"
#include "census/poly.hpp"

namespace census {

/// y^2 = F(x) with F monic squarefree of degree gamma >= 5 over an odd field.
struct HyperellipticCurve {
  FieldPtr field;
  Poly F;
  int gamma;
  int genus;
  /// 1 iff gamma is even (two points at infinity).
  int delta;

  static HyperellipticCurve make(FieldPtr field, const Poly& F);
  static HyperellipticCurve from_labels(FieldPtr field, const std::vector<uint64_t>& low);
};

enum class Kernel {
  kReference,      ///< generic element arithmetic, Euler-criterion character
  kTable,          ///< Zech-logarithm tables, serial
  kTableParallel,  ///< Zech-logarithm tables, OpenMP reduction
};

/// Number of count_points calls since start; used to observe cache hits.
uint64_t point_count_calls();

/// N_m = #X(F_{q^m}) by a full x-scan.
mpz_class count_points(const HyperellipticCurve& H, int m, Kernel kernel = Kernel::kTable);

/// Largest extension order for which log tables are built.
inline constexpr uint64_t kMaxTableOrder = 1ULL << 23;

struct LPolynomial {
  mpz_class q;
  int g = 0;
  /// a_0..a_{2g} of P(t) = sum a_i t^i.
  std::vector<mpz_class> a;

  mpz_class at(const mpz_class& t) const;
  bool operator==(const LPolynomial& o) const { return q == o.q && g == o.g && a == o.a; }
};

/// Reconstruct P(t) from N_1..N_g.
LPolynomial l_polynomial_from_counts(const mpz_class& q, int g, const std::vector<mpz_class>& counts);
LPolynomial l_polynomial(const HyperellipticCurve& H, Kernel kernel = Kernel::kTable);
/// Throws InvariantError unless a_0 = 1 and a_{2g-i} = q^{g-i} a_i.
void check_functional_equation(const LPolynomial& L);

/// s_m = sum alpha_i^m.
mpz_class power_sum(const LPolynomial& L, int m);
std::vector<mpz_class> power_sums(const LPolynomial& L, int M);
/// N_m = q^m + 1 - s_m.
mpz_class points_from_l(const LPolynomial& L, int m);

/// N_{q^r}(J) = prod (1 - alpha_i^r).
mpz_class jacobian_order(const LPolynomial& L, int r);
/// L-polynomial of the curve over F_{q^r}.
LPolynomial base_change(const LPolynomial& L, int r);
/// P(-1): order of the Jacobian of the quadratic twist.
mpz_class twist_order(const LPolynomial& L);

/// zeta_X(k) = P(q^-k) / ((1 - q^-k)(1 - q^{1-k})), k >= 2.
mpq_class zeta_value(const LPolynomial& L, int k);
/// Bound on |eps_{2,Z}|, the omitted tail of log zeta_X(k) after Z terms.
double zeta_log_tail_bound(double q, int k, int Z, int g);

/// Cycle lengths of Frobenius on the Weierstrass points (roots of F, plus infinity when gamma is odd).
std::vector<int> weierstrass_cycle_type(const HyperellipticCurve& H);
/// |J[2](F_{q^r})| computed from the Frobenius action on Weierstrass points.
mpz_class rational_two_torsion(const HyperellipticCurve& H, int r = 1);

}  // namespace census
