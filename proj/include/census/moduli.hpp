#pragma once

#include <string>

#include <gmpxx.h>

#include "census/curve.hpp"
#include "census/hn.hpp"

namespace census {

/// How the 2-torsion strata of the Kummer variety are counted.
enum class StrataModel {
  kRational,  ///< K0 = |J[2](F_q)|, type B from the twist Jacobian
  kPrinted,   ///< K0 = 2^{2g}, B = (N_{q^2}(J) - N_q(J))/2
};

/// Weight on the non-split extension term of beta_1.
enum class Beta1Variant { kPaper, kReference };

StrataModel parse_strata_model(const std::string& s);
Beta1Variant parse_beta1_variant(const std::string& s);
std::string to_string(StrataModel m);
std::string to_string(Beta1Variant v);

/// Curve data for the rank-2 moduli counts.
struct ModuliInput {
  CurveContext ctx;
  /// |J[2](F_q)|.
  mpz_class two_torsion;

  /// Read H over F_{q^r}.
  static ModuliInput make(const HyperellipticCurve& H, int r = 1);
  static ModuliInput make(const LPolynomial& L, const mpz_class& two_torsion);
};

enum class CountKind { kCoprime, kStable20, kDesingularization };

struct ModuliCount {
  CountKind kind;
  int n = 0;
  long d = 0;
  mpz_class value;
  /// Rational value before clearing; denominator 1.
  mpq_class exact;
};

ModuliCount count_ml(const CurveContext& ctx, int n, long d);

struct KummerStrata {
  mpz_class sizeA, sizeB, sizeK0;
};
KummerStrata kummer_strata(const ModuliInput& in, StrataModel model = StrataModel::kRational);

mpq_class beta_prime_20(const CurveContext& ctx);
mpq_class beta1(const ModuliInput& in, StrataModel model = StrataModel::kRational,
                Beta1Variant variant = Beta1Variant::kPaper);
mpq_class beta2(const ModuliInput& in, StrataModel model = StrataModel::kRational);

/// Closed form for N_q(M^s_O(2,0)); the printed model gives the formula as stated.
mpq_class ms20_closed_form(const ModuliInput& in, StrataModel model = StrataModel::kRational);
/// q^{3g-3} zeta(2) - (q-1)(beta' + beta_1 + beta_2)
mpq_class ms20_assembly(const ModuliInput& in, StrataModel model = StrataModel::kRational,
                        Beta1Variant variant = Beta1Variant::kPaper);

ModuliCount count_ms20(const ModuliInput& in, StrataModel model = StrataModel::kRational,
                       Beta1Variant variant = Beta1Variant::kPaper);

mpz_class projective_count(const mpz_class& q, long k);
/// Gaussian binomial [n_dim choose k]_q.
mpz_class grassmannian_count(const mpz_class& q, long k, long n_dim);

struct DesingularizationParts {
  mpz_class ms20, Y, R, S, K0;
};
DesingularizationParts desingularization_parts(const ModuliInput& in, StrataModel model = StrataModel::kRational,
                                               Beta1Variant variant = Beta1Variant::kPaper);
ModuliCount count_desingularization(const ModuliInput& in, StrataModel model = StrataModel::kRational,
                                    Beta1Variant variant = Beta1Variant::kPaper);

}  // namespace census
