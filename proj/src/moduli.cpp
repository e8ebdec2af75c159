#include "census/moduli.hpp"

#include <numeric>

#include "census/errors.hpp"

namespace census {
namespace {

mpz_class zpow(const mpz_class& q, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

mpz_class exact_half(const mpz_class& x, const char* what) {
  if (x % 2 != 0) throw InvariantError(std::string("parity failure halving ") + what);
  return x / 2;
}

mpz_class require_integer(const mpq_class& v, const std::string& what) {
  if (v.get_den() != 1) throw InvariantError(what + " is not an integer: " + v.get_str());
  if (v <= 0) throw InvariantError(what + " is not positive: " + v.get_str());
  return v.get_num();
}

void require_genus(const CurveContext& ctx) {
  if (ctx.g < 2) throw InputError("genus must be at least 2");
}

}  // namespace

StrataModel parse_strata_model(const std::string& s) {
  if (s == "rational") return StrataModel::kRational;
  if (s == "printed") return StrataModel::kPrinted;
  throw InputError("unknown strata model: " + s);
}

Beta1Variant parse_beta1_variant(const std::string& s) {
  if (s == "paper") return Beta1Variant::kPaper;
  if (s == "reference") return Beta1Variant::kReference;
  throw InputError("unknown beta1 variant: " + s);
}

std::string to_string(StrataModel m) { return m == StrataModel::kRational ? "rational" : "printed"; }
std::string to_string(Beta1Variant v) { return v == Beta1Variant::kPaper ? "paper" : "reference"; }

ModuliInput ModuliInput::make(const HyperellipticCurve& H, int r) {
  if (r < 1) throw InputError("extension degree must be positive");
  return make(base_change(l_polynomial(H), r), rational_two_torsion(H, r));
}

ModuliInput ModuliInput::make(const LPolynomial& L, const mpz_class& two_torsion) {
  return ModuliInput{CurveContext::make(L), two_torsion};
}

ModuliCount count_ml(const CurveContext& ctx, int n, long d) {
  if (n < 2) throw InputError("rank must be at least 2");
  if (n > kMaxRank) throw UnsupportedError("rank above " + std::to_string(kMaxRank) + " is not supported");
  if (std::gcd(long(n), d) != 1)
    throw UnsupportedError("gcd(n, d) != 1: the strictly semistable locus is only handled for (2,0)");
  mpq_class v = siegel_mass(ctx, n);
  for (const auto& comp : compositions(n)) v -= c_l(ctx, comp, d);
  v *= mpq_class(ctx.q - 1);
  ModuliCount out{CountKind::kCoprime, n, d, 0, v};
  out.value = require_integer(v, "N(M_L(" + std::to_string(n) + "," + std::to_string(d) + "))");
  return out;
}

KummerStrata kummer_strata(const ModuliInput& in, StrataModel model) {
  require_genus(in.ctx);
  const mpz_class& NJ = in.ctx.NJ;
  KummerStrata k;
  if (model == StrataModel::kRational) {
    k.sizeK0 = in.two_torsion;
    k.sizeA = exact_half(NJ - k.sizeK0, "N_J - K0");
    k.sizeB = exact_half(twist_order(in.ctx.L) - k.sizeK0, "P(-1) - K0");
  } else {
    k.sizeK0 = zpow(2, 2L * in.ctx.g);
    k.sizeA = exact_half(NJ - k.sizeK0, "N_J - 2^{2g}");
    k.sizeB = exact_half(jacobian_order(in.ctx.L, 2) - NJ, "N_{q^2}(J) - N_J");
  }
  return k;
}

mpq_class beta_prime_20(const CurveContext& ctx) {
  const mpz_class& q = ctx.q;
  return mpq_class(ctx.NJ * zpow(q, ctx.g - 1)) / mpq_class((q - 1) * (q - 1) * (q - 1) * (q + 1));
}

mpq_class beta1(const ModuliInput& in, StrataModel model, Beta1Variant variant) {
  const mpz_class& q = in.ctx.q;
  auto k = kummer_strata(in, model);
  const int weight = variant == Beta1Variant::kPaper ? 2 : 1;
  mpq_class v = mpq_class(k.sizeA) / mpq_class((q - 1) * (q - 1));
  v += mpq_class(weight * k.sizeA * projective_count(q, in.ctx.g - 2)) / mpq_class(q - 1);
  v += mpq_class(k.sizeB) / mpq_class(q * q - 1);
  return v;
}

mpq_class beta2(const ModuliInput& in, StrataModel model) {
  const mpz_class& q = in.ctx.q;
  auto k = kummer_strata(in, model);
  mpz_class gl2 = (q * q - 1) * (q * q - q);
  return mpq_class(k.sizeK0) / mpq_class(gl2) +
         mpq_class(k.sizeK0 * projective_count(q, in.ctx.g - 1)) / mpq_class(q * (q - 1));
}

mpq_class ms20_closed_form(const ModuliInput& in, StrataModel model) {
  require_genus(in.ctx);
  const mpz_class& q = in.ctx.q;
  const long g = in.ctx.g;
  mpq_class lead = mpq_class(zpow(q, 3 * g - 3)) * in.ctx.zeta[2];
  mpq_class ratio(zpow(q, g + 1) - q * q + q, (q - 1) * (q - 1) * (q + 1));
  ratio.canonicalize();
  if (model == StrataModel::kRational) {
    mpq_class coefJ = ratio + mpq_class(1) / mpq_class(2 * (q + 1));
    return lead - coefJ * mpq_class(in.ctx.NJ) - mpq_class(twist_order(in.ctx.L)) / mpq_class(2 * (q + 1));
  }
  mpz_class K0 = zpow(2, 2 * g);
  return lead - ratio * mpq_class(in.ctx.NJ) - mpq_class(jacobian_order(in.ctx.L, 2)) / mpq_class(2 * (q + 1)) +
         mpq_class(K0) / mpq_class(2 * (q + 1));
}

mpq_class ms20_assembly(const ModuliInput& in, StrataModel model, Beta1Variant variant) {
  require_genus(in.ctx);
  const mpz_class& q = in.ctx.q;
  mpq_class lead = mpq_class(zpow(q, 3L * in.ctx.g - 3)) * in.ctx.zeta[2];
  return lead - mpq_class(q - 1) * (beta_prime_20(in.ctx) + beta1(in, model, variant) + beta2(in, model));
}

ModuliCount count_ms20(const ModuliInput& in, StrataModel model, Beta1Variant variant) {
  mpq_class assembled = ms20_assembly(in, model, variant);
  if (variant == Beta1Variant::kPaper) {
    mpq_class closed = ms20_closed_form(in, model);
    if (closed != assembled)
      throw InvariantError("N(M^s): closed form " + closed.get_str() + " != assembly " + assembled.get_str());
  }
  ModuliCount out{CountKind::kStable20, 2, 0, 0, assembled};
  out.value = require_integer(assembled, "N(M^s(2,0))");
  return out;
}

mpz_class projective_count(const mpz_class& q, long k) {
  if (k < 0) throw InputError("projective dimension must be nonnegative");
  return (zpow(q, k + 1) - 1) / (q - 1);
}

mpz_class grassmannian_count(const mpz_class& q, long k, long n_dim) {
  if (k < 0 || k > n_dim) throw InputError("Grassmannian needs 0 <= k <= n");
  mpz_class num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    num *= zpow(q, n_dim - i) - 1;
    den *= zpow(q, i + 1) - 1;
  }
  return num / den;
}

DesingularizationParts desingularization_parts(const ModuliInput& in, StrataModel model, Beta1Variant variant) {
  const mpz_class& q = in.ctx.q;
  const long g = in.ctx.g;
  auto k = kummer_strata(in, model);
  DesingularizationParts p;
  p.ms20 = count_ms20(in, model, variant).value;
  mpz_class pg2 = projective_count(q, g - 2);
  p.Y = k.sizeA * pg2 * pg2 + k.sizeB * projective_count(q * q, g - 2);
  p.R = zpow(q, g - 2) * grassmannian_count(q, 2, g);
  p.S = g >= 3 ? grassmannian_count(q, 3, g) : mpz_class(0);
  p.K0 = k.sizeK0;
  return p;
}

ModuliCount count_desingularization(const ModuliInput& in, StrataModel model, Beta1Variant variant) {
  auto p = desingularization_parts(in, model, variant);
  mpz_class v = p.ms20 + p.Y + p.K0 * (p.R + p.S);
  if (v <= 0) throw InvariantError("N(N~) is not positive");
  return ModuliCount{CountKind::kDesingularization, 2, 0, v, mpq_class(v)};
}

}  // namespace census
