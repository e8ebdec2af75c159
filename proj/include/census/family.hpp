#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include "census/curve.hpp"
#include "census/moduli.hpp"

namespace census {

/// 166-bit mantissa.
using Real = boost::multiprecision::mpfr_float_50;

Real to_real(const mpz_class& z);
Real to_real(const mpq_class& x);
/// log of a positive exact value.
Real log_exact(const mpz_class& z);
Real log_exact(const mpq_class& x);
/// Fixed-format rendering used in every output file.
std::string format_real(const Real& x, int digits = 30);

// ---------------------------------------------------------------- family

/// Exhaustive enumeration is refused above this many monic polynomials.
inline constexpr uint64_t kMaxFamilyScan = 10'000'000;
inline constexpr uint64_t kMaxSampleAttempts = 1'000'000;

/// q^gamma - q^{gamma-1}
mpz_class family_size(const mpz_class& q, int gamma);
/// The j-th monic polynomial of degree gamma in label order.
Poly monic_from_index(const FieldSpec& f, int gamma, uint64_t j);
/// Every squarefree monic of degree gamma, in label order.
void enumerate_family(const FieldPtr& f, int gamma, const std::function<void(const Poly&)>& fn);
/// Uniform squarefree monic of degree gamma; a function of (seed, index) only.
Poly sample_curve(const FieldPtr& f, int gamma, uint64_t seed, uint64_t index, uint64_t* attempts = nullptr);

// ------------------------------------------------------------ statistics

/// log(q^{n^2-1} / prod_{k=2}^n (q^{k-1}-1)(q^k-1))
Real mnd_centering_constant(const mpz_class& q, int n);
/// log N - (n^2-1)(g-1) log q
Real statistic_mnd_raw(const mpz_class& count, const mpz_class& q, int n, int g);
/// raw minus the centering constant, plus delta * log prod_{k=2}^n (1 - q^{-k})
Real statistic_mnd(const mpz_class& count, const mpz_class& q, int n, int g, int delta);
/// log N - 3(g-1) log q - log(q^3/((q-1)^2(q+1))) + delta log(1 - q^{-2})
Real statistic_ms20(const mpz_class& count, const mpz_class& q, int g, int delta);
/// log N - (4g-4) log q + delta log(1 - q^{-2})
Real statistic_ntilde(const mpz_class& count, const mpz_class& q, int g, int delta);
/// (log N - (4g-4) log q) - (log N_{q^2}(J) - 2g log q)
Real statistic_ntilde_gap(const mpz_class& count, const mpz_class& nj_q2, const mpz_class& q, int g);

// ---------------------------------------------------------------- Delta_Z

/// Monic irreducibles over F_q grouped by degree, built once per field.
struct PrimeTable {
  FieldPtr field;
  std::vector<std::vector<Poly>> by_degree;  ///< by_degree[m], m >= 1

  PrimeTable(FieldPtr f, int max_degree);
  int max_degree() const { return static_cast<int>(by_degree.size()) - 1; }
};

/// sum_{m<=Z} q^{-2m}/m sum_{deg f = m} Lambda(f) (F/f), by Legendre symbols.
mpq_class delta_z_characters(const HyperellipticCurve& H, int Z, const PrimeTable& primes);
mpq_class delta_z_characters(const HyperellipticCurve& H, int Z);
/// The same sum from the L-polynomial: the inner sum is -s_m - delta.
mpq_class delta_z_spectral(const LPolynomial& L, int delta, int Z);

// ----------------------------------------------------------------- H(r)

enum class HForm {
  kPrimePowers,     ///< generating function over prime powers of degree <= D
  kDistinctPrimes,  ///< sum over distinct primes and compositions of r
};
enum class LocalFactor {
  kDensity,  ///< 1/(1 + |P|^-1)
  kPrinted,  ///< (1 - |P|^-1)(1 + |P|^-2)
};

struct HValue {
  Real value;
  /// Certified bound on |H(r) - value|.
  Real tail;
};

HValue moment_h(const mpz_class& q, int r, int D, HForm form = HForm::kPrimePowers,
                LocalFactor lf = LocalFactor::kDensity);

/// Truncated characteristic function over primes of degree <= D and products of at most r_max primes.
std::complex<double> char_fn_phi(const mpz_class& q, double tau, int D, int r_max,
                                 LocalFactor lf = LocalFactor::kDensity);

// ----------------------------------------------------------------- survey

enum class NtildeReading { kBase, kBaseChange };
NtildeReading parse_ntilde_reading(const std::string& s);
std::string to_string(NtildeReading r);

struct SurveyConfig {
  uint64_t q = 3;
  int gamma = 5;
  bool exhaustive = false;
  uint64_t samples = 100;
  uint64_t seed = 1;
  int Z = 0;  ///< 0 means gamma
  int n = 2;
  long d = 1;
  int r_max = 4;
  int degree_bound = 12;
  int threads = 0;  ///< 0 means the OpenMP default
  StrataModel strata = StrataModel::kRational;
  Beta1Variant beta1 = Beta1Variant::kPaper;
  NtildeReading ntilde_reading = NtildeReading::kBase;
  /// The character-sum path for Delta_Z runs when q^Z is at most this.
  uint64_t character_path_cap = 200'000;

  int truncation() const { return Z > 0 ? Z : gamma; }
};

struct SurveyRecord {
  uint64_t index = 0;
  std::vector<uint64_t> F;  ///< c_0..c_{gamma-1}
  int genus = 0;
  int delta = 0;
  LPolynomial L;
  mpz_class NJ, NJ_q2, two_torsion;
  mpz_class ml, ms20, ntilde;
  mpq_class delta_z;
  bool delta_z_checked = false;
  Real delta_z_real, raw_mnd, centered_mnd, ms20_stat, ntilde_stat, ntilde_gap;
  /// Empty when the pipeline succeeded.
  std::string error;
  int error_code = 0;
};

/// Where L-polynomials come from; empty means compute them.
using LSource = std::function<LPolynomial(const HyperellipticCurve&)>;

SurveyRecord analyze_curve(const HyperellipticCurve& H, const SurveyConfig& cfg, const PrimeTable* primes,
                           uint64_t index = 0, const LSource& lsource = {});

struct MomentRow {
  std::string statistic;
  int r = 0;
  Real empirical, theoretical, tail;
  std::optional<double> tolerance;
  bool pass = true;
};

struct Standardized {
  Real mean, var, skew, kurt;
};
Standardized standardized_moments(const std::vector<Real>& xs);

struct MomentReport {
  uint64_t curves = 0;
  uint64_t failed = 0;
  int Z = 0;
  int D = 0;
  std::vector<Real> delta_moments;   ///< <Delta_Z^r>, r = 1..r_max
  std::vector<Real> centered_moments;  ///< <centered N_F^r>
  std::vector<HValue> h;               ///< H(1)..H(r_max)
  Standardized mnd_scaled, ms20_scaled, ntilde_scaled;
  std::vector<MomentRow> rows;

  bool all_pass() const;
};

/// Runs the per-curve pipeline in index order; sink receives records in index order.
MomentReport survey(const SurveyConfig& cfg, const std::function<void(const SurveyRecord&)>& sink,
                    const LSource& lsource = {});

}  // namespace census
