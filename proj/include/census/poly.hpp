#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "census/field.hpp"

namespace census {

/// Dense polynomial over a FieldSpec, coefficients low to high, no trailing zeros.
/// Monic polynomials (the MonicPoly of the curve family) are Polys with leading 1.
class Poly {
 public:
  explicit Poly(const FieldSpec* f) : f_(f) {}
  Poly(const FieldSpec* f, std::vector<FieldElement> c);

  /// Monic polynomial x^d + c_{d-1}x^{d-1} + ... + c_0 from canonical labels c_0..c_{d-1}.
  static Poly monic_from_labels(const FieldSpec& f, const std::vector<uint64_t>& low);
  static Poly constant(const FieldElement& c);
  static Poly x(const FieldSpec& f);

  const FieldSpec* field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
  const std::vector<FieldElement>& coeffs() const { return c_; }
  FieldElement coeff(int i) const;
  const FieldElement& lead() const { return c_.back(); }
  /// Labels of c_0..c_{d-1}; the implicit leading 1 is dropped.
  std::vector<uint64_t> low_labels() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const FieldElement& s) const;
  bool operator==(const Poly& o) const { return f_ == o.f_ && c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  FieldElement evaluate(const FieldElement& x) const;
  Poly derivative() const;
  Poly monic() const;

 private:
  void trim();
  const FieldSpec* f_;
  std::vector<FieldElement> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
/// Monic gcd; gcd(f, 0) is monic(f).
Poly gcd(const Poly& a, const Poly& b);
Poly powmod(const Poly& base, const mpz_class& n, const Poly& m);

bool is_squarefree(const Poly& f);
bool is_irreducible(const Poly& f);

/// Every monic polynomial of degree d in label order (c_0 least significant digit).
void for_each_monic(const FieldSpec& f, int d, const std::function<void(const Poly&)>& fn);

/// Number of monic irreducibles of degree m over F_q: (1/m) sum_{r|m} mu(r) q^{m/r}.
mpz_class count_irreducibles(const mpz_class& q, int m);
int moebius(int n);

std::vector<Poly> irreducibles_of_degree(const FieldSpec& f, int m);
/// All monic irreducibles of degree <= D, ordered by degree then label.
std::vector<Poly> irreducibles_upto(const FieldSpec& f, int D);

/// Legendre symbol (F/P) for irreducible P.
int legendre_poly(const Poly& F, const Poly& P, bool check_irreducible = true);
/// Same symbol by Euler's criterion, F^{(|P|-1)/2} mod P.
int legendre_poly_euler(const Poly& F, const Poly& P, bool check_irreducible = true);
/// Jacobi symbol (F/M) for monic M, by reciprocity.
int jacobi_poly(const Poly& F, const Poly& M);

struct PrimePower {
  Poly P;
  int k;
  int degree;
  int mangoldt;
};
std::vector<PrimePower> prime_powers_of_degree(const FieldSpec& f, int m);

/// Degrees of the irreducible factors of a squarefree f, ascending.
std::vector<int> factor_degrees(const Poly& f);

}  // namespace census
