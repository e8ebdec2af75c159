#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace census {

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;
using Coeffs = boost::container::small_vector<uint64_t, 4>;

inline constexpr uint64_t kDefaultSeed = 0x5eedULL;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
bool is_prime(uint64_t n);

/// An element of F_{p^e}, stored as e coefficients over F_p in the
/// polynomial basis of the owner's modulus. The owner must outlive it.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const FieldSpec* f, Coeffs c) : f_(f), c_(std::move(c)) {}

  const FieldSpec* field() const { return f_; }
  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;
  /// Canonical integer label sum c_i p^i.
  uint64_t label() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  bool operator==(const FieldElement& o) const { return f_ == o.f_ && c_ == o.c_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inv() const;
  FieldElement pow(uint64_t n) const;
  FieldElement pow(const mpz_class& n) const;

 private:
  const FieldSpec* f_ = nullptr;
  Coeffs c_;
};

class FieldSpec {
 public:
  FieldSpec(uint64_t p, std::vector<uint64_t> modulus);

  uint64_t p() const { return p_; }
  int degree() const { return e_; }
  /// Cardinality Q = p^e.
  uint64_t order() const { return q_; }
  mpz_class order_big() const { return mpz_class(std::to_string(q_)); }
  /// Low coefficients c_0..c_{e-1} of the monic modulus; empty when e = 1.
  const std::vector<uint64_t>& modulus() const { return mod_; }

  FieldElement zero() const { return FieldElement(this, Coeffs(e_, 0)); }
  FieldElement one() const;
  FieldElement from_int(int64_t v) const;
  FieldElement from_label(uint64_t label) const;
  FieldElement from_coeffs(const std::vector<uint64_t>& c) const;
  /// The class of x in F_p[x]/(modulus).
  FieldElement generator_x() const;

  void mul_into(const uint64_t* a, const uint64_t* b, uint64_t* out) const;

 private:
  uint64_t p_;
  int e_;
  uint64_t q_;
  std::vector<uint64_t> mod_;
};

/// Field of order p^e with a seeded random irreducible modulus.
FieldPtr make_field(uint64_t p, int e, uint64_t seed = kDefaultSeed);
/// F_q for an odd prime power q.
FieldPtr make_field_of_order(uint64_t q, uint64_t seed = kDefaultSeed);
/// Field with an explicit monic modulus given by its low coefficients.
FieldPtr make_field_with_modulus(uint64_t p, std::vector<uint64_t> modulus);

/// -1, 0 or +1 by Euler's criterion.
int quadratic_character(const FieldElement& a);

/// Cached tower level F_{q^m} over base = F_q, as a single extension of F_p.
FieldPtr extension_field(const FieldPtr& base, int m);

/// Image of a under the cached embedding base -> ext.
FieldElement embed(const FieldSpec& base, const FieldSpec& ext, const FieldElement& a);

/// Rabin irreducibility test for a monic polynomial over F_p, coefficients low to high
/// including the leading 1.
bool prime_field_poly_irreducible(const std::vector<uint64_t>& f, uint64_t p);

}  // namespace census
