#include "census/poly.hpp"

#include <algorithm>

#include "census/errors.hpp"

namespace census {

Poly::Poly(const FieldSpec* f, std::vector<FieldElement> c) : f_(f), c_(std::move(c)) {
  for (auto& e : c_) {
    if (e.field() != f_) throw InvariantError("polynomial coefficient from another field");
  }
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::monic_from_labels(const FieldSpec& f, const std::vector<uint64_t>& low) {
  std::vector<FieldElement> c;
  c.reserve(low.size() + 1);
  for (auto l : low) c.push_back(f.from_label(l));
  c.push_back(f.one());
  return Poly(&f, std::move(c));
}

Poly Poly::constant(const FieldElement& c) { return Poly(c.field(), {c}); }

Poly Poly::x(const FieldSpec& f) { return Poly(&f, {f.zero(), f.one()}); }

FieldElement Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return f_->zero();
  return c_[i];
}

std::vector<uint64_t> Poly::low_labels() const {
  std::vector<uint64_t> out;
  for (int i = 0; i < degree(); ++i) out.push_back(c_[i].label());
  return out;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<FieldElement> c(std::max(c_.size(), o.c_.size()), f_->zero());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return Poly(f_, std::move(c));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<FieldElement> c(std::max(c_.size(), o.c_.size()), f_->zero());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[i] -= o.c_[i];
  return Poly(f_, std::move(c));
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly(f_);
  std::vector<FieldElement> c(c_.size() + o.c_.size() - 1, f_->zero());
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return Poly(f_, std::move(c));
}

Poly Poly::scaled(const FieldElement& s) const {
  std::vector<FieldElement> c = c_;
  for (auto& e : c) e *= s;
  return Poly(f_, std::move(c));
}

FieldElement Poly::evaluate(const FieldElement& x) const {
  FieldElement acc = x.field()->zero();
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(f_);
  std::vector<FieldElement> c;
  for (size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * f_->from_int(static_cast<int64_t>(i % f_->p())));
  return Poly(f_, std::move(c));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(lead().inv());
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw InvariantError("polynomial division by zero");
  const FieldSpec* f = a.field();
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<FieldElement> r = a.coeffs();
  std::vector<FieldElement> q(a.degree() - b.degree() + 1, f->zero());
  const FieldElement inv_lead = b.lead().inv();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (r[k].is_zero()) continue;
    FieldElement t = b.is_monic() ? r[k] : r[k] * inv_lead;
    q[k - db] = t;
    for (int i = 0; i <= db; ++i) r[k - db + i] -= t * bc[i];
  }
  r.resize(db > 0 ? db : 0, f->zero());
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly powmod(const Poly& base, const mpz_class& n, const Poly& m) {
  if (n < 0) throw InvariantError("negative exponent in powmod");
  Poly r = Poly::constant(m.field()->one()) % m;
  Poly b = base % m;
  const size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = (r * r) % m;
    if (mpz_tstbit(n.get_mpz_t(), i)) r = (r * b) % m;
  }
  return r;
}

bool is_squarefree(const Poly& f) {
  if (f.degree() < 1) throw InputError("squarefree test needs degree >= 1");
  return gcd(f, f.derivative()).degree() == 0;
}

namespace {

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// h -> h^q mod f
Poly frobenius(const Poly& h, const Poly& f) { return powmod(h, h.field()->order_big(), f); }

Poly x_frobenius_power(const Poly& f, int k) {
  Poly h = Poly::x(*f.field()) % f;
  for (int i = 0; i < k; ++i) h = frobenius(h, f);
  return h;
}

}  // namespace

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) throw InputError("irreducibility test needs degree >= 1");
  const int d = f.degree();
  if (d == 1) return true;
  const Poly x = Poly::x(*f.field());
  for (int l : prime_divisors(d)) {
    Poly h = x_frobenius_power(f, d / l) - x;
    if (gcd(f, h).degree() != 0) return false;
  }
  return x_frobenius_power(f, d) == x % f;
}

void for_each_monic(const FieldSpec& f, int d, const std::function<void(const Poly&)>& fn) {
  const uint64_t q = f.order();
  std::vector<uint64_t> digits(d, 0);
  while (true) {
    fn(Poly::monic_from_labels(f, digits));
    int i = 0;
    while (i < d && ++digits[i] == q) {
      digits[i] = 0;
      ++i;
    }
    if (i == d) break;
  }
}

int moebius(int n) {
  int r = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  }
  if (n > 1) r = -r;
  return r;
}

mpz_class count_irreducibles(const mpz_class& q, int m) {
  mpz_class s = 0;
  for (int r = 1; r <= m; ++r) {
    if (m % r) continue;
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), q.get_mpz_t(), m / r);
    s += moebius(r) * t;
  }
  return s / m;
}

std::vector<Poly> irreducibles_of_degree(const FieldSpec& f, int m) {
  std::vector<Poly> out;
  for_each_monic(f, m, [&](const Poly& p) {
    if (is_irreducible(p)) out.push_back(p);
  });
  return out;
}

std::vector<Poly> irreducibles_upto(const FieldSpec& f, int D) {
  if (D < 1) throw InputError("degree bound must be >= 1");
  std::vector<Poly> out;
  for (int m = 1; m <= D; ++m) {
    auto v = irreducibles_of_degree(f, m);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

namespace {

void require_prime_modulus(const Poly& P, bool check_irreducible) {
  if (P.degree() < 1 || !P.is_monic() || (check_irreducible && !is_irreducible(P)))
    throw InputError("legendre_poly needs a monic irreducible P");
}

}  // namespace

int legendre_poly_euler(const Poly& F, const Poly& P, bool check_irreducible) {
  require_prime_modulus(P, check_irreducible);
  Poly r = F % P;
  if (r.is_zero()) return 0;
  mpz_class n;
  mpz_pow_ui(n.get_mpz_t(), P.field()->order_big().get_mpz_t(), P.degree());
  Poly s = powmod(r, (n - 1) / 2, P);
  if (s.degree() != 0) throw InvariantError("Legendre power is not a constant");
  if (s.lead().is_one()) return 1;
  if (s.lead() == -P.field()->one()) return -1;
  throw InvariantError("Legendre power is not +-1");
}

int jacobi_poly(const Poly& F, const Poly& M) {
  if (M.degree() < 0 || !M.is_monic()) throw InputError("jacobi_poly needs a monic modulus");
  const bool odd_half = (M.field()->order() / 2) % 2 == 1;  // (q-1)/2 odd
  Poly a = F % M, b = M;
  int sign = 1;
  while (true) {
    if (b.degree() == 0) return sign;
    if (a.is_zero()) return 0;
    FieldElement c = a.lead();
    if (!c.is_one()) {
      if (b.degree() % 2 == 1) sign *= quadratic_character(c);
      a = a.monic();
    }
    if (odd_half && (a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
    Poly r = b % a;
    b = std::move(a);
    a = std::move(r);
  }
}

int legendre_poly(const Poly& F, const Poly& P, bool check_irreducible) {
  require_prime_modulus(P, check_irreducible);
  return jacobi_poly(F, P);
}

std::vector<PrimePower> prime_powers_of_degree(const FieldSpec& f, int m) {
  if (m < 1) throw InputError("degree must be >= 1");
  std::vector<PrimePower> out;
  for (int d = 1; d <= m; ++d) {
    if (m % d) continue;
    for (auto& P : irreducibles_of_degree(f, d)) out.push_back({P, m / d, m, d});
  }
  return out;
}

std::vector<int> factor_degrees(const Poly& f) {
  std::vector<int> out;
  Poly rest = f.monic();
  const Poly x = Poly::x(*f.field());
  Poly h = x % rest;
  for (int i = 1; 2 * i <= rest.degree(); ++i) {
    h = frobenius(h, rest);
    Poly g = gcd(rest, h - x);
    if (g.degree() > 0) {
      if (g.degree() % i) throw InvariantError("distinct-degree factorization: non-squarefree input");
      for (int k = 0; k < g.degree() / i; ++k) out.push_back(i);
      rest = divmod(rest, g).first;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.push_back(rest.degree());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace census
