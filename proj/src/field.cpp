#include "census/field.hpp"

#include <map>
#include <mutex>
#include <random>
#include <string>

#include "census/errors.hpp"

namespace census {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t s : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % s == 0) return n == s;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

using PPoly = std::vector<uint64_t>;

void trim(PPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pp_rem(PPoly a, const PPoly& b, uint64_t p) {
  trim(a);
  const size_t db = b.size() - 1;
  const uint64_t inv_lead = powmod(b.back(), p - 2, p);
  while (a.size() > db) {
    uint64_t t = mulmod(a.back(), inv_lead, p);
    size_t shift = a.size() - 1 - db;
    for (size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(t, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

PPoly pp_mulmod(const PPoly& a, const PPoly& b, const PPoly& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return pp_rem(std::move(c), f, p);
}

PPoly pp_powmod(PPoly base, uint64_t e, const PPoly& f, uint64_t p) {
  PPoly r{1};
  base = pp_rem(std::move(base), f, p);
  while (e) {
    if (e & 1) r = pp_mulmod(r, base, f, p);
    base = pp_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

PPoly pp_gcd(PPoly a, PPoly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PPoly r = pp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

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

// x^{p^k} mod f
PPoly frobenius_x(const PPoly& f, uint64_t p, uint64_t k) {
  PPoly r{0, 1};
  for (uint64_t i = 0; i < k; ++i) r = pp_powmod(r, p, f, p);
  return r;
}

}  // namespace

bool prime_field_poly_irreducible(const std::vector<uint64_t>& f, uint64_t p) {
  if (f.size() < 2 || f.back() != 1) throw InvariantError("irreducibility test needs a monic polynomial");
  const uint64_t d = f.size() - 1;
  if (d == 1) return true;
  PPoly x{0, 1};
  for (uint64_t l : prime_factors(d)) {
    PPoly h = frobenius_x(f, p, d / l);
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    PPoly g = pp_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  PPoly h = frobenius_x(f, p, d);
  trim(h);
  return h == x;
}

FieldSpec::FieldSpec(uint64_t p, std::vector<uint64_t> modulus)
    : p_(p), e_(modulus.empty() ? 1 : static_cast<int>(modulus.size())), mod_(std::move(modulus)) {
  if (p < 3 || !is_prime(p)) throw InputError("field characteristic must be an odd prime, got " + std::to_string(p));
  unsigned __int128 q = 1;
  for (int i = 0; i < e_; ++i) {
    q *= p;
    if (q > (static_cast<unsigned __int128>(1) << 63)) throw ResourceError("field order exceeds 2^63");
  }
  q_ = static_cast<uint64_t>(q);
  for (auto& c : mod_) {
    if (c >= p) throw InputError("modulus coefficient out of range");
  }
  if (e_ > 1) {
    PPoly full(mod_.begin(), mod_.end());
    full.push_back(1);
    if (!prime_field_poly_irreducible(full, p)) throw InputError("field modulus is not irreducible");
  }
}

FieldElement FieldSpec::one() const {
  Coeffs c(e_, 0);
  c[0] = 1;
  return FieldElement(this, c);
}

FieldElement FieldSpec::from_int(int64_t v) const {
  Coeffs c(e_, 0);
  const auto p = static_cast<int64_t>(p_);
  c[0] = static_cast<uint64_t>((v % p + p) % p);
  return FieldElement(this, c);
}

FieldElement FieldSpec::from_label(uint64_t label) const {
  if (label >= q_) throw InputError("field element label out of range");
  Coeffs c(e_, 0);
  for (int i = 0; i < e_; ++i) {
    c[i] = label % p_;
    label /= p_;
  }
  return FieldElement(this, c);
}

FieldElement FieldSpec::from_coeffs(const std::vector<uint64_t>& v) const {
  if (static_cast<int>(v.size()) > e_) throw InputError("too many coefficients for field element");
  Coeffs c(e_, 0);
  for (size_t i = 0; i < v.size(); ++i) c[i] = v[i] % p_;
  return FieldElement(this, c);
}

FieldElement FieldSpec::generator_x() const {
  if (e_ == 1) return zero();
  Coeffs c(e_, 0);
  c[1] = 1;
  return FieldElement(this, c);
}

void FieldSpec::mul_into(const uint64_t* a, const uint64_t* b, uint64_t* out) const {
  if (e_ == 1) {
    out[0] = mulmod(a[0], b[0], p_);
    return;
  }
  unsigned __int128 acc[2 * 64];
  const int n = 2 * e_ - 1;
  for (int k = 0; k < n; ++k) acc[k] = 0;
  for (int i = 0; i < e_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < e_; ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
  }
  uint64_t prod[2 * 64];
  for (int k = 0; k < n; ++k) prod[k] = static_cast<uint64_t>(acc[k] % p_);
  for (int k = n - 1; k >= e_; --k) {
    uint64_t t = prod[k];
    if (t == 0) continue;
    for (int i = 0; i < e_; ++i) {
      uint64_t s = mulmod(t, mod_[i], p_);
      uint64_t& dst = prod[k - e_ + i];
      dst = dst >= s ? dst - s : dst + p_ - s;
    }
  }
  for (int i = 0; i < e_; ++i) out[i] = prod[i];
}

namespace {
void same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field() || a.field() == nullptr) throw InvariantError("mixed-field operands");
}
}  // namespace

bool FieldElement::is_zero() const {
  for (auto c : c_) {
    if (c) return false;
  }
  return true;
}

bool FieldElement::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i) {
    if (c_[i]) return false;
  }
  return true;
}

uint64_t FieldElement::label() const {
  uint64_t r = 0;
  const uint64_t p = f_->p();
  for (size_t i = c_.size(); i-- > 0;) r = r * p + c_[i];
  return r;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  same_field(*this, o);
  const uint64_t p = f_->p();
  Coeffs c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) {
    uint64_t s = c_[i] + o.c_[i];
    if (s >= p || s < c_[i]) s -= p;
    c[i] = s;
  }
  return FieldElement(f_, c);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  same_field(*this, o);
  const uint64_t p = f_->p();
  Coeffs c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + (p - o.c_[i]);
  return FieldElement(f_, c);
}

FieldElement FieldElement::operator-() const { return f_->zero() - *this; }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  same_field(*this, o);
  Coeffs c(c_.size());
  f_->mul_into(c_.data(), o.c_.data(), c.data());
  return FieldElement(f_, c);
}

FieldElement FieldElement::pow(uint64_t n) const {
  FieldElement r = f_->one();
  FieldElement b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

FieldElement FieldElement::pow(const mpz_class& n) const {
  if (n < 0) return inv().pow(mpz_class(-n));
  FieldElement r = f_->one();
  const size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r *= r;
    if (mpz_tstbit(n.get_mpz_t(), i)) r *= *this;
  }
  return r;
}

FieldElement FieldElement::inv() const {
  if (is_zero()) throw InvariantError("inverse of zero");
  return pow(f_->order() - 2);
}

FieldPtr make_field_with_modulus(uint64_t p, std::vector<uint64_t> modulus) {
  return std::make_shared<const FieldSpec>(p, std::move(modulus));
}

FieldPtr make_field_of_order(uint64_t q, uint64_t seed) {
  if (q < 3 || q % 2 == 0) throw InputError("q must be an odd prime power, got " + std::to_string(q));
  if (is_prime(q)) return make_field(q, 1, seed);
  uint64_t p = 3;
  while (q % p != 0 && p * p <= q) p += 2;
  if (q % p != 0) p = q;
  int e = 0;
  uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1 || !is_prime(p)) throw InputError("q must be an odd prime power, got " + std::to_string(q));
  return make_field(p, e, seed);
}

FieldPtr make_field(uint64_t p, int e, uint64_t seed) {
  if (e <= 0) throw InputError("extension degree must be positive");
  if (p < 3 || !is_prime(p)) throw InputError("field characteristic must be an odd prime, got " + std::to_string(p));
  if (e == 1) return make_field_with_modulus(p, {});
  std::seed_seq ss{seed, p, static_cast<uint64_t>(e)};
  std::mt19937_64 rng(ss);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    PPoly f(e + 1);
    for (int i = 0; i < e; ++i) f[i] = rng() % p;
    f[e] = 1;
    if (f[0] == 0) continue;
    if (prime_field_poly_irreducible(f, p)) {
      f.pop_back();
      return make_field_with_modulus(p, std::move(f));
    }
  }
  throw InvariantError("irreducible modulus search failed");
}

int quadratic_character(const FieldElement& a) {
  if (a.is_zero()) return 0;
  FieldElement r = a.pow((a.field()->order() - 1) / 2);
  if (r.is_one()) return 1;
  if (r == -a.field()->one()) return -1;
  throw InvariantError("Euler criterion produced neither 1 nor -1");
}

namespace {

struct TowerRegistry {
  std::mutex mu;
  std::map<std::pair<const FieldSpec*, int>, FieldPtr> levels;
  std::map<std::pair<const FieldSpec*, const FieldSpec*>, FieldElement> roots;
  std::vector<FieldPtr> keep_alive;
};

TowerRegistry& registry() {
  static TowerRegistry* r = new TowerRegistry();
  return *r;
}

FieldElement eval_modulus(const FieldSpec& base, const FieldElement& y) {
  const FieldSpec& ext = *y.field();
  FieldElement acc = ext.one();
  for (int i = base.degree() - 1; i >= 0; --i) acc = acc * y + ext.from_int(static_cast<int64_t>(base.modulus()[i]));
  return acc;
}

FieldElement find_root(const FieldSpec& base, const FieldSpec& ext) {
  if (ext.order() <= (1ULL << 16)) {
    for (uint64_t l = 0; l < ext.order(); ++l) {
      FieldElement y = ext.from_label(l);
      if (eval_modulus(base, y).is_zero()) return y;
    }
    throw InvariantError("no root of the base modulus in the extension");
  }
  // x^((Q-1)/(q-1)) is a norm into the subfield F_q, which contains the roots.
  const uint64_t expo = (ext.order() - 1) / (base.order() - 1);
  std::seed_seq ss{ext.p(), static_cast<uint64_t>(ext.degree()), static_cast<uint64_t>(base.degree())};
  std::mt19937_64 rng(ss);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    FieldElement x = ext.from_label(rng() % ext.order());
    if (x.is_zero()) continue;
    FieldElement y = x.pow(expo);
    if (eval_modulus(base, y).is_zero()) return y;
  }
  throw InvariantError("root search for the embedding failed");
}

}  // namespace

FieldPtr extension_field(const FieldPtr& base, int m) {
  if (m <= 0) throw InputError("extension degree must be positive");
  if (m == 1) return base;
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto key = std::make_pair(base.get(), m);
  auto it = reg.levels.find(key);
  if (it != reg.levels.end()) return it->second;
  FieldPtr ext = make_field(base->p(), base->degree() * m);
  reg.levels[key] = ext;
  reg.keep_alive.push_back(base);
  return ext;
}

FieldElement embed(const FieldSpec& base, const FieldSpec& ext, const FieldElement& a) {
  if (a.field() != &base) throw InvariantError("embed: element does not belong to the base field");
  if (base.p() != ext.p() || ext.degree() % base.degree() != 0) throw InvariantError("embed: no compatible degree");
  if (&base == &ext) return a;
  const auto& c = a.coeffs();
  if (base.degree() == 1) return ext.from_int(static_cast<int64_t>(c[0]));
  FieldElement rho;
  {
    auto& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto key = std::make_pair(&base, &ext);
    auto it = reg.roots.find(key);
    if (it == reg.roots.end()) it = reg.roots.emplace(key, find_root(base, ext)).first;
    rho = it->second;
  }
  FieldElement acc = ext.zero();
  for (int i = base.degree() - 1; i >= 0; --i) acc = acc * rho + ext.from_int(static_cast<int64_t>(c[i]));
  return acc;
}

}  // namespace census
