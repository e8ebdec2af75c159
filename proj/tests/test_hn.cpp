#include <doctest.h>

#include <numeric>

#include "census/errors.hpp"
#include "census/hn.hpp"

using namespace census;

namespace {

CurveContext context(uint64_t p, std::vector<uint64_t> labels) {
  auto f = make_field(p, 1);
  auto H = HyperellipticCurve::from_labels(f, labels);
  return CurveContext::make(l_polynomial(H));
}

std::vector<CurveContext> sample_contexts() {
  std::vector<CurveContext> out;
  out.push_back(context(3, {1, 2, 0, 0, 0}));
  out.push_back(context(3, {0, 1, 0, 0, 0}));
  out.push_back(context(5, {1, 0, 3, 0, 0}));
  out.push_back(context(3, {1, 1, 0, 0, 0, 0, 0}));
  return out;
}

bool is_integer(const mpq_class& x) { return x.get_den() == 1; }

}  // namespace

TEST_CASE("euler exponent") {
  CHECK(euler_exponent({1, 1}, {1, 0}, 2) == 0);
  CHECK(euler_exponent({2, 1}, {1, 0}, 3) == -3);
  CHECK(euler_exponent({1, 1, 1}, {2, 1, 0}, 2) == 1 + 2 + 1 - 3);
  CHECK_THROWS_AS(euler_exponent({1, 1}, {1}, 2), InputError);
}

TEST_CASE("compositions") {
  for (int n = 1; n <= 6; ++n) CHECK(compositions(n).size() == (1u << (n - 1)) - 1);
  CHECK(compositions(3) == std::vector<Composition>{{1, 1, 1}, {1, 2}, {2, 1}});
  CHECK(compositions(3, 1).size() == 4);
}

TEST_CASE("cone engine matches floor forms") {
  for (auto& ctx : sample_contexts()) {
    for (long d = -4; d <= 4; ++d) {
      CAPTURE(d);
      CHECK(c_l(ctx, {1, 1}, d) == c11_floor_form(ctx, d));
      CHECK(c_l(ctx, {1, 1, 1}, d) == c111_floor_form(ctx, d));
      CHECK(c_l(ctx, {2, 1}, d) == c21_floor_form(ctx, d));
      CHECK(c_l(ctx, {1, 2}, d) == c12_floor_form(ctx, d));
    }
  }
}

TEST_CASE("cone engine within certified box bound") {
  auto ctxs = sample_contexts();
  for (size_t c = 0; c < 3; ++c) {
    auto& ctx = ctxs[c];
    for (int n = 2; n <= 4; ++n) {
      for (const auto& comp : compositions(n)) {
        for (long d : {0L, 1L, -1L}) {
          CAPTURE(n);
          CAPTURE(d);
          int R = comp.size() >= 4 ? 10 : 24;
          auto box = c_l_box_oracle(ctx, comp, d, R);
          mpq_class exact = c_l(ctx, comp, d);
          CHECK(box.value <= exact);
          CHECK(exact - box.value <= box.tail_bound);
          CHECK(box.tail_bound < exact * mpq_class(1, 1000000));
        }
      }
    }
  }
}

TEST_CASE("modulus multiplier does not change C_L") {
  auto ctx = sample_contexts()[0];
  for (int n = 2; n <= 4; ++n)
    for (const auto& comp : compositions(n))
      for (long d = -2; d <= 2; ++d) CHECK(c_l(ctx, comp, d, 2) == c_l(ctx, comp, d, 1));
  CHECK(c_l(ctx, {1, 1, 1}, 2, 3) == c_l(ctx, {1, 1, 1}, 2));
}

TEST_CASE("duality and twisting") {
  for (auto& ctx : sample_contexts()) {
    for (int n = 2; n <= 4; ++n) {
      for (const auto& comp : compositions(n)) {
        Composition rev(comp.rbegin(), comp.rend());
        for (long d = -3; d <= 3; ++d) {
          CHECK(c_l(ctx, comp, d) == c_l(ctx, rev, -d));
          CHECK(c_l(ctx, comp, d) == c_l(ctx, comp, d + n));
        }
      }
    }
  }
}

TEST_CASE("semistable masses") {
  for (auto& ctx : sample_contexts()) {
    CHECK(beta(ctx, 2, 0) + c_l(ctx, {1, 1}, 0) == siegel_mass(ctx, 2));
    CHECK(beta(ctx, 1, 7) * (ctx.q - 1) == 1);
    for (int n = 2; n <= 5; ++n) {
      for (long d = 0; d < n; ++d) {
        CAPTURE(n);
        CAPTURE(d);
        mpq_class b = beta(ctx, n, d);
        CHECK(b > 0);
        CHECK(b < siegel_mass(ctx, n));
        CHECK(b == beta(ctx, n, d + 3 * n));
        if (std::gcd(long(n), d) == 1) CHECK(is_integer(b * (ctx.q - 1)));
      }
    }
  }
}

TEST_CASE("rank limits") {
  auto ctx = sample_contexts()[0];
  CHECK_THROWS_AS(beta(ctx, 7, 1), UnsupportedError);
  CHECK_THROWS_AS(c_l(ctx, {4, 3}, 1), UnsupportedError);
  CHECK_THROWS_AS(c_l(ctx, {2}, 1), InputError);
  CHECK_THROWS_AS(c_l(ctx, {1, 0}, 1), InputError);
  CHECK(beta(ctx, 6, 1) > 0);
}

TEST_CASE("printed rank-3 forms are d-independent constants") {
  auto ctx = sample_contexts()[1];
  CHECK(c111_closed_form(ctx) > 0);
  CHECK(c21_closed_form(ctx) > 0);
  // the brace in the printed C_{21} is beta(2,0) + beta(2,1)
  mpq_class q6 = mpq_class(ctx.q * ctx.q * ctx.q * ctx.q * ctx.q * ctx.q);
  REQUIRE(ctx.g == 2);
  mpq_class expect = q6 / (q6 - 1) * mpq_class(ctx.NJ * ctx.q * ctx.q) / mpq_class(ctx.q - 1) *
                     (beta(ctx, 2, 0) + beta(ctx, 2, 1));
  CHECK(c21_closed_form(ctx) == expect);
}
