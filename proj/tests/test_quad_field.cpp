#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hmf/errors.hpp"
#include "hmf/quad_field.hpp"

using namespace hmf;

namespace {

// Independent sign oracle: rational interval for sqrt(d) with 100 decimal
// digits, then interval evaluation of x + y*omega.  Returns 0 only for the
// exact zero element (the interval version reports "ambiguous" as 2).
int interval_sign(const QuadraticField& F, const FieldElement& a, int emb) {
  static Int scale = pow_int(Int(10), 100);
  Int lo = isqrt(F.d * scale * scale);  // lo <= sqrt(d)*10^100 < lo+1
  Rat sqrt_lo = make_rat(lo, scale), sqrt_hi = make_rat(lo + 1, scale);
  Rat U = a.x + Rat(F.omega_trace()) * a.y / 2;
  Rat V = F.omega_is_half ? a.y / 2 : a.y;
  if (emb == 2) V = -V;
  Rat vlo = V >= 0 ? V * sqrt_lo : V * sqrt_hi;
  Rat vhi = V >= 0 ? V * sqrt_hi : V * sqrt_lo;
  Rat lo_val = U + vlo, hi_val = U + vhi;
  if (lo_val > 0) return 1;
  if (hi_val < 0) return -1;
  if (V == 0 && U == 0) return 0;
  return 2;  // ambiguous at this precision
}

Rat random_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12);
  return make_rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("field construction and omega conventions") {
  auto F6 = QuadraticField::create(6);
  CHECK(F6.discriminant == 24);
  CHECK_FALSE(F6.omega_is_half);
  auto F5 = QuadraticField::create(5);
  CHECK(F5.discriminant == 5);
  CHECK(F5.omega_is_half);
  CHECK_THROWS_AS(QuadraticField::create(12), Error);  // not squarefree
  CHECK_THROWS_AS(QuadraticField::create(1), Error);
}

TEST_CASE("embedding signs on pinned examples") {
  auto F6 = QuadraticField::create(6);
  FieldElement one_plus_w(Rat(1), Rat(1));
  CHECK(embedding_sign(F6, one_plus_w, 1) == 1);
  CHECK(embedding_sign(F6, one_plus_w, 2) == -1);  // 1 - sqrt(6) < 0
  CHECK(embedding_sign(F6, FieldElement(), 1) == 0);
  CHECK(embedding_sign(F6, FieldElement(), 2) == 0);

  auto F5 = QuadraticField::create(5);
  FieldElement e(Rat(3), Rat(-1));  // 3 - (1+sqrt5)/2
  CHECK(embedding_sign(F5, e, 1) == 1);
  CHECK(embedding_sign(F5, e, 2) == 1);
  CHECK(interval_sign(F5, e, 1) == 1);
  CHECK(interval_sign(F5, e, 2) == 1);
}

TEST_CASE("total positivity pinned examples") {
  auto F6 = QuadraticField::create(6);
  CHECK(is_totally_positive(F6, FieldElement(Rat(5), Rat(1))));
  CHECK_FALSE(is_totally_positive(F6, FieldElement(Rat(1), Rat(1))));
  CHECK(is_totally_positive(F6, FieldElement(Rat(25), Rat(7))));  // 25^2 > 49*6
}

TEST_CASE("embedding_sign agrees with the interval oracle on random elements") {
  std::mt19937_64 rng(12345);
  for (long d : {2L, 3L, 5L, 6L, 10L, 13L, 21L}) {
    auto F = QuadraticField::create(d);
    for (int i = 0; i < 1000; ++i) {
      FieldElement a(random_rat(rng), random_rat(rng));
      for (int emb : {1, 2}) {
        int oracle = interval_sign(F, a, emb);
        REQUIRE(oracle != 2);
        CHECK(embedding_sign(F, a, emb) == oracle);
      }
    }
  }
}

TEST_CASE("norm and trace are exactly multiplicative / additive") {
  std::mt19937_64 rng(777);
  auto F = QuadraticField::create(13);
  for (int i = 0; i < 300; ++i) {
    FieldElement a(random_rat(rng), random_rat(rng));
    FieldElement b(random_rat(rng), random_rat(rng));
    CHECK(norm(F, mul(F, a, b)) == norm(F, a) * norm(F, b));
    CHECK(trace(F, a + b) == trace(F, a) + trace(F, b));
    if (!a.is_zero()) {
      CHECK(mul(F, a, inverse(F, a)) == FieldElement::from_int(1));
    }
  }
}

TEST_CASE("fundamental units match Pell oracles") {
  // Oracle: brute-force minimal unit > 1 by scanning omega-coefficients.
  auto brute_unit = [](const QuadraticField& F) {
    Int t = F.omega_trace(), n = F.omega_norm();
    FieldElement one = FieldElement::from_int(1);
    for (Int y = 1; y < 5000; ++y) {
      // x^2 + t x y + n y^2 = ±1  =>  (2x + ty)^2 = (t^2 - 4n) y^2 ± 4
      std::vector<FieldElement> cands;
      for (int rhs : {1, -1}) {
        Int disc = (t * t - 4 * n) * y * y + 4 * rhs;
        Int r;
        if (!is_square(disc, &r)) continue;
        for (Int twox : {Int(r - t * y), Int(-r - t * y)}) {
          if (twox % 2 != 0) continue;
          FieldElement cand(Rat(twox / 2), Rat(y));
          if (embedding_sign(F, cand - one, 1) > 0) cands.push_back(cand);
        }
      }
      if (cands.empty()) continue;
      FieldElement best = cands[0];
      for (auto& c : cands)
        if (embedding_sign(F, best - c, 1) > 0) best = c;
      return best;
    }
    FAIL("no unit found in brute range");
    return FieldElement();
  };

  SUBCASE("d=6: eps = 5 + 2w, norm +1, already totally positive") {
    auto F = QuadraticField::create(6);
    auto u = fundamental_unit(F);
    CHECK(u.fundamental_unit == FieldElement(Rat(5), Rat(2)));
    CHECK(u.norm_of_unit == 1);
    CHECK(u.totally_positive_fundamental_unit == u.fundamental_unit);
    CHECK(Int(25 - 6 * 4) == 1);  // Pell check 5^2 - 6*2^2 = 1
  }
  SUBCASE("d=2: eps = 1 + w, norm -1, eps_+ = eps^2 = 3 + 2w") {
    auto F = QuadraticField::create(2);
    auto u = fundamental_unit(F);
    CHECK(u.fundamental_unit == FieldElement(Rat(1), Rat(1)));
    CHECK(u.norm_of_unit == -1);
    CHECK(u.totally_positive_fundamental_unit == FieldElement(Rat(3), Rat(2)));
  }
  SUBCASE("d=5: eps = w, norm -1") {
    auto F = QuadraticField::create(5);
    auto u = fundamental_unit(F);
    CHECK(u.fundamental_unit == FieldElement(Rat(0), Rat(1)));
    CHECK(u.norm_of_unit == -1);
    CHECK(u.totally_positive_fundamental_unit == FieldElement(Rat(1), Rat(1)));
  }
  SUBCASE("cross-check against brute-force Pell search") {
    for (long d : {2L, 3L, 5L, 6L, 7L, 10L, 11L, 13L, 14L, 15L, 17L, 19L, 21L, 23L, 29L, 33L}) {
      auto F = QuadraticField::create(d);
      auto u = fundamental_unit(F);
      CAPTURE(d);
      CHECK(u.fundamental_unit == brute_unit(F));
      CHECK(abs(norm(F, u.fundamental_unit)) == 1);
      CHECK(embedding_sign(F, u.fundamental_unit - FieldElement::from_int(1), 1) == 1);
      CHECK(is_totally_positive(F, u.totally_positive_fundamental_unit));
    }
  }
}

TEST_CASE("totally positive units are invisible in parallel weight") {
  // eps_+^{k/2} for parallel k is N(eps_+)^{k/2} = 1.
  for (long d : {2L, 5L, 6L}) {
    auto F = QuadraticField::create(d);
    auto u = fundamental_unit(F);
    CHECK(norm(F, u.totally_positive_fundamental_unit) == 1);
  }
}
