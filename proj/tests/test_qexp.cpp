#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hmf/errors.hpp"
#include "hmf/qexp.hpp"

using namespace hmf;

namespace {

AdelicSeries random_series(std::shared_ptr<const SeriesContext> ctx, const Ring& R,
                           WeightVector w, long B, std::mt19937_64& rng, long lim = 20) {
  AdelicSeries f(ctx, R, w, B);
  std::uniform_int_distribution<long> d(-lim, lim);
  for (long l = 0; l < ctx->h_plus(); ++l) f.constant_slot(l) = R.from_int(d(rng));
  for (const Ideal& m : ctx->slot_ideals(B)) f.set_coeff(m, R.from_int(d(rng)));
  return f;
}

// naive convolution oracle: rectangle-scan over lattice coefficients with
// generous margins, exact membership tests
RElem convolution_oracle(const AdelicSeries& f, const AdelicSeries& g, const Ideal& m) {
  const auto& ctx = *f.ctx();
  const QuadraticField& F = ctx.field();
  const Ring& R = f.ring();
  auto [lambda, xi] = ctx.target_data(m);
  const Ideal& t = ctx.representatives()[lambda];
  Ideal t_inv = ideal_inverse(F, t);
  auto [alpha, beta] = ideal_basis(t);
  Rat U = embedding_abs_bound(F, xi);
  long M = rat_floor(U / (Rat(t.a) * t.c)).get_si() + 3;
  long N = rat_floor(2 * U / t.c).get_si() + 3;
  RElem acc = R.add(R.mul(f.constant_slot(lambda), g.coeff(m)),
                    R.mul(f.coeff(m), g.constant_slot(lambda)));
  for (long a = -M; a <= M; ++a) {
    for (long b = -N; b <= N; ++b) {
      if (a == 0 && b == 0) continue;
      FieldElement xi1 = alpha.scaled(Rat(a)) + beta.scaled(Rat(b));
      if (!is_totally_positive(F, xi1)) continue;
      FieldElement xi2 = xi - xi1;
      if (!is_totally_positive(F, xi2)) continue;
      Ideal b1 = ideal_mul(F, principal_ideal(F, xi1), t_inv);
      Ideal b2 = ideal_mul(F, principal_ideal(F, xi2), t_inv);
      acc = R.add(acc, R.mul(f.coeff(b1), g.coeff(b2)));
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("one series is the multiplicative identity") {
  std::mt19937_64 rng(21);
  for (long d : {5L, 6L}) {
    auto ctx = SeriesContext::canonical(QuadraticField::create(d));
    Ring R = Ring::from_descriptor("fp:7");
    AdelicSeries one = one_series(ctx, R, 30);
    AdelicSeries f = random_series(ctx, R, WeightVector::parallel(1), 30, rng);
    CHECK(series_mul(one, f) == f);
    CHECK(series_mul(f, one) == f);
  }
}

TEST_CASE("algebra laws on random series (F7 and Q, B = 40)") {
  auto ctx = SeriesContext::canonical(QuadraticField::create(6));
  std::mt19937_64 rng(4096);
  for (const char* rd : {"fp:7", "q"}) {
    Ring R = Ring::from_descriptor(rd);
    for (int trial = 0; trial < 12; ++trial) {
      auto f = random_series(ctx, R, WeightVector::parallel(1), 40, rng);
      auto g = random_series(ctx, R, WeightVector::parallel(1), 40, rng);
      auto h = random_series(ctx, R, WeightVector::parallel(1), 40, rng);
      CAPTURE(rd);
      CAPTURE(trial);
      CHECK(series_mul(f, g) == series_mul(g, f));
      CHECK(series_mul(series_mul(f, g), h) == series_mul(f, series_mul(g, h)));
      CHECK(series_mul(f, series_add(g, h)) ==
            series_add(series_mul(f, g), series_mul(f, h)));
      // weight grading
      CHECK(series_mul(f, g).weight() == WeightVector::parallel(2));
    }
  }
}

TEST_CASE("phi/psi round trip and parallel unit-orbit invariance") {
  auto F = QuadraticField::create(6);
  auto ctx = SeriesContext::canonical(F);
  auto fc = ctx->fc_ptr();
  std::mt19937_64 rng(55);
  Ring R = Ring::from_descriptor("fp:7");
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_series(ctx, R, WeightVector::parallel(1), 25, rng);
    for (const Ideal& m : ctx->slot_ideals(25)) {
      auto [lambda, xi] = ctx->target_data(m);
      RElem geo = phi_coefficient(f, lambda, xi);
      CHECK(psi_coefficient(f, lambda, xi, geo) == f.coeff(m));
    }
  }
  // phi at xi and at eps_+ * xi agree in parallel weight when in range
  auto f = random_series(ctx, R, WeightVector::parallel(1), 60, rng);
  const FieldElement& eps = fc->units().totally_positive_fundamental_unit;
  for (const Ideal& m : ctx->slot_ideals(60)) {
    auto [lambda, xi] = ctx->target_data(m);
    FieldElement xi2 = mul(F, eps, xi);
    CHECK(phi_coefficient(f, lambda, xi) == phi_coefficient(f, lambda, xi2));
  }
}

TEST_CASE("non-parallel weights: phi factor and round trip over nf:-6,0,1") {
  auto F = QuadraticField::create(6);
  auto ctx = SeriesContext::canonical(F);
  Ring K = Ring::from_descriptor("nf:-6,0,1");
  std::mt19937_64 rng(77);
  WeightVector w31(3, 1);
  auto f = random_series(ctx, K, w31, 20, rng);
  RElem omega = *K.omega_image(F);
  for (const Ideal& m : ctx->slot_ideals(20)) {
    auto [lambda, xi] = ctx->target_data(m);
    // factor is xi^{(0,-1)} = 1 / xi^{(2)}, with omega^{(2)} = -omega
    RElem xi2 = K.add(K.from_rat(xi.x), K.mul(K.from_rat(xi.y), K.neg(omega)));
    RElem expect = K.mul(f.coeff(m), K.inv(xi2));
    CHECK(phi_coefficient(f, lambda, xi) == expect);
    CHECK(psi_coefficient(f, lambda, xi, expect) == f.coeff(m));
  }
  // weights stay graded through multiplication
  auto g = random_series(ctx, K, WeightVector(1, 3), 20, rng);
  CHECK(series_mul(f, g).weight() == WeightVector::parallel(4));
  // in positive characteristic the same weight is rejected
  auto fp = random_series(ctx, Ring::from_descriptor("fp:7"), w31, 10, rng);
  CHECK_THROWS_AS(series_mul(fp, fp), Error);
}

TEST_CASE("series_mul agrees with the rectangle-scan convolution oracle") {
  std::mt19937_64 rng(31337);
  for (long d : {5L, 6L}) {
    auto ctx = SeriesContext::canonical(QuadraticField::create(d));
    Ring R = Ring::rationals();
    auto f = random_series(ctx, R, WeightVector::parallel(1), 30, rng, 9);
    auto g = random_series(ctx, R, WeightVector::parallel(1), 30, rng, 9);
    auto prod = series_mul(f, g);
    for (const Ideal& m : ctx->slot_ideals(30)) {
      CAPTURE(d);
      CAPTURE(m.label());
      CHECK(prod.coeff(m) == convolution_oracle(f, g, m));
    }
  }
}

TEST_CASE("inversion: self-check against the one series") {
  auto ctx = SeriesContext::canonical(QuadraticField::create(6));
  std::mt19937_64 rng(99);
  SUBCASE("constants and the one series") {
    Ring R = Ring::rationals();
    AdelicSeries one = one_series(ctx, R, 40);
    CHECK(invert(one) == one);
    AdelicSeries c(ctx, R, WeightVector::parallel(0), 40);
    c.constant_slot(0) = R.from_int(3);
    c.constant_slot(1) = R.from_rat(make_rat(-7, 2));
    AdelicSeries ci = invert(c);
    CHECK(ci.constant_slot(0) == R.from_rat(make_rat(1, 3)));
    CHECK(ci.constant_slot(1) == R.from_rat(make_rat(-2, 7)));
  }
  SUBCASE("random series over F5 and Q") {
    for (const char* rd : {"fp:5", "q"}) {
      Ring R = Ring::from_descriptor(rd);
      for (int trial = 0; trial < 6; ++trial) {
        auto f = random_series(ctx, R, WeightVector::parallel(1), 50, rng);
        // force unit constants
        f.constant_slot(0) = R.from_int(1 + (trial % 3));
        f.constant_slot(1) = R.from_int(2);
        AdelicSeries fi = invert(f);
        CHECK(series_mul(f, fi) == one_series(ctx, R, 50));
        CHECK(fi.weight() == -f.weight());
      }
    }
  }
  SUBCASE("non-unit constant slot is rejected with the class named") {
    Ring Z = Ring::from_descriptor("z");
    AdelicSeries f = one_series(ctx, Z, 10);
    f.constant_slot(1) = Z.from_int(5);
    try {
      invert(f);
      FAIL("expected NotInvertible");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInvertible);
      CHECK(std::string(e.what()).find("class 1") != std::string::npos);
    }
  }
}

TEST_CASE("truncation") {
  auto ctx = SeriesContext::canonical(QuadraticField::create(6));
  Ring R = Ring::from_descriptor("fp:7");
  std::mt19937_64 rng(123);
  AdelicSeries one = one_series(ctx, R, 30);
  CHECK(truncate(one, 10) == one_series(ctx, R, 10));
  auto f = random_series(ctx, R, WeightVector::parallel(1), 30, rng);
  CHECK(truncate(f, 30) == f);
  CHECK_THROWS_AS(truncate(f, 31), Error);
  // pi_B(f*g) = pi_B(pi_B f * pi_B g): truncation is an ideal
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_series(ctx, R, WeightVector::parallel(1), 30, rng);
    auto b = random_series(ctx, R, WeightVector::parallel(1), 30, rng);
    long Bp = 12;
    CHECK(truncate(series_mul(a, b), Bp) ==
          series_mul(truncate(a, Bp), truncate(b, Bp)));
  }
}

TEST_CASE("representative change leaves products bit-identical") {
  auto F = QuadraticField::create(6);
  auto ctx = SeriesContext::canonical(F);
  std::mt19937_64 rng(246);
  Ring R = Ring::from_descriptor("fp:7");

  SUBCASE("identity and unit scalings change nothing") {
    auto f = random_series(ctx, R, WeightVector::parallel(1), 20, rng);
    std::vector<FieldElement> ones{FieldElement::from_int(1), FieldElement::from_int(1)};
    AdelicSeries g = rep_change(f, ones);
    CHECK(g.ctx()->representatives() == ctx->representatives());
    // eps * t is the same ideal: unit scaling
    std::vector<FieldElement> eps{FieldElement(Rat(5), Rat(2)), FieldElement::from_int(1)};
    AdelicSeries h = rep_change(f, eps);
    CHECK(h.ctx()->representatives() == ctx->representatives());
    CHECK(h.coeffs() == f.coeffs());
  }

  SUBCASE("products through two representative sets agree slot-wise") {
    // replace t_1 (norm-2 prime) by (5+w)*t_1 and t_0 by (3)*t_0
    std::vector<FieldElement> xi{FieldElement(Rat(3), Rat(0)), FieldElement(Rat(5), Rat(1))};
    for (int trial = 0; trial < 50; ++trial) {
      auto f = random_series(ctx, R, WeightVector::parallel(1), 25, rng);
      auto g = random_series(ctx, R, WeightVector::parallel(1), 25, rng);
      AdelicSeries f2 = rep_change(f, xi), g2 = rep_change(g, xi);
      AdelicSeries p1 = series_mul(f, g), p2 = series_mul(f2, g2);
      CHECK(p1.constant_tuple() == p2.constant_tuple());
      CHECK(p1.coeffs() == p2.coeffs());
    }
  }

  SUBCASE("invalid scalars are rejected") {
    auto f = random_series(ctx, R, WeightVector::parallel(1), 10, rng);
    // 1 - w is not totally positive for d = 6
    CHECK_THROWS_AS(
        rep_change(f, {FieldElement(Rat(1), Rat(-1)), FieldElement::from_int(1)}), Error);
    // 1/2 makes t_0 non-integral
    CHECK_THROWS_AS(
        rep_change(f, {FieldElement(make_rat(1, 2), Rat(0)), FieldElement::from_int(1)}),
        Error);
  }
}

TEST_CASE("subring coefficient verification") {
  auto ctx = SeriesContext::canonical(QuadraticField::create(6));
  Ring Q = Ring::rationals();
  Ring Z = Ring::from_descriptor("z");
  Ring Z331 = Ring::from_descriptor("loc:0,1;inv=331");
  AdelicSeries f = one_series(ctx, Q, 30);
  f.set_coeff(Ideal(), Q.from_int(5));
  CHECK(verify_subring_coeffs(f, Z, 25));
  f.set_coeff(Ideal(), Q.from_rat(make_rat(1, 12)));
  CHECK_FALSE(verify_subring_coeffs(f, Z, 25));
  f.set_coeff(Ideal(), Q.from_rat(make_rat(1, 331)));
  CHECK_FALSE(verify_subring_coeffs(f, Z, 25));
  CHECK(verify_subring_coeffs(f, Z331, 25));
  CHECK_THROWS_AS(verify_subring_coeffs(f, Z, 30), Error);  // beyond precision
}

TEST_CASE("series slots round-trip") {
  auto ctx = SeriesContext::canonical(QuadraticField::create(6));
  Ring R = Ring::from_descriptor("fq:3,2");
  std::mt19937_64 rng(8);
  AdelicSeries f(ctx, R, WeightVector::parallel(1), 15);
  std::uniform_int_distribution<long> d(0, 8);
  for (long l = 0; l < 2; ++l)
    f.constant_slot(l) = R.from_coeffs({Rat(d(rng)), Rat(d(rng))});
  for (const Ideal& m : ctx->slot_ideals(15))
    f.set_coeff(m, R.from_coeffs({Rat(d(rng)), Rat(d(rng))}));
  auto slots = to_slots(f);
  CHECK(from_slots(ctx, R, f.weight(), 15, slots) == f);
}
