#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hmf/character.hpp"
#include "hmf/errors.hpp"

using namespace hmf;

namespace {

// independent Euler-criterion oracle in plain machine arithmetic, for
// degree-1 primes: symbol of (u + v*r) mod p where r is the omega residue
long powmod(long b, long e, long p) {
  long r = 1;
  b %= p;
  if (b < 0) b += p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

int euler_oracle(long u, long v, long r, long p) {
  long x = ((u + v * r) % p + p) % p;
  if (x == 0) return 0;
  long s = powmod(x, (p - 1) / 2, p);
  return s == 1 ? 1 : -1;
}

PrimeIdeal prime_over(const QuadraticField& F, long p, long index = 0) {
  auto ps = primes_above(F, Int(p));
  REQUIRE(ps.size() > static_cast<size_t>(index));
  return ps[index];
}

}  // namespace

TEST_CASE("residue fields and symbols") {
  auto F6 = QuadraticField::create(6);
  // N_331 = (25 + 7w), omega = 91 mod 331 (91^2 = 6 mod 331)
  auto N331 = prime_over(F6, 331, 0);
  {
    bool found = false;
    for (const auto& P : primes_above(F6, Int(331)))
      if (P.ideal == principal_ideal(F6, FieldElement(Rat(25), Rat(7)))) found = true;
    CHECK(found);
  }
  auto P = principal_ideal(F6, FieldElement(Rat(25), Rat(7)));
  PrimeIdeal N;
  for (const auto& q : primes_above(F6, Int(331)))
    if (q.ideal == P) N = q;
  ResidueField rf = residue_field(F6, N);
  CHECK(rf.degree == 1);
  long r = rf.Fq.as_rational(rf.omega_image)->get_num().get_si();
  CHECK((r * r - 6) % 331 == 0);

  // the derived example: symbol of 5 - w mod N_331 against the oracle
  FieldElement g(Rat(5), Rat(-1));
  int sym = residue_symbol(F6, N, g);
  CHECK(sym == euler_oracle(5, -1, r, 331));

  // inert prime: residue field of size p^2
  auto F = QuadraticField::create(6);
  auto inert = prime_over(F, 7);  // 6 is not a QR mod 7 (squares: 1,2,4)
  CHECK(inert.residue_degree == 2);
  ResidueField rf2 = residue_field(F, inert);
  CHECK(rf2.Fq.degree() == 2);
  // omega image satisfies x^2 = 6
  CHECK(rf2.Fq.mul(rf2.omega_image, rf2.omega_image) == rf2.Fq.from_int(6));
  // Euler criterion in F_49: a nonzero square of the base field
  CHECK(residue_symbol(F, inert, FieldElement(Rat(4), Rat(0))) == 1);
}

TEST_CASE("trivial character") {
  auto F = QuadraticField::create(6);
  auto fc = FieldContext::get(F);
  auto chi = IdealCharacter::trivial(fc, prime_over(F, 331).ideal);
  CHECK(chi.order() == 1);
  CHECK(chi.ring().is_one(chi.eval(Ideal())));
  CHECK(chi.ring().is_one(chi.eval(principal_ideal(F, FieldElement(Rat(5), Rat(-1))))));
  // zero on non-coprime arguments
  CHECK(chi.ring().is_zero(chi.eval(prime_over(F, 331).ideal)));
}

TEST_CASE("quadratic character mod the norm-331 prime: eps_+ is a nonsquare") {
  // eps_+ = 5 + 2*sqrt(6) = (sqrt2 + sqrt3)^2 reduces to 187 mod 331, and
  // (2|331) = -1 makes it a non-residue, so the residue-symbol character is
  // ill-defined there; the constructor must reject with the unit witness.
  auto F = QuadraticField::create(6);
  auto fc = FieldContext::get(F);
  PrimeIdeal N;
  auto gen = principal_ideal(F, FieldElement(Rat(25), Rat(7)));
  for (const auto& q : primes_above(F, Int(331)))
    if (q.ideal == gen) N = q;
  try {
    IdealCharacter::quadratic(fc, N, Ring::rationals());
    FAIL("expected a construction error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    std::string msg = e.what();
    CHECK(msg.find("not a square") != std::string::npos);
    CHECK(msg.find("5+2w") != std::string::npos);  // witness
  }
}

TEST_CASE("quadratic character class extension: consistency check over d = 10") {
  // d = 10: N(eps) = -1 so eps_+ = eps^2 is always a square and the
  // well-definedness gate passes; (2,w)^2 = (2) with (2|13) = -1 then rules
  // out any rational value on the nontrivial class.
  auto F = QuadraticField::create(10);
  auto fc = FieldContext::get(F);
  REQUIRE(fc->h_plus() == 2);
  auto P13 = prime_over(F, 13, 0);
  try {
    IdealCharacter::quadratic(fc, P13, Ring::rationals());
    FAIL("expected a construction error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("no consistent extension") != std::string::npos);
  }
  // over F_5 the required value exists (2^2 = -1), so construction succeeds
  Ring F5 = Ring::finite_field(Int(5), 1u);
  auto chi = IdealCharacter::quadratic(fc, P13, F5, {F5.from_int(2)});
  CHECK(chi.order() == 4);  // extended by an order-4 value
  CHECK(F5.is_zero(chi.eval(P13.ideal)));
  // multiplicativity survives the extension
  auto P2 = prime_over(F, 2).ideal;
  auto P3a = prime_over(F, 3, 0).ideal;
  CHECK(chi.eval(ideal_mul(F, P2, P3a)) == F5.mul(chi.eval(P2), chi.eval(P3a)));
}

TEST_CASE("quadratic character mod the norm-23 prime of Q(sqrt 6)") {
  auto F = QuadraticField::create(6);
  auto fc = FieldContext::get(F);
  // 11^2 = 6 mod 23, eps_+ = 5 + 2*11 = 27 = 4 mod 23 is a square
  auto P23 = prime_over(F, 23, 0);
  auto chi = IdealCharacter::quadratic(fc, P23, Ring::rationals());
  CHECK(chi.order() == 2);
  CHECK(chi.ring().is_one(chi.eval(Ideal())));
  CHECK(chi.ring().is_zero(chi.eval(P23.ideal)));

  SUBCASE("multiplicativity on random coprime pairs") {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<long> d(-9, 9);
    int done = 0;
    while (done < 200) {
      FieldElement a(Rat(d(rng)), Rat(d(rng))), b(Rat(d(rng)), Rat(d(rng)));
      if (a.is_zero() || b.is_zero()) continue;
      Ideal A = principal_ideal(F, a), B = principal_ideal(F, b);
      if (!ideals_coprime(F, A, B)) continue;
      CHECK(chi.eval(ideal_mul(F, A, B)) == chi.ring().mul(chi.eval(A), chi.eval(B)));
      ++done;
    }
  }

  SUBCASE("ray-class consistency: chi((xi)) = 1 for xi = 1 mod N, xi >> 0") {
    auto [b1, b2] = ideal_basis(P23.ideal);
    int done = 0;
    for (long a = -8; a <= 8 && done < 50; ++a) {
      for (long b = -8; b <= 8 && done < 50; ++b) {
        FieldElement xi = FieldElement::from_int(1) + b1.scaled(Rat(a)) + b2.scaled(Rat(b));
        if (!is_totally_positive(F, xi)) continue;
        Ideal I = principal_ideal(F, xi);
        if (!ideals_coprime(F, I, P23.ideal)) continue;
        CAPTURE(element_to_string(xi));
        CHECK(chi.ring().is_one(chi.eval(I)));
        ++done;
      }
    }
    CHECK(done == 50);
  }

  SUBCASE("chi^2 is trivial on coprime ideals") {
    for (const Ideal& m : fc->ideals_up_to(40)) {
      if (!ideals_coprime(F, m, P23.ideal)) continue;
      CHECK(chi.ring().is_one(chi.ring().mul(chi.eval(m), chi.eval(m))));
    }
  }
}

TEST_CASE("genus character for d = 6") {
  auto F = QuadraticField::create(6);
  auto fc = FieldContext::get(F);
  auto N331 = principal_ideal(F, FieldElement(Rat(25), Rat(7)));
  auto chi = IdealCharacter::genus(fc, N331);
  CHECK(chi.order() == 2);
  // +1 exactly on narrowly trivial classes
  auto P2 = prime_over(F, 2).ideal;   // ramified, nontrivial narrow class
  auto P19 = principal_ideal(F, FieldElement(Rat(5), Rat(-1)));  // trivial class
  CHECK(chi.eval(P2) == chi.ring().from_int(-1));
  CHECK(chi.eval(P19) == chi.ring().from_int(1));
  CHECK(chi.ring().is_zero(chi.eval(N331)));
  // multiplicative because the narrow class map is
  CHECK(chi.eval(ideal_mul(F, P2, P19)) == chi.ring().from_int(-1));
  // genus lift needs h+ = 2
  CHECK_THROWS_AS(IdealCharacter::genus(FieldContext::get(QuadraticField::create(5)), Ideal()),
                  Error);
}

TEST_CASE("table characters are strict about missing primes") {
  auto F = QuadraticField::create(5);
  auto fc = FieldContext::get(F);
  Ring Q = Ring::rationals();
  std::map<Ideal, RElem> table;
  for (const Ideal& m : fc->ideals_up_to(12)) {
    auto fac = fc->factorization(m);
    if (fac.size() == 1 && fac[0].second == 1) table[m] = Q.from_int(-1);
  }
  auto chi = IdealCharacter::table(fc, Ideal(), Q, table, 12);
  CHECK(chi.order() == 2);
  auto P11 = primes_above(F, Int(11))[0].ideal;
  CHECK(chi.eval(P11) == Q.from_int(-1));
  auto P19 = primes_above(F, Int(19))[0].ideal;  // beyond the table bound
  CHECK_THROWS_AS(chi.eval(P19), Error);
  try {
    chi.eval(P19);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
    CHECK(std::string(e.what()).find(P19.label()) != std::string::npos);
  }
}
