#include "hmf/ideal.hpp"

#include <algorithm>

#include "hmf/errors.hpp"

namespace hmf {

namespace {

// N(b + omega) as an integer (b integral).
Int norm_b_plus_omega(const QuadraticField& F, const Int& b) {
  return b * b + F.omega_trace() * b + F.omega_norm();
}

}  // namespace

std::string Ideal::label() const {
  return a.get_str() + "." + b.get_str() + "." + rat_to_string(c);
}

Ideal make_ideal(const QuadraticField& F, const Int& a, const Int& b, const Rat& c) {
  if (a <= 0 || c <= 0) fail(ErrorKind::Validation, "ideal requires a > 0, c > 0");
  Ideal A;
  A.a = a;
  Int bb = b % a;
  if (bb < 0) bb += a;
  A.b = bb;
  A.c = c;
  if (norm_b_plus_omega(F, A.b) % a != 0)
    fail(ErrorKind::Validation, "not an ideal lattice: a does not divide N(b+omega)");
  A.is_integral = is_integer(c);
  return A;
}

Ideal ideal_from_label(const QuadraticField& F, const std::string& label) {
  auto p1 = label.find('.');
  auto p2 = label.find('.', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    fail(ErrorKind::Validation, "bad ideal label: " + label);
  Int a(label.substr(0, p1)), b(label.substr(p1 + 1, p2 - p1 - 1));
  Rat c = rat_from_string(label.substr(p2 + 1));
  return make_ideal(F, a, b, c);
}

Ideal ideal_from_elements(const QuadraticField& F, const std::vector<FieldElement>& gens) {
  // Clear denominators, then column-reduce the (x, y) pairs to the shape
  // Z*(a0, 0) + Z*(u, g) with g = gcd of y-parts.
  Int D(1);
  for (const auto& g : gens) {
    D = lcm(D, g.x.get_den());
    D = lcm(D, g.y.get_den());
  }
  std::vector<std::pair<Int, Int>> v;  // (u, w) meaning u + w*omega, scaled by D
  for (const auto& g : gens) {
    Int u = g.x.get_num() * (D / g.x.get_den());
    Int w = g.y.get_num() * (D / g.y.get_den());
    if (u != 0 || w != 0) v.emplace_back(u, w);
  }
  if (v.empty()) fail(ErrorKind::Validation, "zero lattice is not an ideal");

  Int wu(0), wg(0);  // accumulated vector with y-part = gcd of all y-parts
  for (auto& [u, w] : v) {
    if (w == 0) continue;
    if (wg == 0) {
      wu = u;
      wg = w;
      if (wg < 0) {
        wg = -wg;
        wu = -wu;
      }
      continue;
    }
    Int s, t, g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), wg.get_mpz_t(),
               w.get_mpz_t());
    wu = s * wu + t * u;
    wg = g;
  }
  if (wg == 0) fail(ErrorKind::Validation, "rank-1 lattice is not an ideal");

  Int a0(0);
  for (auto& [u, w] : v) {
    Int k = w / wg;  // exact
    a0 = gcd(a0, Int(u - k * wu));
  }
  if (a0 == 0) fail(ErrorKind::Validation, "rank-1 lattice is not an ideal");
  a0 = abs(a0);

  // lattice = (1/D) * ( Z*(a0, 0) + Z*(wu, wg) );  content = wg/D.
  if (a0 % wg != 0 || wu % wg != 0)
    fail(ErrorKind::Validation, "lattice not stable under omega");
  return make_ideal(F, Int(a0 / wg), Int(wu / wg), make_rat(wg, D));
}

Ideal principal_ideal(const QuadraticField& F, const FieldElement& g) {
  if (g.is_zero()) fail(ErrorKind::Validation, "zero is not a generator");
  FieldElement omega(Rat(0), Rat(1));
  return ideal_from_elements(F, {g, mul(F, g, omega)});
}

Rat ideal_norm(const Ideal& A) { return Rat(A.a) * A.c * A.c; }

std::pair<FieldElement, FieldElement> ideal_basis(const Ideal& A) {
  return {FieldElement(Rat(A.a) * A.c, Rat(0)),
          FieldElement(Rat(A.b) * A.c, A.c)};
}

Ideal ideal_mul(const QuadraticField& F, const Ideal& A, const Ideal& B) {
  auto [a1, a2] = ideal_basis(A);
  auto [b1, b2] = ideal_basis(B);
  return ideal_from_elements(
      F, {mul(F, a1, b1), mul(F, a1, b2), mul(F, a2, b1), mul(F, a2, b2)});
}

Ideal ideal_sum(const QuadraticField& F, const Ideal& A, const Ideal& B) {
  auto [a1, a2] = ideal_basis(A);
  auto [b1, b2] = ideal_basis(B);
  return ideal_from_elements(F, {a1, a2, b1, b2});
}

Ideal ideal_conjugate(const QuadraticField& F, const Ideal& A) {
  // conj(b + omega) = (b + t) - omega; negate to renormalize.
  return make_ideal(F, A.a, Int(-(A.b + F.omega_trace())), A.c);
}

Ideal ideal_inverse(const QuadraticField& F, const Ideal& A) {
  Ideal C = ideal_conjugate(F, A);
  C.c = C.c / ideal_norm(A);
  C.is_integral = is_integer(C.c);
  return C;
}

Ideal ideal_scale(const QuadraticField& F, const Ideal& A, const Rat& q) {
  if (q <= 0) fail(ErrorKind::Validation, "ideal scale must be positive");
  return make_ideal(F, A.a, A.b, A.c * q);
}

Ideal ideal_pow(const QuadraticField& F, const Ideal& A, long e) {
  if (e < 0) return ideal_pow(F, ideal_inverse(F, A), -e);
  Ideal r;  // O_K
  Ideal base = A;
  while (e > 0) {
    if (e & 1) r = ideal_mul(F, r, base);
    base = ideal_mul(F, base, base);
    e >>= 1;
  }
  return r;
}

Ideal ideal_div(const QuadraticField& F, const Ideal& A, const Ideal& B) {
  return ideal_mul(F, A, ideal_inverse(F, B));
}

Ideal primitive_part(const Ideal& A) {
  Ideal P = A;
  P.c = 1;
  P.is_integral = true;
  return P;
}

bool ideal_contains(const QuadraticField& F, const Ideal& A, const FieldElement& e) {
  (void)F;
  // e = m*(a*c) + n*((b+omega)*c)  =>  n = y/c, m = (x - n*b*c)/(a*c)
  Rat n = e.y / A.c;
  if (!is_integer(n)) return false;
  Rat m = (e.x - n * Rat(A.b) * A.c) / (Rat(A.a) * A.c);
  return is_integer(m);
}

bool ideal_divides(const QuadraticField& F, const Ideal& A, const Ideal& B) {
  auto [b1, b2] = ideal_basis(B);
  return ideal_contains(F, A, b1) && ideal_contains(F, A, b2);
}

bool ideals_coprime(const QuadraticField& F, const Ideal& A, const Ideal& B) {
  return ideal_sum(F, A, B).is_trivial();
}

std::vector<PrimeIdeal> primes_above(const QuadraticField& F, const Int& p) {
  if (!is_probable_prime(p)) fail(ErrorKind::Validation, "primes_above: not a prime");
  Int t = F.omega_trace(), n = F.omega_norm();
  std::vector<Int> roots;
  for (Int x = 0; x < p; ++x) {
    if ((x * x - t * x + n) % p == 0) roots.push_back(x);
  }
  std::vector<PrimeIdeal> out;
  bool ramified = (F.discriminant % p == 0);
  if (roots.empty()) {
    PrimeIdeal P;
    P.ideal = make_ideal(F, 1, 0, Rat(p));  // inert: (p)
    P.p = p;
    P.residue_degree = 2;
    P.ramification = 1;
    out.push_back(P);
  } else {
    for (const Int& r : roots) {
      PrimeIdeal P;
      P.ideal = make_ideal(F, p, Int(-r), Rat(1));  // (p, omega - r)
      P.p = p;
      P.residue_degree = 1;
      P.ramification = ramified ? 2 : 1;
      out.push_back(P);
    }
    if (ramified != (out.size() == 1))
      fail(ErrorKind::Internal, "inconsistent splitting data");
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) {
      return x.ideal < y.ideal;
    });
  }
  return out;
}

IdealFactorization factor_ideal(const QuadraticField& F, const Ideal& A) {
  if (!A.is_integral) fail(ErrorKind::Validation, "factor_ideal: ideal not integral");
  IdealFactorization out;
  Int N = ideal_norm(A).get_num();
  if (N == 1) return out;
  for (const Int& p : prime_divisors(N)) {
    for (const PrimeIdeal& P : primes_above(F, p)) {
      int v = 0;
      Ideal cur = A;
      while (true) {
        Ideal q = ideal_div(F, cur, P.ideal);
        if (!q.is_integral) break;
        cur = q;
        ++v;
      }
      if (v > 0) out.emplace_back(P, v);
    }
  }
  return out;
}

}  // namespace hmf
