#pragma once

#include <string>
#include <vector>

#include "hmf/quad_field.hpp"

namespace hmf {

// Fractional ideal of Z[omega] as the lattice c*(Z*a + Z*(b+omega)), stored
// in Hermite-reduced canonical form: a > 0, 0 <= b < a, a | N(b+omega), c a
// positive rational (the content).  Integral iff c is an integer.  The norm
// is a*c^2.  Equality is structural.
struct Ideal {
  Int a;
  Int b;
  Rat c;
  bool is_integral;

  Ideal() : a(1), b(0), c(1), is_integral(true) {}

  bool operator==(const Ideal& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator!=(const Ideal& o) const { return !(*this == o); }
  // Deterministic structural order for containers and reports.
  bool operator<(const Ideal& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }

  bool is_trivial() const { return a == 1 && b == 0 && c == 1; }
  std::string label() const;  // "a.b.c"
};

Ideal make_ideal(const QuadraticField& F, const Int& a, const Int& b, const Rat& c);
Ideal ideal_from_label(const QuadraticField& F, const std::string& label);

// Z-lattice spanned by the given elements; must be a fractional ideal
// (rank 2 and stable under omega), which holds for all callers here.
Ideal ideal_from_elements(const QuadraticField& F, const std::vector<FieldElement>& gens);
Ideal principal_ideal(const QuadraticField& F, const FieldElement& g);

Rat ideal_norm(const Ideal& A);

// Lattice basis (a*c, (b+omega)*c).
std::pair<FieldElement, FieldElement> ideal_basis(const Ideal& A);

Ideal ideal_mul(const QuadraticField& F, const Ideal& A, const Ideal& B);
Ideal ideal_sum(const QuadraticField& F, const Ideal& A, const Ideal& B);
Ideal ideal_conjugate(const QuadraticField& F, const Ideal& A);
Ideal ideal_inverse(const QuadraticField& F, const Ideal& A);
Ideal ideal_scale(const QuadraticField& F, const Ideal& A, const Rat& q);
Ideal ideal_pow(const QuadraticField& F, const Ideal& A, long e);
// A / B; integrality is NOT required of the result.
Ideal ideal_div(const QuadraticField& F, const Ideal& A, const Ideal& B);
// A with content stripped (c = 1); same narrow class.
Ideal primitive_part(const Ideal& A);

bool ideal_contains(const QuadraticField& F, const Ideal& A, const FieldElement& e);
bool ideal_divides(const QuadraticField& F, const Ideal& A, const Ideal& B);  // A | B
bool ideals_coprime(const QuadraticField& F, const Ideal& A, const Ideal& B);

struct PrimeIdeal {
  Ideal ideal;
  Int p;               // rational prime below
  int residue_degree;  // 1 or 2
  int ramification;    // 1 or 2
};

// Prime ideals above p, ordered by HNF.  Covers split, inert and ramified p.
std::vector<PrimeIdeal> primes_above(const QuadraticField& F, const Int& p);

using IdealFactorization = std::vector<std::pair<PrimeIdeal, int>>;

// Factorization of an integral ideal (deterministic prime order).
IdealFactorization factor_ideal(const QuadraticField& F, const Ideal& A);

}  // namespace hmf
