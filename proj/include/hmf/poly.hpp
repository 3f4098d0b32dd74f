#pragma once

#include "hmf/linalg.hpp"

namespace hmf {

// Dense univariate polynomial over a coefficient ring, low..high, trimmed.
struct RPoly {
  std::vector<RElem> c;

  size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
  bool is_zero() const { return c.empty(); }
};

RPoly poly_trim(const Ring& R, RPoly f);
RPoly poly_from_coeffs(const Ring& R, std::vector<RElem> c);
RPoly poly_x(const Ring& R);
RPoly poly_const(const Ring& R, const RElem& a);
RPoly poly_add(const Ring& R, const RPoly& a, const RPoly& b);
RPoly poly_sub(const Ring& R, const RPoly& a, const RPoly& b);
RPoly poly_mul(const Ring& R, const RPoly& a, const RPoly& b);
RPoly poly_monic(const Ring& R, const RPoly& a);
// Over a field: quotient and remainder.
std::pair<RPoly, RPoly> poly_divmod(const Ring& R, const RPoly& a, const RPoly& b);
RPoly poly_gcd(const Ring& R, const RPoly& a, const RPoly& b);  // monic
RPoly poly_pow_mod(const Ring& R, const RPoly& base, const Int& e, const RPoly& mod);
RPoly poly_derivative(const Ring& R, const RPoly& a);
RElem poly_eval(const Ring& R, const RPoly& a, const RElem& x);
std::string poly_to_string(const Ring& R, const RPoly& a);

// Apply f to a square matrix.
MatR poly_eval_matrix(const RPoly& f, const MatR& M);

// Minimal polynomial of a square matrix over a field (monic).
RPoly matrix_min_poly(const MatR& M);

// Monic irreducible factors with multiplicities, over a finite field
// (distinct-degree + equal-degree splitting, deterministic seeding).
std::vector<std::pair<RPoly, int>> factor_poly_finite_field(const Ring& R, const RPoly& f);

// All roots of f lying in the finite field R.
std::vector<RElem> poly_roots_finite_field(const Ring& R, const RPoly& f);

// Over the rationals: splits off linear factors (rational root theorem) and
// returns them plus the remaining cofactor (possibly reducible, degree >= 2).
struct RationalSplit {
  std::vector<RElem> roots;  // with multiplicity
  RPoly cofactor;            // monic; constant 1 when fully split
};
RationalSplit rational_linear_split(const Ring& R, const RPoly& f);

}  // namespace hmf
