#pragma once

#include <string>

#include "hmf/rational.hpp"

namespace hmf {

// Real quadratic field Q(sqrt(d)), d squarefree > 1.  The maximal order is
// Z[omega] with omega = sqrt(d) for d = 2,3 mod 4 and omega = (1+sqrt(d))/2
// for d = 1 mod 4.  Embedding 1 sends sqrt(d) to the positive root.
struct QuadraticField {
  Int d;
  bool omega_is_half;  // true iff d = 1 mod 4
  Int discriminant;    // d or 4d

  static QuadraticField create(const Int& d);
  static QuadraticField create(long d) { return create(Int(d)); }

  // omega satisfies x^2 - t x + n = 0.
  Int omega_trace() const { return omega_is_half ? Int(1) : Int(0); }
  Int omega_norm() const { return omega_is_half ? Int((1 - d) / 4) : Int(-d); }
  std::string omega_string() const { return omega_is_half ? "(1+sqrt(d))/2" : "sqrt(d)"; }

  bool operator==(const QuadraticField& o) const { return d == o.d; }
};

// x + y*omega with exact rational coordinates.
struct FieldElement {
  Rat x, y;

  FieldElement() : x(0), y(0) {}
  FieldElement(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}
  static FieldElement from_int(long v) { return FieldElement(Rat(v), Rat(0)); }
  static FieldElement from_rat(const Rat& v) { return FieldElement(v, Rat(0)); }

  bool is_zero() const { return x == 0 && y == 0; }
  bool is_rational() const { return y == 0; }
  bool operator==(const FieldElement& o) const { return x == o.x && y == o.y; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  // Structural order, used for deterministic containers only.
  bool operator<(const FieldElement& o) const {
    if (x != o.x) return x < o.x;
    return y < o.y;
  }

  FieldElement operator+(const FieldElement& o) const { return {x + o.x, y + o.y}; }
  FieldElement operator-(const FieldElement& o) const { return {x - o.x, y - o.y}; }
  FieldElement operator-() const { return {-x, -y}; }
  FieldElement scaled(const Rat& q) const { return {x * q, y * q}; }
};

FieldElement mul(const QuadraticField& F, const FieldElement& a, const FieldElement& b);
FieldElement inverse(const QuadraticField& F, const FieldElement& a);
FieldElement conjugate(const QuadraticField& F, const FieldElement& a);
FieldElement pow(const QuadraticField& F, const FieldElement& a, long e);

Rat norm(const QuadraticField& F, const FieldElement& a);
Rat trace(const QuadraticField& F, const FieldElement& a);

// Exact sign of the i-th real embedding (i = 1 or 2), by integer case
// analysis; no floating point anywhere.
int embedding_sign(const QuadraticField& F, const FieldElement& a, int i);
bool is_totally_positive(const QuadraticField& F, const FieldElement& a);

// A rational upper bound on |a^(i)|, valid for both embeddings.
Rat embedding_abs_bound(const QuadraticField& F, const FieldElement& a);

std::string element_to_string(const FieldElement& a);  // e.g. "2-w", "1/2+3w"

struct UnitData {
  FieldElement fundamental_unit;                  // > 1 in embedding 1
  int norm_of_unit;                               // +1 or -1
  FieldElement totally_positive_fundamental_unit; // eps if eps >> 0, else eps^2
};

// Fundamental unit of the maximal order, via the continued fraction of omega.
UnitData fundamental_unit(const QuadraticField& F);

}  // namespace hmf
