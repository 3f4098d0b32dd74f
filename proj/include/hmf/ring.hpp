#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hmf/quad_field.hpp"
#include "hmf/weight.hpp"

namespace hmf {

// Element of a coefficient ring: dense polynomial coefficients in the ring
// generator, canonical (trailing zeros trimmed; finite-field coefficients
// reduced into [0, p)).  Degree-1 rings use a single coefficient.
struct RElem {
  std::vector<Rat> c;

  bool operator==(const RElem& o) const { return c == o.c; }
  bool operator!=(const RElem& o) const { return !(*this == o); }
  bool operator<(const RElem& o) const { return c < o.c; }  // structural
};

// Pluggable exact coefficient ring.  Immutable shared handle; element
// operations are methods so elements stay lightweight.
class Ring {
 public:
  enum class Kind {
    Rationals,          // q
    NumberField,        // nf:<minpoly coeffs low..high, monic>
    FiniteField,        // fp:p / fq:p,k[;mod=...]
    LocalizedIntegers,  // loc:0,1[;inv=...]  (Z with an inverted set)
    LocalizedOrder,     // loc:<deg>=2 minpoly: represented, no arithmetic
  };

  Ring();  // rationals

  static Ring rationals();
  static Ring number_field(const std::vector<Rat>& monic_minpoly);
  static Ring finite_field(const Int& p, unsigned deg);
  static Ring finite_field(const Int& p, const std::vector<Int>& monic_minpoly);
  static Ring localized_integers(const std::vector<Int>& inverted);
  static Ring from_descriptor(const std::string& desc);

  Kind kind() const;
  Int characteristic() const;
  unsigned degree() const;
  bool is_field() const;
  bool is_pid() const;  // declared capability
  std::string descriptor() const;
  const std::vector<Int>& inverted_primes() const;  // localized kinds
  const std::vector<Rat>& minpoly() const;          // monic, low..high

  bool same_ring(const Ring& o) const;

  // --- element constructors ---
  RElem zero() const;
  RElem one() const;
  RElem from_int(long v) const;
  RElem from_rat(const Rat& q) const;        // errors if q is not in the ring
  RElem from_coeffs(std::vector<Rat> c) const;
  RElem generator() const;                   // degree >= 2 rings

  // --- arithmetic ---
  RElem add(const RElem& a, const RElem& b) const;
  RElem sub(const RElem& a, const RElem& b) const;
  RElem neg(const RElem& a) const;
  RElem mul(const RElem& a, const RElem& b) const;
  RElem inv(const RElem& a) const;           // errors if not a unit
  RElem div(const RElem& a, const RElem& b) const;
  RElem pow(const RElem& a, long e) const;

  bool is_zero(const RElem& a) const { return a.c.empty(); }
  bool is_one(const RElem& a) const;
  bool is_unit(const RElem& a) const;

  // rational content of a degree-0 element
  std::optional<Rat> as_rational(const RElem& a) const;

  std::string to_string(const RElem& a) const;

  // Image of omega under the designated embedding, when this ring contains
  // the quadratic field (the ring generator satisfies omega's minimal
  // polynomial).  Second embedding image is trace(omega) - image.
  std::optional<RElem> omega_image(const QuadraticField& F) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit Ring(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Reduction map to F_p.  Errors (InvalidPrime) when p is in the inverted set
// or divides a denominator.
Ring reduction_target(const Ring& R, const Int& p);
RElem reduce_mod(const Ring& R, const RElem& a, const Int& p);

// Ring homomorphism determined by the image of the source generator; used
// for base extension during eigenvalue splitting.
struct RingHom {
  Ring src, dst;
  RElem gen_image;  // image of src's generator in dst (ignored for degree 1)

  RElem apply(const RElem& a) const;
};

// Identity-like inclusion F_p -> F_{p^k}, Q -> number field, R -> R.
RingHom inclusion_hom(const Ring& src, const Ring& dst);

// Subring membership for verify_subring_coeffs: S given as a ring
// descriptor ("z" / "loc:...;inv=..." / "q").
bool element_in_subring(const Ring& R, const RElem& a, const Ring& S);

// --- ring/weight compatibility -------------------------------------------

struct RingWeightViolation {
  int condition;  // 1 or 2
  std::string detail;
};

struct WeightSetDesc {
  bool parallel_only = true;
  std::vector<WeightVector> sample_weights;  // inspected when not parallel
};

// Gate for the supported (ring, weight-set) combinations: parallel weights
// work over any ring; non-parallel paritious weights need characteristic 0
// and a designated image of the field inside the ring.
std::optional<RingWeightViolation> validate_ring_weight_compat(
    const Ring& R, const WeightSetDesc& W, const QuadraticField& F);

}  // namespace hmf
