#pragma once

#include <map>
#include <memory>

#include "hmf/field_context.hpp"
#include "hmf/ring.hpp"

namespace hmf {

// Residue field O/P as a coefficient ring (F_p for degree 1, F_{p^2} for
// inert P), plus the image map for elements integral at P.
struct ResidueField {
  Ring Fq;
  Int p;
  int degree;
  RElem omega_image;  // image of omega

  RElem image(const QuadraticField& F, const FieldElement& x) const;
};

ResidueField residue_field(const QuadraticField& F, const PrimeIdeal& P);

// Quadratic residue symbol of x modulo the odd prime P (Euler criterion in
// the residue field); 0 for x in P.
int residue_symbol(const QuadraticField& F, const PrimeIdeal& P, const FieldElement& x);

// Character of the ideal group with modulus N: zero on ideals sharing a
// factor with N, multiplicative elsewhere.  Values are determined on primes;
// built-in kinds compute values on demand, table characters are finite.
// Cheap to copy (shared immutable state).
class IdealCharacter {
 public:
  enum class Kind { Trivial, Quadratic, Genus, Table, Product };

  const Ideal& modulus() const;
  const Ring& ring() const;
  Kind kind() const;
  long order() const;

  RElem eval(const Ideal& b) const;
  // Value converted into another coefficient ring (rational values only).
  RElem eval_in(const Ring& R, const Ideal& b) const;

  std::string describe() const;

  // --- constructors ---
  static IdealCharacter trivial(std::shared_ptr<const FieldContext> fc, Ideal modulus);
  // Residue-symbol character mod a prime N (odd residue field): the symbol
  // of a totally positive generator on narrowly trivial classes, extended by
  // declared unit values on one representative per nontrivial class.
  // Checks that every totally positive unit is a square mod N and that the
  // declared values are multiplicatively consistent; throws with a witness
  // otherwise.
  static IdealCharacter quadratic(std::shared_ptr<const FieldContext> fc,
                                  const PrimeIdeal& modulus, Ring ring,
                                  std::vector<RElem> nontrivial_class_values = {});
  // The narrow-class character lifted to modulus N (h+ = 2 only): +1 on
  // narrowly trivial prime ideals, -1 otherwise.
  static IdealCharacter genus(std::shared_ptr<const FieldContext> fc, Ideal modulus);
  static IdealCharacter table(std::shared_ptr<const FieldContext> fc, Ideal modulus,
                              Ring ring, std::map<Ideal, RElem> prime_values,
                              long generation_bound);
  // Pointwise product; modulus is the product of the moduli.
  static IdealCharacter product(const IdealCharacter& a, const IdealCharacter& b);

  struct Data;

 private:
  explicit IdealCharacter(std::shared_ptr<Data> d) : d_(std::move(d)) {}
  std::shared_ptr<Data> d_;
};

}  // namespace hmf
