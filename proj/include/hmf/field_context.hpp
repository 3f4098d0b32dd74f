#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hmf/ideal.hpp"

namespace hmf {

struct NarrowClassData {
  std::vector<Ideal> representatives;  // [0] = O_K, then smallest-norm primes
  long h_plus = 1;
  // index multiplication table: mul_table[i][j] = class index of t_i * t_j
  std::vector<std::vector<long>> mul_table;
  std::vector<long> inverse;  // inverse[i] = index of the class inverse to i
};

// Narrow class number of the discriminant, counted as rho-cycles of reduced
// indefinite binary quadratic forms.  Used both as the h+ source and as an
// independent oracle in tests.
long narrow_class_number_by_forms(const Int& discriminant);

// Per-field immutable data plus memo caches; shared by all series contexts
// over the same field.  Caches are guarded, values are immutable.
class FieldContext {
 public:
  explicit FieldContext(const QuadraticField& F);

  const QuadraticField& field() const { return F_; }
  const UnitData& units() const { return units_; }
  const NarrowClassData& narrow_class() const { return narrow_; }
  long h_plus() const { return narrow_.h_plus; }

  // All integral ideals of norm < B, ascending by (norm, a, b).
  std::vector<Ideal> ideals_up_to(long B) const;

  // Divisors of an integral ideal, ascending by (norm, a, b).
  std::vector<Ideal> divisors(const Ideal& A) const;

  IdealFactorization factorization(const Ideal& A) const;

  // Totally positive generator with minimal (trace, x, y), or nullopt when
  // the ideal is not narrowly principal.
  std::optional<FieldElement> totally_positive_generator(const Ideal& A) const;

  // Any generator (wide sense), smallest by (|y|, |x|, sign preferences);
  // nullopt when not principal.  Used for report labels.
  std::optional<FieldElement> generator(const Ideal& A) const;

  // Narrow class index of a (possibly fractional) ideal.
  long class_of(const Ideal& A) const;

  // Lattice points v of t with 0 < v^(i) < corner^(i) for both embeddings
  // (open box), deterministic order.
  std::vector<FieldElement> points_in_box(const Ideal& t, const FieldElement& corner) const;

  // Lattice points v != 0 of t with |v^(i)| <= U for both embeddings.
  std::vector<FieldElement> points_in_symmetric_box(const Ideal& t, const Rat& U) const;

  static std::shared_ptr<const FieldContext> get(const QuadraticField& F);

 private:
  QuadraticField F_;
  UnitData units_;
  NarrowClassData narrow_;

  mutable std::mutex mu_;
  mutable std::map<Ideal, std::optional<FieldElement>> tpgen_cache_;
  mutable std::map<Ideal, IdealFactorization> factor_cache_;
  mutable std::map<Ideal, long> class_cache_;

  std::optional<FieldElement> tpgen_uncached(const Ideal& A) const;
  void build_narrow_class_data();
};

}  // namespace hmf
