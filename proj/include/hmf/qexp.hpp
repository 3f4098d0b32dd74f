#pragma once

#include <memory>

#include "hmf/field_context.hpp"
#include "hmf/linalg.hpp"
#include "hmf/weight.hpp"

namespace hmf {

// One additive decomposition xi = xi1 + xi2 inside the geometric slot,
// precomputed as the pair of adelic keys plus the lattice points.
struct ConvTerm {
  Ideal b1, b2;
  FieldElement xi1, xi2;
};

struct ConvSupport {
  long lambda = 0;     // geometric class slot pairing with the target ideal
  FieldElement xi;     // totally positive generator of m * t_lambda
  std::vector<ConvTerm> terms;
};

// Field data plus the active narrow-class representatives {t_lambda} and the
// memoized convolution supports.  Series multiplication through any valid
// representative set yields identical adelic output; tests rely on that.
class SeriesContext {
 public:
  static std::shared_ptr<const SeriesContext> canonical(const QuadraticField& F);
  static std::shared_ptr<const SeriesContext> with_representatives(
      std::shared_ptr<const FieldContext> fc, std::vector<Ideal> reps);

  const FieldContext& fc() const { return *fc_; }
  std::shared_ptr<const FieldContext> fc_ptr() const { return fc_; }
  const QuadraticField& field() const { return fc_->field(); }
  long h_plus() const { return fc_->h_plus(); }
  const std::vector<Ideal>& representatives() const { return reps_; }

  // (lambda, xi) with m = xi * t_lambda^{-1}, xi totally positive.
  std::pair<long, FieldElement> target_data(const Ideal& m) const;
  const ConvSupport& conv_support(const Ideal& m) const;

  // Slot layout at bound B: h+ constant slots, then ideals by (norm, HNF).
  std::vector<Ideal> slot_ideals(long B) const;

 private:
  SeriesContext(std::shared_ptr<const FieldContext> fc, std::vector<Ideal> reps);

  std::shared_ptr<const FieldContext> fc_;
  std::vector<Ideal> reps_;
  mutable std::mutex mu_;
  mutable std::map<Ideal, ConvSupport> conv_cache_;
  mutable std::map<long, std::vector<Ideal>> slot_cache_;
};

// Truncated adelic power series: constant tuple over the narrow classes plus
// coefficients at the integral ideals of norm < bound (sparse storage).
class AdelicSeries {
 public:
  AdelicSeries() = default;
  AdelicSeries(std::shared_ptr<const SeriesContext> ctx, Ring ring,
               WeightVector weight, long bound);

  const std::shared_ptr<const SeriesContext>& ctx() const { return ctx_; }
  const Ring& ring() const { return ring_; }
  const WeightVector& weight() const { return weight_; }
  long bound() const { return bound_; }

  const std::vector<RElem>& constant_tuple() const { return constant_; }
  RElem& constant_slot(long lambda) { return constant_[lambda]; }
  const RElem& constant_slot(long lambda) const { return constant_[lambda]; }

  // coefficient at an integral ideal; OutOfPrecision beyond the bound
  RElem coeff(const Ideal& m) const;
  void set_coeff(const Ideal& m, RElem v);
  const std::map<Ideal, RElem>& coeffs() const { return coeffs_; }

  bool operator==(const AdelicSeries& o) const;

 private:
  std::shared_ptr<const SeriesContext> ctx_;
  Ring ring_;
  WeightVector weight_;
  long bound_ = 0;
  std::vector<RElem> constant_;
  std::map<Ideal, RElem> coeffs_;  // nonzero entries only
};

AdelicSeries zero_series(std::shared_ptr<const SeriesContext> ctx, const Ring& R,
                         WeightVector w, long B);
AdelicSeries one_series(std::shared_ptr<const SeriesContext> ctx, const Ring& R, long B);

AdelicSeries series_add(const AdelicSeries& f, const AdelicSeries& g);
AdelicSeries series_scale(const RElem& c, const AdelicSeries& f);

// Graded product via the geometric side: weights add, constants multiply
// slot-wise, nonconstant coefficients come from the box convolution.
AdelicSeries series_mul(const AdelicSeries& f, const AdelicSeries& g);

// Multiplicative inverse mod q^B (graded recursion on the norm); requires a
// unit constant tuple.
AdelicSeries invert(const AdelicSeries& f);

AdelicSeries truncate(const AdelicSeries& f, long B);

// Same coefficient data bound to the representative set {xi_lambda * t_lambda}.
AdelicSeries rep_change(const AdelicSeries& f, const std::vector<FieldElement>& xi);

// Geometric coefficient a_{lambda, xi} = a_{xi t_lambda^{-1}} * xi^{(k-k0)/2}.
RElem phi_coefficient(const AdelicSeries& f, long lambda, const FieldElement& xi);

// Inverse direction: adelic coefficient from a geometric value.
RElem psi_coefficient(const AdelicSeries& f, long lambda, const FieldElement& xi,
                      const RElem& geometric_value);

// True iff the constant tuple and every coefficient of norm <= Bg lies in
// the subring S (given as a ring descriptor object).
bool verify_subring_coeffs(const AdelicSeries& f, const Ring& S, long Bg);

// Coefficient-wise conversion (used to move a series into a run ring or a
// field extension); errors when an entry does not convert.
AdelicSeries convert_ring(const AdelicSeries& f, const Ring& R);
AdelicSeries series_mod_p(const AdelicSeries& f, const Int& p);

// slots: [h+ constants] ++ [coefficients at slot_ideals(B)]
std::vector<RElem> to_slots(const AdelicSeries& f);
AdelicSeries from_slots(std::shared_ptr<const SeriesContext> ctx, const Ring& R,
                        WeightVector w, long B, const std::vector<RElem>& slots);

}  // namespace hmf
