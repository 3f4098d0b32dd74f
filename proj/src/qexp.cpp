#include "hmf/qexp.hpp"

#include <algorithm>

#include "hmf/errors.hpp"

namespace hmf {

SeriesContext::SeriesContext(std::shared_ptr<const FieldContext> fc,
                             std::vector<Ideal> reps)
    : fc_(std::move(fc)), reps_(std::move(reps)) {
  if (static_cast<long>(reps_.size()) != fc_->h_plus())
    fail(ErrorKind::Validation, "need one representative per narrow class");
  for (long i = 0; i < fc_->h_plus(); ++i) {
    if (!reps_[i].is_integral)
      fail(ErrorKind::Validation, "representatives must be integral ideals");
    if (fc_->class_of(reps_[i]) != i)
      fail(ErrorKind::Validation,
           "representative " + reps_[i].label() + " is not in class " +
               std::to_string(i));
  }
}

std::shared_ptr<const SeriesContext> SeriesContext::canonical(const QuadraticField& F) {
  auto fc = FieldContext::get(F);
  return std::shared_ptr<const SeriesContext>(
      new SeriesContext(fc, fc->narrow_class().representatives));
}

std::shared_ptr<const SeriesContext> SeriesContext::with_representatives(
    std::shared_ptr<const FieldContext> fc, std::vector<Ideal> reps) {
  return std::shared_ptr<const SeriesContext>(
      new SeriesContext(std::move(fc), std::move(reps)));
}

std::pair<long, FieldElement> SeriesContext::target_data(const Ideal& m) const {
  long mu = fc_->class_of(m);
  long lambda = fc_->narrow_class().inverse[mu];
  Ideal prod = ideal_mul(fc_->field(), m, reps_[lambda]);
  auto xi = fc_->totally_positive_generator(prod);
  if (!xi) fail(ErrorKind::Internal, "target ideal has no totally positive generator");
  return {lambda, *xi};
}

const ConvSupport& SeriesContext::conv_support(const Ideal& m) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = conv_cache_.find(m);
    if (it != conv_cache_.end()) return it->second;
  }
  const QuadraticField& F = fc_->field();
  auto [lambda, xi] = target_data(m);
  ConvSupport cs;
  cs.lambda = lambda;
  cs.xi = xi;
  Ideal t_inv = ideal_inverse(F, reps_[lambda]);
  for (const FieldElement& xi1 : fc_->points_in_box(reps_[lambda], xi)) {
    ConvTerm term;
    term.xi1 = xi1;
    term.xi2 = xi - xi1;
    term.b1 = ideal_mul(F, principal_ideal(F, term.xi1), t_inv);
    term.b2 = ideal_mul(F, principal_ideal(F, term.xi2), t_inv);
    cs.terms.push_back(std::move(term));
  }
  std::lock_guard<std::mutex> lock(mu_);
  return conv_cache_.emplace(m, std::move(cs)).first->second;
}

std::vector<Ideal> SeriesContext::slot_ideals(long B) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = slot_cache_.find(B);
    if (it != slot_cache_.end()) return it->second;
  }
  auto v = fc_->ideals_up_to(B);
  std::lock_guard<std::mutex> lock(mu_);
  slot_cache_[B] = v;
  return v;
}

// --- series -----------------------------------------------------------------

AdelicSeries::AdelicSeries(std::shared_ptr<const SeriesContext> ctx, Ring ring,
                           WeightVector weight, long bound)
    : ctx_(std::move(ctx)), ring_(std::move(ring)), weight_(weight), bound_(bound) {
  if (bound_ < 1) fail(ErrorKind::Validation, "series bound must be >= 1");
  constant_.assign(ctx_->h_plus(), ring_.zero());
}

RElem AdelicSeries::coeff(const Ideal& m) const {
  if (!m.is_integral) fail(ErrorKind::Validation, "coefficient keys are integral ideals");
  if (ideal_norm(m) >= bound_)
    fail(ErrorKind::OutOfPrecision,
         "coefficient at " + m.label() + " is beyond the truncation bound " +
             std::to_string(bound_));
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? ring_.zero() : it->second;
}

void AdelicSeries::set_coeff(const Ideal& m, RElem v) {
  if (!m.is_integral) fail(ErrorKind::Validation, "coefficient keys are integral ideals");
  if (ideal_norm(m) >= bound_)
    fail(ErrorKind::OutOfPrecision,
         "coefficient at " + m.label() + " is beyond the truncation bound " +
             std::to_string(bound_));
  if (ring_.is_zero(v))
    coeffs_.erase(m);
  else
    coeffs_[m] = std::move(v);
}

bool AdelicSeries::operator==(const AdelicSeries& o) const {
  return bound_ == o.bound_ && weight_ == o.weight_ && ring_.same_ring(o.ring_) &&
         constant_ == o.constant_ && coeffs_ == o.coeffs_;
}

AdelicSeries zero_series(std::shared_ptr<const SeriesContext> ctx, const Ring& R,
                         WeightVector w, long B) {
  return AdelicSeries(std::move(ctx), R, w, B);
}

AdelicSeries one_series(std::shared_ptr<const SeriesContext> ctx, const Ring& R, long B) {
  AdelicSeries s(std::move(ctx), R, WeightVector::parallel(0), B);
  for (long l = 0; l < s.ctx()->h_plus(); ++l) s.constant_slot(l) = R.one();
  return s;
}

namespace {

void require_compatible(const AdelicSeries& f, const AdelicSeries& g) {
  if (f.bound() != g.bound())
    fail(ErrorKind::OutOfPrecision, "series bounds differ: " +
                                        std::to_string(f.bound()) + " vs " +
                                        std::to_string(g.bound()));
  if (!f.ring().same_ring(g.ring()))
    fail(ErrorKind::RingMismatch, "series rings differ: " + f.ring().descriptor() +
                                      " vs " + g.ring().descriptor());
  if (f.ctx()->representatives() != g.ctx()->representatives() ||
      !(f.ctx()->field() == g.ctx()->field()))
    fail(ErrorKind::Validation, "series use different contexts");
}

// Ring image of the i-th embedding of a field element; needs the designated
// omega image (guaranteed by the weight gate before any non-parallel use).
RElem ring_embedding(const Ring& R, const QuadraticField& F, const FieldElement& x,
                     int emb) {
  auto w = R.omega_image(F);
  if (!w)
    fail(ErrorKind::Unsupported,
         "ring " + R.descriptor() + " has no designated image of the field");
  RElem wi = (emb == 1) ? *w : R.sub(R.from_rat(Rat(F.omega_trace())), *w);
  return R.add(R.from_rat(x.x), R.mul(R.from_rat(x.y), wi));
}

// xi^{(k - k0)/2}: the factor taking an adelic coefficient to its geometric
// counterpart.  Trivial for parallel weights.
RElem phi_factor(const Ring& R, const QuadraticField& F, const FieldElement& xi,
                 const WeightVector& w) {
  if (w.is_parallel()) return R.one();
  if (!w.is_paritious())
    fail(ErrorKind::Unsupported, "non-paritious weight " + w.to_string());
  if (R.characteristic() > 0)
    fail(ErrorKind::Unsupported,
         "non-parallel weights need characteristic 0 (condition on xi^((k0-k)/2))");
  RElem out = R.one();
  for (int i = 0; i < 2; ++i) {
    long e = (w.k[i] - w.k0()) / 2;
    if (e == 0) continue;
    out = R.mul(out, R.pow(ring_embedding(R, F, xi, i + 1), e));
  }
  return out;
}

}  // namespace

RElem phi_coefficient(const AdelicSeries& f, long lambda, const FieldElement& xi) {
  const auto& ctx = *f.ctx();
  const QuadraticField& F = ctx.field();
  const Ideal& t = ctx.representatives()[lambda];
  if (!ideal_contains(F, t, xi) || !is_totally_positive(F, xi))
    fail(ErrorKind::Validation,
         "phi coefficient needs a totally positive element of the representative");
  Ideal b = ideal_mul(F, principal_ideal(F, xi), ideal_inverse(F, t));
  return f.ring().mul(f.coeff(b), phi_factor(f.ring(), F, xi, f.weight()));
}

RElem psi_coefficient(const AdelicSeries& f, long lambda, const FieldElement& xi,
                      const RElem& geometric_value) {
  (void)lambda;
  const QuadraticField& F = f.ctx()->field();
  RElem fac = phi_factor(f.ring(), F, xi, f.weight());
  return f.ring().div(geometric_value, fac);
}

AdelicSeries series_add(const AdelicSeries& f, const AdelicSeries& g) {
  require_compatible(f, g);
  if (f.weight() != g.weight())
    fail(ErrorKind::Validation, "cannot add series of different weights");
  AdelicSeries out = f;
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    out.constant_slot(l) = f.ring().add(f.constant_slot(l), g.constant_slot(l));
  for (const auto& [m, v] : g.coeffs())
    out.set_coeff(m, f.ring().add(out.coeff(m), v));
  return out;
}

AdelicSeries series_scale(const RElem& c, const AdelicSeries& f) {
  AdelicSeries out(f.ctx(), f.ring(), f.weight(), f.bound());
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    out.constant_slot(l) = f.ring().mul(c, f.constant_slot(l));
  for (const auto& [m, v] : f.coeffs()) out.set_coeff(m, f.ring().mul(c, v));
  return out;
}

AdelicSeries series_mul(const AdelicSeries& f, const AdelicSeries& g) {
  require_compatible(f, g);
  const Ring& R = f.ring();
  const auto& ctx = *f.ctx();
  const QuadraticField& F = ctx.field();
  WeightVector wsum = f.weight() + g.weight();
  AdelicSeries out(f.ctx(), R, wsum, f.bound());

  for (long l = 0; l < ctx.h_plus(); ++l)
    out.constant_slot(l) = R.mul(f.constant_slot(l), g.constant_slot(l));

  bool parallel = f.weight().is_parallel() && g.weight().is_parallel();
  for (const Ideal& m : ctx.slot_ideals(f.bound())) {
    const ConvSupport& cs = ctx.conv_support(m);
    RElem acc;
    if (parallel) {
      acc = R.add(R.mul(f.constant_slot(cs.lambda), g.coeff(m)),
                  R.mul(f.coeff(m), g.constant_slot(cs.lambda)));
      for (const ConvTerm& term : cs.terms)
        acc = R.add(acc, R.mul(f.coeff(term.b1), g.coeff(term.b2)));
    } else {
      // geometric product with the phi/psi weight factors
      RElem geo = R.add(
          R.mul(f.constant_slot(cs.lambda), phi_coefficient(g, cs.lambda, cs.xi)),
          R.mul(phi_coefficient(f, cs.lambda, cs.xi), g.constant_slot(cs.lambda)));
      for (const ConvTerm& term : cs.terms) {
        RElem a = R.mul(f.coeff(term.b1), phi_factor(R, F, term.xi1, f.weight()));
        RElem b = R.mul(g.coeff(term.b2), phi_factor(R, F, term.xi2, g.weight()));
        geo = R.add(geo, R.mul(a, b));
      }
      acc = R.div(geo, phi_factor(R, F, cs.xi, wsum));
    }
    out.set_coeff(m, std::move(acc));
  }
  return out;
}

AdelicSeries invert(const AdelicSeries& f) {
  const Ring& R = f.ring();
  const auto& ctx = *f.ctx();
  const QuadraticField& F = ctx.field();
  for (long l = 0; l < ctx.h_plus(); ++l)
    if (!R.is_unit(f.constant_slot(l)))
      fail(ErrorKind::NotInvertible,
           "constant tuple is not a unit at class " + std::to_string(l));

  WeightVector wh = -f.weight();
  AdelicSeries h(f.ctx(), R, wh, f.bound());
  std::vector<RElem> cinv(ctx.h_plus());
  for (long l = 0; l < ctx.h_plus(); ++l) {
    cinv[l] = R.inv(f.constant_slot(l));
    h.constant_slot(l) = cinv[l];
  }
  bool parallel = f.weight().is_parallel();
  // ascending norm: every interior term only involves smaller norms
  for (const Ideal& m : ctx.slot_ideals(f.bound())) {
    const ConvSupport& cs = ctx.conv_support(m);
    if (parallel) {
      RElem acc = R.mul(f.coeff(m), h.constant_slot(cs.lambda));
      for (const ConvTerm& term : cs.terms)
        acc = R.add(acc, R.mul(f.coeff(term.b1), h.coeff(term.b2)));
      h.set_coeff(m, R.neg(R.mul(cinv[cs.lambda], acc)));
    } else {
      RElem geo = R.mul(phi_coefficient(f, cs.lambda, cs.xi), h.constant_slot(cs.lambda));
      for (const ConvTerm& term : cs.terms) {
        RElem a = R.mul(f.coeff(term.b1), phi_factor(R, F, term.xi1, f.weight()));
        RElem b = R.mul(h.coeff(term.b2), phi_factor(R, F, term.xi2, wh));
        geo = R.add(geo, R.mul(a, b));
      }
      // 0 = f0 * phi_h(xi) + geo  =>  phi_h(xi) = -geo / f0
      RElem phi_h = R.neg(R.mul(cinv[cs.lambda], geo));
      h.set_coeff(m, R.div(phi_h, phi_factor(R, F, cs.xi, wh)));
    }
  }
  return h;
}

AdelicSeries truncate(const AdelicSeries& f, long B) {
  if (B > f.bound())
    fail(ErrorKind::OutOfPrecision, "cannot truncate " + std::to_string(f.bound()) +
                                        " up to " + std::to_string(B));
  AdelicSeries out(f.ctx(), f.ring(), f.weight(), B);
  for (long l = 0; l < f.ctx()->h_plus(); ++l) out.constant_slot(l) = f.constant_slot(l);
  for (const auto& [m, v] : f.coeffs())
    if (ideal_norm(m) < B) out.set_coeff(m, v);
  return out;
}

AdelicSeries rep_change(const AdelicSeries& f, const std::vector<FieldElement>& xi) {
  const auto& ctx = *f.ctx();
  const QuadraticField& F = ctx.field();
  if (static_cast<long>(xi.size()) != ctx.h_plus())
    fail(ErrorKind::Validation, "need one scalar per narrow class");
  std::vector<Ideal> new_reps;
  for (long l = 0; l < ctx.h_plus(); ++l) {
    if (!is_totally_positive(F, xi[l]))
      fail(ErrorKind::Validation,
           "invalid representative change: " + element_to_string(xi[l]) +
               " is not totally positive");
    Ideal t = ideal_mul(F, principal_ideal(F, xi[l]), ctx.representatives()[l]);
    if (!t.is_integral)
      fail(ErrorKind::Validation,
           "invalid representative change: " + t.label() + " is not integral");
    new_reps.push_back(t);
  }
  auto new_ctx = SeriesContext::with_representatives(ctx.fc_ptr(), std::move(new_reps));
  AdelicSeries out(new_ctx, f.ring(), f.weight(), f.bound());
  for (long l = 0; l < ctx.h_plus(); ++l) out.constant_slot(l) = f.constant_slot(l);
  for (const auto& [m, v] : f.coeffs()) out.set_coeff(m, v);
  return out;
}

bool verify_subring_coeffs(const AdelicSeries& f, const Ring& S, long Bg) {
  if (Bg >= f.bound())
    fail(ErrorKind::OutOfPrecision,
         "generation bound " + std::to_string(Bg) + " exceeds the stored precision");
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    if (!element_in_subring(f.ring(), f.constant_slot(l), S)) return false;
  for (const auto& [m, v] : f.coeffs()) {
    if (ideal_norm(m) > Bg) continue;
    if (!element_in_subring(f.ring(), v, S)) return false;
  }
  return true;
}

AdelicSeries convert_ring(const AdelicSeries& f, const Ring& R) {
  AdelicSeries out(f.ctx(), R, f.weight(), f.bound());
  auto conv = [&](const RElem& v) { return R.from_coeffs(v.c); };
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    out.constant_slot(l) = conv(f.constant_slot(l));
  for (const auto& [m, v] : f.coeffs()) out.set_coeff(m, conv(v));
  return out;
}

AdelicSeries series_mod_p(const AdelicSeries& f, const Int& p) {
  Ring T = reduction_target(f.ring(), p);
  AdelicSeries out(f.ctx(), T, f.weight(), f.bound());
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    out.constant_slot(l) = reduce_mod(f.ring(), f.constant_slot(l), p);
  for (const auto& [m, v] : f.coeffs()) out.set_coeff(m, reduce_mod(f.ring(), v, p));
  return out;
}

std::vector<RElem> to_slots(const AdelicSeries& f) {
  std::vector<RElem> out = f.constant_tuple();
  for (const Ideal& m : f.ctx()->slot_ideals(f.bound())) out.push_back(f.coeff(m));
  return out;
}

AdelicSeries from_slots(std::shared_ptr<const SeriesContext> ctx, const Ring& R,
                        WeightVector w, long B, const std::vector<RElem>& slots) {
  AdelicSeries out(ctx, R, w, B);
  auto ideals = ctx->slot_ideals(B);
  if (slots.size() != static_cast<size_t>(ctx->h_plus()) + ideals.size())
    fail(ErrorKind::Validation, "slot vector has the wrong length");
  for (long l = 0; l < ctx->h_plus(); ++l) out.constant_slot(l) = slots[l];
  for (size_t i = 0; i < ideals.size(); ++i)
    out.set_coeff(ideals[i], slots[ctx->h_plus() + i]);
  return out;
}

}  // namespace hmf
