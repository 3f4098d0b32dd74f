#include "hmf/eisenstein.hpp"

#include "hmf/errors.hpp"

namespace hmf {

AdelicSeries eisenstein_series(std::shared_ptr<const SeriesContext> ctx,
                               const EisensteinSpec& spec) {
  if (spec.weight < 1)
    fail(ErrorKind::Validation, "Eisenstein weight must be parallel and >= 1");
  if (static_cast<long>(spec.constant.size()) != ctx->h_plus())
    fail(ErrorKind::Validation, "constant tuple needs one slot per narrow class");
  const Ring& R = spec.ring;
  AdelicSeries out(ctx, R, WeightVector::parallel(spec.weight), spec.bound);
  for (long l = 0; l < ctx->h_plus(); ++l) out.constant_slot(l) = spec.constant[l];

  const QuadraticField& F = ctx->field();
  RElem sc = R.from_rat(spec.scale);
  for (const Ideal& m : ctx->slot_ideals(spec.bound)) {
    RElem acc = R.zero();
    for (const Ideal& a : ctx->fc().divisors(m)) {
      RElem term = spec.eta.eval_in(R, ideal_div(F, m, a));
      if (R.is_zero(term)) continue;
      term = R.mul(term, spec.psi.eval_in(R, a));
      if (R.is_zero(term)) continue;
      if (spec.weight > 1) {
        Rat na = ideal_norm(a);
        term = R.mul(term, R.from_rat(pow_rat(na, spec.weight - 1)));
      }
      acc = R.add(acc, term);
    }
    out.set_coeff(m, R.mul(sc, acc));
  }
  return out;
}

std::optional<ConstantTupleWitness> validate_constant_tuple(
    std::shared_ptr<const SeriesContext> ctx, const EisensteinSpec& spec) {
  const QuadraticField& F = ctx->field();
  const Ring& R = spec.ring;
  const auto& fc = ctx->fc();
  for (const Int& p : primes_up_to(25)) {
    for (const PrimeIdeal& P : primes_above(F, p)) {
      if (ideal_norm(P.ideal) > 25) continue;
      if (!ideals_coprime(F, P.ideal, spec.eta.modulus())) continue;
      if (!ideals_coprime(F, P.ideal, spec.psi.modulus())) continue;
      RElem npk = R.from_rat(pow_rat(ideal_norm(P.ideal), spec.weight - 1));
      RElem ep = spec.eta.eval_in(R, P.ideal);
      RElem pp = R.mul(spec.psi.eval_in(R, P.ideal), npk);
      RElem lam = R.add(ep, pp);
      for (long l = 0; l < ctx->h_plus(); ++l) {
        const Ideal& t = ctx->representatives()[l];
        long up = fc.class_of(ideal_mul(F, t, P.ideal));
        long dn = fc.class_of(ideal_div(F, t, P.ideal));
        RElem lhs = R.add(spec.constant[up],
                          R.mul(R.mul(ep, pp), spec.constant[dn]));
        RElem rhs = R.mul(lam, spec.constant[l]);
        if (!(lhs == rhs)) {
          ConstantTupleWitness w;
          w.lambda = l;
          w.prime = P.ideal;
          w.detail = "constant-term identity fails at class " + std::to_string(l) +
                     ", prime " + P.ideal.label();
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace hmf
