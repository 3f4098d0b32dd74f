#include "hmf/hecke.hpp"

#include "hmf/errors.hpp"

namespace hmf {

AdelicSeries hecke_apply(const HeckeContext& hc, const Ideal& a, const AdelicSeries& f) {
  const QuadraticField& F = hc.ctx->field();
  const Ring& R = f.ring();
  Rat na = ideal_norm(a);
  if (na >= f.bound())
    fail(ErrorKind::OutOfPrecision,
         "T_" + a.label() + " needs operator norm below the bound " +
             std::to_string(f.bound()));
  long Bout = rat_floor(Rat(f.bound()) / na).get_si();
  AdelicSeries out(f.ctx(), R, f.weight(), Bout);

  auto weighted_char = [&](const Ideal& b) -> RElem {
    RElem v = hc.eps.eval_in(R, b);
    if (R.is_zero(v) || hc.k0 == 1) return v;
    return R.mul(v, R.from_rat(pow_rat(ideal_norm(b), hc.k0 - 1)));
  };

  // constant tuple: sum over divisors b of a
  const auto& fc = hc.ctx->fc();
  for (long l = 0; l < hc.ctx->h_plus(); ++l) {
    const Ideal& t = hc.ctx->representatives()[l];
    RElem acc = R.zero();
    for (const Ideal& b : fc.divisors(a)) {
      RElem v = weighted_char(b);
      if (R.is_zero(v)) continue;
      Ideal arg = ideal_div(F, ideal_mul(F, t, a), ideal_mul(F, b, b));
      acc = R.add(acc, R.mul(v, f.constant_slot(fc.class_of(arg))));
    }
    out.constant_slot(l) = acc;
  }

  for (const Ideal& m : hc.ctx->slot_ideals(Bout)) {
    Ideal g = ideal_sum(F, m, a);  // common divisors of m and a divide m + a
    RElem acc = R.zero();
    for (const Ideal& b : fc.divisors(g)) {
      RElem v = weighted_char(b);
      if (R.is_zero(v)) continue;
      Ideal arg = ideal_div(F, ideal_mul(F, m, a), ideal_mul(F, b, b));
      acc = R.add(acc, R.mul(v, f.coeff(arg)));
    }
    out.set_coeff(m, std::move(acc));
  }
  return out;
}

MatR hecke_matrix(const HeckeContext& hc, const Ideal& a,
                  const std::vector<AdelicSeries>& basis) {
  if (basis.empty()) return MatR(Ring::rationals(), 0, 0);
  const Ring& R = basis[0].ring();
  long B = basis[0].bound();
  for (const auto& f : basis)
    if (!f.ring().same_ring(R) || f.bound() != B || f.weight() != basis[0].weight())
      fail(ErrorKind::Validation, "basis series must share ring, bound and weight");
  long Bout = rat_floor(Rat(B) / ideal_norm(a)).get_si();
  size_t rows = static_cast<size_t>(hc.ctx->h_plus()) +
                hc.ctx->slot_ideals(Bout).size();
  MatR M(R, rows, basis.size());
  for (size_t j = 0; j < basis.size(); ++j) {
    auto slots = to_slots(hecke_apply(hc, a, basis[j]));
    for (size_t i = 0; i < rows; ++i) M.at(i, j) = slots[i];
  }
  return M;
}

bool hecke_commutes(const HeckeContext& hc, const Ideal& a, const Ideal& b,
                    const AdelicSeries& f) {
  const QuadraticField& F = hc.ctx->field();
  AdelicSeries ab = hecke_apply(hc, b, hecke_apply(hc, a, f));
  AdelicSeries ba = hecke_apply(hc, a, hecke_apply(hc, b, f));
  long Bc = std::min(ab.bound(), ba.bound());
  if (!(truncate(ab, Bc) == truncate(ba, Bc))) return false;
  if (ideals_coprime(F, a, b)) {
    AdelicSeries prod = hecke_apply(hc, ideal_mul(F, a, b), f);
    long Bp = std::min(Bc, prod.bound());
    if (!(truncate(prod, Bp) == truncate(ab, Bp))) return false;
  }
  return true;
}

}  // namespace hmf
