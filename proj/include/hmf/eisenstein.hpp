#pragma once

#include "hmf/character.hpp"
#include "hmf/qexp.hpp"

namespace hmf {

// Input data for an Eisenstein q-expansion.  Constant terms are supplied,
// not computed (they come from L-values); validate_constant_tuple gives the
// Hecke-compatibility check instead.
struct EisensteinSpec {
  IdealCharacter eta;
  IdealCharacter psi;
  int weight = 1;               // parallel weight, >= 1
  std::vector<RElem> constant;  // per narrow class, in `ring`
  Ring ring;
  long bound = 0;
  Rat scale = Rat(1);           // overall scalar on the nonconstant part
  bool validated = false;
};

// a_m = scale * sum_{a | m} eta(m/a) psi(a) N(a)^{weight-1}, constants copied.
AdelicSeries eisenstein_series(std::shared_ptr<const SeriesContext> ctx,
                               const EisensteinSpec& spec);

struct ConstantTupleWitness {
  long lambda;
  Ideal prime;
  std::string detail;
};

// Checks, for every prime of norm <= 25 coprime to both moduli, that the
// constant tuple satisfies the Hecke constant-term identity
//   a0[t_l * p] + eta(p) psi(p) N(p)^{k-1} a0[t_l * p^{-1}] = lam_p a0[t_l]
// with lam_p = eta(p) + psi(p) N(p)^{k-1}.
std::optional<ConstantTupleWitness> validate_constant_tuple(
    std::shared_ptr<const SeriesContext> ctx, const EisensteinSpec& spec);

}  // namespace hmf
