#pragma once

#include "hmf/character.hpp"
#include "hmf/qexp.hpp"

namespace hmf {

// Level, nebentypus and weight data for the Hecke action on a space of
// truncated series.
struct HeckeContext {
  std::shared_ptr<const SeriesContext> ctx;
  Ideal level;
  IdealCharacter eps;  // character of the space
  int k0 = 1;          // max weight component of the space

  HeckeContext(std::shared_ptr<const SeriesContext> c, Ideal n, IdealCharacter e, int k)
      : ctx(std::move(c)), level(std::move(n)), eps(std::move(e)), k0(k) {}
};

// T_a applied to a truncated series; the output is truncated at
// floor(B / N(a)), the largest sound bound.
AdelicSeries hecke_apply(const HeckeContext& hc, const Ideal& a, const AdelicSeries& f);

// Matrix of T_a on a list of series, columns in the slot coordinates of the
// output bound floor(B / N(a)).
MatR hecke_matrix(const HeckeContext& hc, const Ideal& a,
                  const std::vector<AdelicSeries>& basis);

// T_a T_b f == T_b T_a f on the common truncation; for coprime a, b also
// equality with T_{ab} f.
bool hecke_commutes(const HeckeContext& hc, const Ideal& a, const Ideal& b,
                    const AdelicSeries& f);

}  // namespace hmf
