#pragma once

#include <set>

#include "hmf/eisenstein.hpp"
#include "hmf/hecke.hpp"
#include "hmf/poly.hpp"

namespace hmf {

// Submodule of truncated series as a coefficient matrix: rows are the slot
// coordinates (h+ constants, then ideals ascending by norm), columns an
// independent (over a PID: saturated) generating set.
struct CandidateSpace {
  std::shared_ptr<const SeriesContext> ctx;
  Ring ring;
  WeightVector weight;
  long bound = 0;
  MatR basis;
  std::vector<std::string> provenance;
  PrimeAccumulator pivots;

  size_t dim() const { return basis.cols(); }
  AdelicSeries column_series(size_t j) const;
};

// E^{-1} * span(basis): the candidate space of weight k = (k+k') - k'.
CandidateSpace candidate_space(const AdelicSeries& E,
                               const std::vector<AdelicSeries>& basis, long B);

// All nontrivial ideals m with N(m)^2 <= B, ascending by (norm, HNF).
std::vector<Ideal> default_schedule(const SeriesContext& ctx, long B);

struct CutRecord {
  Ideal ideal;
  size_t rank_before = 0, rank_after = 0;
};

// Algorithm: repeatedly replace V by the saturated preimage of its
// truncation under T_m, restarting the sweep after every cut.
CandidateSpace largest_stable_submodule(const CandidateSpace& V0, const HeckeContext& hc,
                                        const std::vector<Ideal>& schedule,
                                        std::vector<CutRecord>* trace = nullptr);

enum class SquaringStatus { Verified, Failed, Unverified };
std::string to_string(SquaringStatus s);

// beta^2 membership in the span of the supplied weight-2k basis (truncated
// to B).  Missing basis => Unverified, never silently true.
SquaringStatus squaring_test(const AdelicSeries& beta,
                             const std::vector<AdelicSeries>& basis2k, long B);

struct Eigenform {
  Ring ring;
  std::vector<std::pair<Ideal, RElem>> eigenvalues;  // (prime, a_p) pairs
  std::optional<AdelicSeries> series;                // normalized; absent if a_O = 0
  bool normalized = false;
  SquaringStatus verified = SquaringStatus::Unverified;
  std::vector<std::string> notes;
};

// Simultaneous eigenspaces of the final stable space, splitting by T_p with
// ascending prime norms; irreducible factors of degree > 1 extend the
// coefficient field.  `basis2k`, when present, powers the squaring test.
std::vector<Eigenform> eigenforms(const CandidateSpace& V, const HeckeContext& hc,
                                  const std::vector<AdelicSeries>* basis2k);

struct SturmPlan {
  Int hard_bound;                 // 2(k+k') N(level)^3
  std::vector<long> escalation;   // 500, 1000, 1500, 2000 capped at the bound
  bool certified(long B) const { return Int(B) >= hard_bound; }
};

SturmPlan sturm_heuristic(const WeightVector& k, const WeightVector& kprime,
                          const Ideal& level);

// --- orchestration -----------------------------------------------------------

struct RunInputs {
  std::shared_ptr<const SeriesContext> ctx;
  Ring ring;             // base ring of the run
  long bound = 0;
  Ideal level;
  IdealCharacter eps;    // character of the weight-k space
  WeightVector k = WeightVector::parallel(1);
  WeightVector kprime = WeightVector::parallel(1);
  AdelicSeries multiplier;             // E, invertible constants
  std::vector<AdelicSeries> basis;     // weight k + k'
  std::vector<AdelicSeries> basis2k;   // optional, weight 2k, for the squaring test
  std::vector<Ideal> schedule;         // empty = default
  std::vector<Int> rerun_primes;       // in addition to the pivot primes
  bool cuspidal = false;
  int jobs = 1;
};

struct CharacteristicRun {
  Int p;                // 0 = the base run over Frac(ring)
  size_t dimension = 0;
  std::vector<CutRecord> trace;
  std::vector<Eigenform> forms;
};

struct StabilityReport {
  std::string ring_descriptor;
  long bound = 0;
  bool cuspidal = false;
  size_t initial_rank = 0, final_rank = 0;
  std::vector<CutRecord> trace;
  std::vector<Int> raw_pivots;
  std::set<Int> prime_list;          // pivot primes minus the inverted set
  std::set<Int> excluded_inverted;   // pivot primes that were inverted in R
  SturmPlan sturm;
  bool sturm_certified = false;
  std::vector<std::string> assumptions;
  std::vector<CharacteristicRun> runs;  // base field run first, then mod-p reruns
};

// Algorithm over the base ring only (fields included).
StabilityReport run_stability(const RunInputs& in);

// Full pipeline over a localized-integer base ring: stable module, pivot
// prime list, then mod-p reruns at the pivot primes and any requested ones.
StabilityReport run_multicharacteristic(const RunInputs& in);

}  // namespace hmf
