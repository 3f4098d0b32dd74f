#include "hmf/stability.hpp"

#include <algorithm>
#include <future>

#include "hmf/errors.hpp"

namespace hmf {

AdelicSeries CandidateSpace::column_series(size_t j) const {
  std::vector<RElem> slots(basis.rows());
  for (size_t i = 0; i < basis.rows(); ++i) slots[i] = basis.at(i, j);
  return from_slots(ctx, ring, weight, bound, slots);
}

namespace {

// Saturate the columns inside the ambient slot lattice (PID rings); over a
// field just drop dependent columns.
MatR normalize_columns(const Ring& R, const MatR& M, PrimeAccumulator* acc) {
  if (R.is_field()) return column_basis(M);
  MatZ X = clear_denominators(M);
  KernelZResult sat = saturate_columns_z(X);
  if (acc) acc->record_all(sat.pivots);
  return from_integer_matrix(R, sat.basis);
}

}  // namespace

CandidateSpace candidate_space(const AdelicSeries& E,
                               const std::vector<AdelicSeries>& basis, long B) {
  if (basis.empty()) fail(ErrorKind::Validation, "candidate space needs a basis");
  if (E.bound() < B) fail(ErrorKind::OutOfPrecision, "multiplier has too little precision");
  AdelicSeries invE = invert(truncate(E, B));
  CandidateSpace V;
  V.ctx = E.ctx();
  V.ring = E.ring();
  V.bound = B;
  std::vector<AdelicSeries> cols;
  for (const AdelicSeries& g : basis) {
    if (g.bound() < B) fail(ErrorKind::OutOfPrecision, "basis series has too little precision");
    cols.push_back(series_mul(invE, truncate(g, B)));
  }
  V.weight = cols[0].weight();
  size_t rows = static_cast<size_t>(V.ctx->h_plus()) + V.ctx->slot_ideals(B).size();
  MatR M(V.ring, rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    auto slots = to_slots(cols[j]);
    for (size_t i = 0; i < rows; ++i) M.at(i, j) = slots[i];
  }
  size_t before = M.cols();
  V.basis = normalize_columns(V.ring, M, &V.pivots);
  V.provenance.push_back("candidate space from " + std::to_string(before) +
                         " quotient columns, rank " + std::to_string(V.basis.cols()));
  return V;
}

std::vector<Ideal> default_schedule(const SeriesContext& ctx, long B) {
  std::vector<Ideal> out;
  for (const Ideal& m : ctx.slot_ideals(B)) {
    if (m.is_trivial()) continue;
    Rat n = ideal_norm(m);
    if (n * n <= B) out.push_back(m);
  }
  return out;
}

CandidateSpace largest_stable_submodule(const CandidateSpace& V0, const HeckeContext& hc,
                                        const std::vector<Ideal>& schedule,
                                        std::vector<CutRecord>* trace) {
  CandidateSpace V = V0;
  bool cut = true;
  while (cut && V.dim() > 0) {
    cut = false;
    for (const Ideal& m : schedule) {
      if (V.dim() == 0) break;
      long Bout = rat_floor(Rat(V.bound) / ideal_norm(m)).get_si();
      size_t out_rows = static_cast<size_t>(V.ctx->h_plus()) +
                        V.ctx->slot_ideals(Bout).size();
      // A = T_m applied to the columns, in the truncated slot coordinates
      MatR A(V.ring, out_rows, V.dim());
      for (size_t j = 0; j < V.dim(); ++j) {
        auto slots = to_slots(hecke_apply(hc, m, V.column_series(j)));
        for (size_t i = 0; i < out_rows; ++i) A.at(i, j) = slots[i];
      }
      // the slot layout is norm-sorted, so truncation is a row prefix
      MatR T = V.basis.top_rows(out_rows);
      MatR P = solve_saturated_preimage(A, T, &V.pivots);
      if (P.cols() == V.dim()) continue;  // T_m-stable
      size_t before = V.dim();
      MatR refined = V.basis.mul(P);
      V.basis = normalize_columns(V.ring, refined, &V.pivots);
      CutRecord rec{m, before, V.dim()};
      if (trace) trace->push_back(rec);
      V.provenance.push_back("T_" + m.label() + " cut rank " + std::to_string(before) +
                             " -> " + std::to_string(V.dim()));
      cut = true;
      break;  // restart the sweep
    }
  }
  return V;
}

std::string to_string(SquaringStatus s) {
  switch (s) {
    case SquaringStatus::Verified: return "verified";
    case SquaringStatus::Failed: return "failed";
    case SquaringStatus::Unverified: return "unverified";
  }
  return "?";
}

SquaringStatus squaring_test(const AdelicSeries& beta,
                             const std::vector<AdelicSeries>& basis2k, long B) {
  if (basis2k.empty()) return SquaringStatus::Unverified;
  AdelicSeries sq = series_mul(truncate(beta, B), truncate(beta, B));
  const Ring& R = beta.ring();
  size_t rows = static_cast<size_t>(beta.ctx()->h_plus()) +
                beta.ctx()->slot_ideals(B).size();
  MatR M(R, rows, basis2k.size());
  for (size_t j = 0; j < basis2k.size(); ++j) {
    auto slots = to_slots(truncate(basis2k[j], B));
    for (size_t i = 0; i < rows; ++i) M.at(i, j) = slots[i];
  }
  auto target = to_slots(sq);
  return in_column_span(M, target) ? SquaringStatus::Verified : SquaringStatus::Failed;
}

namespace {

struct Branch {
  Ring R;
  RingHom from_base;  // base coefficient field -> R
  MatR basis;         // slots x dim over R
  std::vector<std::pair<Ideal, RElem>> split_trace;
  std::vector<std::string> notes;
};

MatR change_matrix_ring(const MatR& M, const RingHom& h) {
  MatR out(h.dst, M.rows(), M.cols());
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) out.at(i, j) = h.apply(M.at(i, j));
  return out;
}

// matrix of T_m on the span of `basis` (columns), or nullopt when the
// truncated columns fail to identify it uniquely (precision shortfall)
std::optional<MatR> operator_matrix(const HeckeContext& hc, const Ideal& m,
                                    const Ring& R, const MatR& basis,
                                    const CandidateSpace& shape) {
  long Bout = rat_floor(Rat(shape.bound) / ideal_norm(m)).get_si();
  size_t out_rows = static_cast<size_t>(shape.ctx->h_plus()) +
                    shape.ctx->slot_ideals(Bout).size();
  MatR T = basis.top_rows(out_rows);
  if (rank(T) != basis.cols()) return std::nullopt;
  MatR M(R, basis.cols(), basis.cols());
  for (size_t j = 0; j < basis.cols(); ++j) {
    std::vector<RElem> col(basis.rows());
    for (size_t i = 0; i < basis.rows(); ++i) col[i] = basis.at(i, j);
    AdelicSeries s = from_slots(shape.ctx, R, shape.weight, shape.bound, col);
    auto slots = to_slots(hecke_apply(hc, m, s));
    auto sol = solve(T, slots);
    if (!sol) return std::nullopt;
    for (size_t i = 0; i < basis.cols(); ++i) M.at(i, j) = (*sol)[i];
  }
  return M;
}

// extension of a coefficient field by an irreducible polynomial
std::pair<Ring, RingHom> extend_field(const Ring& R, const RPoly& h) {
  if (R.kind() == Ring::Kind::FiniteField) {
    if (R.degree() == 1) {
      std::vector<Int> mp;
      for (const RElem& c : h.c) mp.push_back(R.as_rational(c)->get_num());
      Ring ext = Ring::finite_field(R.characteristic(), mp);
      return {ext, inclusion_hom(R, ext)};
    }
    // non-prime base: build F_{p^{km}} and embed by mapping the old
    // generator to a root of the old modulus
    unsigned newdeg = R.degree() * static_cast<unsigned>(h.degree());
    Ring ext = Ring::finite_field(R.characteristic(), newdeg);
    RPoly old_min;  // R's modulus as a polynomial over ext's prime field
    for (const Rat& c : R.minpoly()) old_min.c.push_back(ext.from_rat(c));
    auto roots = poly_roots_finite_field(ext, old_min);
    if (roots.empty()) fail(ErrorKind::Internal, "modulus has no root in the extension");
    RingHom hom{R, ext, roots[0]};
    return {ext, hom};
  }
  if (R.kind() == Ring::Kind::Rationals) {
    std::vector<Rat> mp;
    for (const RElem& c : h.c) mp.push_back(*R.as_rational(c));
    Ring ext = Ring::number_field(mp);
    return {ext, inclusion_hom(R, ext)};
  }
  fail(ErrorKind::Unsupported,
       "field extension over " + R.descriptor() + " is not supported");
}

// roots of the irreducible h inside R or a one-step extension of it
struct RootData {
  Ring R;                   // ring containing the roots
  RingHom step;             // br.R -> R
  std::vector<RElem> roots;
};

std::optional<RootData> roots_of_factor(const Ring& R, const RPoly& h,
                                        std::vector<std::string>* notes) {
  if (h.degree() == 1)
    return RootData{R, inclusion_hom(R, R), {R.neg(R.div(h.c[0], h.c[1]))}};
  if (R.kind() == Ring::Kind::FiniteField) {
    auto [ext, hom] = extend_field(R, h);
    RPoly h_ext;
    for (const RElem& c : h.c) h_ext.c.push_back(hom.apply(c));
    auto roots = poly_roots_finite_field(ext, h_ext);
    if (roots.empty()) fail(ErrorKind::Internal, "no roots in the splitting extension");
    return RootData{ext, hom, roots};
  }
  if (R.kind() == Ring::Kind::Rationals) {
    // linear factors were split off already, so h has no rational roots;
    // degree <= 3 therefore certifies irreducibility
    if (h.degree() > 3) {
      if (notes)
        notes->push_back("unsplit factor of degree " + std::to_string(h.degree()) +
                         " (irreducibility not certified; eigenvalues left grouped)");
      return std::nullopt;
    }
    auto [ext, hom] = extend_field(R, h);
    return RootData{ext, hom, {ext.generator()}};
  }
  if (notes)
    notes->push_back("eigenvalue splitting over " + R.descriptor() +
                     " stops at degree " + std::to_string(h.degree()));
  return std::nullopt;
}

RingHom compose_hom(const RingHom& step, const RingHom& from_base) {
  RingHom out{from_base.src, step.dst, step.dst.zero()};
  if (from_base.src.degree() >= 2) out.gen_image = step.apply(from_base.gen_image);
  return out;
}

}  // namespace

std::vector<Eigenform> eigenforms(const CandidateSpace& V, const HeckeContext& hc,
                                  const std::vector<AdelicSeries>* basis2k) {
  std::vector<Eigenform> out;
  if (V.dim() == 0) return out;
  Ring base = V.ring.is_field() ? V.ring : Ring::rationals();
  MatR basis0 = V.basis;
  if (!V.ring.is_field()) {
    MatR conv(base, V.basis.rows(), V.basis.cols());
    for (size_t i = 0; i < V.basis.rows(); ++i)
      for (size_t j = 0; j < V.basis.cols(); ++j)
        conv.at(i, j) = base.from_coeffs(V.basis.at(i, j).c);
    basis0 = conv;
  }

  std::vector<Branch> done, work{Branch{base, inclusion_hom(base, base), basis0, {}, {}}};
  for (const Ideal& m : default_schedule(*V.ctx, V.bound)) {
    if (work.empty()) break;
    // split at prime ideals only; composite T_m add nothing new here
    bool is_prime = false;
    {
      auto f = V.ctx->fc().factorization(m);
      is_prime = f.size() == 1 && f[0].second == 1;
    }
    if (!is_prime) continue;
    std::vector<Branch> next;
    for (Branch& br : work) {
      if (br.basis.cols() <= 1) {
        next.push_back(std::move(br));
        continue;
      }
      auto M = operator_matrix(hc, m, br.R, br.basis, V);
      if (!M) {
        br.notes.push_back("T_" + m.label() +
                           " not identifiable at this precision; skipped");
        next.push_back(std::move(br));
        continue;
      }
      RPoly minpoly = matrix_min_poly(*M);
      // gather the irreducible factors and where their roots live
      struct Piece {
        RootData rd;
        RPoly factor;
      };
      std::vector<Piece> pieces;
      bool splittable = true;
      if (br.R.kind() == Ring::Kind::FiniteField) {
        for (auto& [h, mult] : factor_poly_finite_field(br.R, minpoly)) {
          (void)mult;
          auto rd = roots_of_factor(br.R, h, &br.notes);
          if (!rd) {
            splittable = false;
            break;
          }
          pieces.push_back({*rd, h});
        }
      } else {
        auto split = rational_linear_split(br.R, minpoly);
        if (br.R.kind() != Ring::Kind::Rationals && split.cofactor.degree() > 0) {
          splittable = false;
        } else {
          std::vector<RElem> uniq;
          for (const RElem& r : split.roots)
            if (std::find(uniq.begin(), uniq.end(), r) == uniq.end()) uniq.push_back(r);
          for (const RElem& r : uniq) {
            RPoly lin = poly_from_coeffs(br.R, {br.R.neg(r), br.R.one()});
            pieces.push_back({RootData{br.R, inclusion_hom(br.R, br.R), {r}}, lin});
          }
          if (split.cofactor.degree() > 0) {
            auto rd = roots_of_factor(br.R, split.cofactor, &br.notes);
            if (!rd)
              splittable = false;
            else
              pieces.push_back({*rd, split.cofactor});
          }
        }
      }
      if (!splittable || pieces.size() <= 1) {
        bool single_eigenvalue = pieces.size() == 1 && pieces[0].factor.degree() == 1;
        if (!splittable) br.notes.push_back("splitting stalled at T_" + m.label());
        if (single_eigenvalue) br.split_trace.emplace_back(m, pieces[0].rd.roots[0]);
        next.push_back(std::move(br));
        continue;
      }
      for (Piece& piece : pieces) {
        const Ring& Rext = piece.rd.R;
        const RingHom& lift = piece.rd.step;  // br.R -> Rext
        MatR Mx = change_matrix_ring(*M, lift);
        MatR Bx = change_matrix_ring(br.basis, lift);
        for (const RElem& root : piece.rd.roots) {
          MatR shifted = Mx;
          for (size_t i = 0; i < shifted.rows(); ++i)
            shifted.at(i, i) = Rext.sub(shifted.at(i, i), root);
          MatR K = kernel(shifted);
          if (K.cols() == 0) continue;
          Branch nb;
          nb.R = Rext;
          nb.from_base = compose_hom(lift, br.from_base);
          nb.basis = Bx.mul(K);
          nb.split_trace = br.split_trace;
          for (auto& [idl, ev] : nb.split_trace) ev = lift.apply(ev);
          nb.split_trace.emplace_back(m, root);
          nb.notes = br.notes;
          next.push_back(std::move(nb));
        }
      }
    }
    work = std::move(next);
  }

  for (Branch& br : work) done.push_back(std::move(br));

  for (Branch& br : done) {
    if (br.basis.cols() != 1) {
      Eigenform e;
      e.ring = br.R;
      e.normalized = false;
      e.notes = br.notes;
      e.notes.push_back("eigenspace of dimension " + std::to_string(br.basis.cols()) +
                        " was not split further");
      for (auto& [idl, ev] : br.split_trace) e.eigenvalues.emplace_back(idl, ev);
      out.push_back(std::move(e));
      continue;
    }
    Eigenform e;
    e.ring = br.R;
    e.notes = br.notes;
    std::vector<RElem> slots(br.basis.rows());
    for (size_t i = 0; i < br.basis.rows(); ++i) slots[i] = br.basis.at(i, 0);
    // normalize at the coefficient of O_K (first ideal slot)
    size_t o_slot = static_cast<size_t>(V.ctx->h_plus());
    if (br.R.is_zero(slots[o_slot])) {
      e.normalized = false;
      e.notes.push_back("a_O = 0: eigenvector cannot be normalized");
      for (auto& [idl, ev] : br.split_trace) e.eigenvalues.emplace_back(idl, ev);
      out.push_back(std::move(e));
      continue;
    }
    RElem inv = br.R.inv(slots[o_slot]);
    for (auto& s : slots) s = br.R.mul(s, inv);
    AdelicSeries f = from_slots(V.ctx, br.R, V.weight, V.bound, slots);
    // eigenvalues are the coefficients at the primes (T_m f = a_m f)
    for (const Ideal& m : V.ctx->slot_ideals(V.bound)) {
      auto fac = V.ctx->fc().factorization(m);
      if (fac.size() == 1 && fac[0].second == 1)
        e.eigenvalues.emplace_back(m, f.coeff(m));
    }
    e.series = f;
    e.normalized = true;
    if (basis2k && !basis2k->empty()) {
      std::vector<AdelicSeries> b2;
      for (const AdelicSeries& g : *basis2k) {
        AdelicSeries h = g;
        if (!g.ring().same_ring(br.R)) h = convert_ring(g, br.R);
        b2.push_back(truncate(h, V.bound));
      }
      e.verified = squaring_test(f, b2, V.bound);
    } else {
      e.verified = SquaringStatus::Unverified;
      e.notes.push_back("candidate (unverified): no weight-2k basis supplied");
    }
    out.push_back(std::move(e));
  }
  return out;
}

SturmPlan sturm_heuristic(const WeightVector& k, const WeightVector& kprime,
                          const Ideal& level) {
  SturmPlan plan;
  Int nl = ideal_norm(level).get_num();
  plan.hard_bound = Int(2) * (k.k0() + kprime.k0()) * nl * nl * nl;
  for (long b = 500; b <= 2000; b += 500) {
    if (Int(b) >= plan.hard_bound) {
      plan.escalation.push_back(plan.hard_bound.get_si());
      break;
    }
    plan.escalation.push_back(b);
  }
  if (plan.escalation.empty()) plan.escalation.push_back(plan.hard_bound.get_si());
  return plan;
}

namespace {

CharacteristicRun field_run(const RunInputs& in, const Ring& field, const Int& p,
                            const AdelicSeries& mult,
                            const std::vector<AdelicSeries>& basis,
                            const std::vector<AdelicSeries>& basis2k) {
  CharacteristicRun run;
  run.p = p;
  HeckeContext hc(in.ctx, in.level, in.eps, in.k.k0());
  CandidateSpace V0 = candidate_space(mult, basis, in.bound);
  auto schedule = in.schedule.empty() ? default_schedule(*in.ctx, in.bound) : in.schedule;
  CandidateSpace V = largest_stable_submodule(V0, hc, schedule, &run.trace);
  run.dimension = V.dim();
  run.forms = eigenforms(V, hc, basis2k.empty() ? nullptr : &basis2k);
  (void)field;
  return run;
}

}  // namespace

StabilityReport run_stability(const RunInputs& in) {
  StabilityReport rep;
  rep.ring_descriptor = in.ring.descriptor();
  rep.bound = in.bound;
  rep.cuspidal = in.cuspidal;
  rep.sturm = sturm_heuristic(in.k, in.kprime, in.level);
  rep.sturm_certified = rep.sturm.certified(in.bound);
  rep.assumptions.push_back(
      "Hecke generation bound: operators T_m with N(m)^2 <= B are assumed to "
      "generate the Hecke algebra at this precision");
  if (!rep.sturm_certified)
    rep.assumptions.push_back(
        "heuristic precision: B = " + std::to_string(in.bound) +
        " is below the certified bound " + rep.sturm.hard_bound.get_str());

  HeckeContext hc(in.ctx, in.level, in.eps, in.k.k0());
  CandidateSpace V0 = candidate_space(in.multiplier, in.basis, in.bound);
  rep.initial_rank = V0.dim();
  auto schedule = in.schedule.empty() ? default_schedule(*in.ctx, in.bound) : in.schedule;
  CandidateSpace V = largest_stable_submodule(V0, hc, schedule, &rep.trace);
  rep.final_rank = V.dim();
  rep.raw_pivots = V.pivots.raw_pivots;
  rep.prime_list = V.pivots.primes(in.ring.inverted_primes());
  {
    auto all = V.pivots.primes();
    for (const Int& q : in.ring.inverted_primes())
      if (all.count(q)) rep.excluded_inverted.insert(q);
  }
  CharacteristicRun base;
  base.p = 0;
  base.dimension = V.dim();
  base.trace = rep.trace;
  base.forms = eigenforms(V, hc, in.basis2k.empty() ? nullptr : &in.basis2k);
  rep.runs.push_back(std::move(base));
  return rep;
}

StabilityReport run_multicharacteristic(const RunInputs& in) {
  if (in.ring.kind() != Ring::Kind::LocalizedIntegers)
    fail(ErrorKind::Validation,
         "multi-characteristic run needs a localized-integer base ring, got " +
             in.ring.descriptor());
  StabilityReport rep = run_stability(in);
  rep.assumptions.push_back(
      "reduction surjectivity in weight k+k' is assumed, not verified "
      "(open for parallel weight 2)");
  rep.assumptions.push_back(
      "mod-p Sturm bounds below the working precision are assumed, not verified");

  std::set<Int> ps = rep.prime_list;
  for (const Int& p : in.rerun_primes) {
    bool inverted = false;
    for (const Int& q : in.ring.inverted_primes())
      if (q == p) inverted = true;
    if (!inverted) ps.insert(p);
  }

  std::vector<Int> plist(ps.begin(), ps.end());
  auto one_rerun = [&](const Int& p) -> CharacteristicRun {
    Ring Fp = Ring::finite_field(p, 1u);
    RunInputs sub = in;
    sub.ring = Fp;
    sub.multiplier = series_mod_p(in.multiplier, p);
    sub.basis.clear();
    for (const AdelicSeries& g : in.basis) sub.basis.push_back(series_mod_p(g, p));
    sub.basis2k.clear();
    for (const AdelicSeries& g : in.basis2k) sub.basis2k.push_back(series_mod_p(g, p));
    return field_run(sub, Fp, p, sub.multiplier, sub.basis, sub.basis2k);
  };

  if (in.jobs > 1 && plist.size() > 1) {
    std::vector<std::future<CharacteristicRun>> futs;
    for (const Int& p : plist)
      futs.push_back(std::async(std::launch::async, one_rerun, p));
    for (auto& f : futs) rep.runs.push_back(f.get());
  } else {
    for (const Int& p : plist) rep.runs.push_back(one_rerun(p));
  }
  return rep;
}

}  // namespace hmf
