#include "hmf/linalg.hpp"

#include <algorithm>

#include "hmf/errors.hpp"

namespace hmf {

MatR MatR::identity(const Ring& R, size_t n) {
  MatR I(R, n, n);
  for (size_t i = 0; i < n; ++i) I.at(i, i) = R.one();
  return I;
}

MatR MatR::mul(const MatR& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::Internal, "matrix dimension mismatch");
  MatR r(ring_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t k = 0; k < cols_; ++k) {
      const RElem& a = at(i, k);
      if (ring_.is_zero(a)) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        const RElem& b = o.at(k, j);
        if (ring_.is_zero(b)) continue;
        r.at(i, j) = ring_.add(r.at(i, j), ring_.mul(a, b));
      }
    }
  }
  return r;
}

MatR MatR::hstack(const MatR& o) const {
  if (rows_ != o.rows_) fail(ErrorKind::Internal, "hstack row mismatch");
  MatR r(ring_, rows_, cols_ + o.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
  }
  return r;
}

MatR MatR::columns(const std::vector<size_t>& idx) const {
  MatR r(ring_, rows_, idx.size());
  for (size_t j = 0; j < idx.size(); ++j)
    for (size_t i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
  return r;
}

MatR MatR::top_rows(size_t n) const {
  MatR r(ring_, std::min(n, rows_), cols_);
  for (size_t i = 0; i < r.rows(); ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  return r;
}

bool MatR::operator==(const MatR& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

bool MatR::is_zero() const {
  for (const auto& x : e_)
    if (!x.c.empty()) return false;
  return true;
}

namespace {

Ring fraction_field_of(const Ring& R) {
  if (R.is_field()) return R;
  if (R.kind() == Ring::Kind::LocalizedIntegers) return Ring::rationals();
  fail(ErrorKind::Unsupported, "no fraction field for " + R.descriptor());
}

MatR change_ring(const MatR& M, const Ring& T) {
  MatR r(T, M.rows(), M.cols());
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) {
      const RElem& e = M.at(i, j);
      r.at(i, j) = T.from_coeffs(e.c);
    }
  return r;
}

}  // namespace

std::vector<size_t> rref(MatR& M) {
  const Ring& R = M.ring();
  if (!R.is_field()) fail(ErrorKind::Internal, "rref needs a field");
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < M.cols() && row < M.rows(); ++col) {
    size_t piv = row;
    while (piv < M.rows() && R.is_zero(M.at(piv, col))) ++piv;
    if (piv == M.rows()) continue;
    if (piv != row)
      for (size_t j = 0; j < M.cols(); ++j) std::swap(M.at(piv, j), M.at(row, j));
    RElem inv = R.inv(M.at(row, col));
    for (size_t j = col; j < M.cols(); ++j) M.at(row, j) = R.mul(M.at(row, j), inv);
    for (size_t i = 0; i < M.rows(); ++i) {
      if (i == row || R.is_zero(M.at(i, col))) continue;
      RElem f = M.at(i, col);
      for (size_t j = col; j < M.cols(); ++j)
        M.at(i, j) = R.sub(M.at(i, j), R.mul(f, M.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

size_t rank(const MatR& M) {
  MatR W = M.ring().is_field() ? M : change_ring(M, fraction_field_of(M.ring()));
  return rref(W).size();
}

MatR kernel(const MatR& M) {
  const Ring& R = M.ring();
  MatR W = M;
  auto pivots = rref(W);
  std::vector<bool> is_pivot(M.cols(), false);
  for (size_t p : pivots) is_pivot[p] = true;
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < M.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  MatR K(R, M.cols(), free_cols.size());
  for (size_t f = 0; f < free_cols.size(); ++f) {
    size_t fc = free_cols[f];
    K.at(fc, f) = R.one();
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      K.at(pivots[pi], f) = R.neg(W.at(pi, fc));
  }
  return K;
}

std::optional<std::vector<RElem>> solve(const MatR& M, const std::vector<RElem>& b) {
  const Ring& R = M.ring();
  if (b.size() != M.rows()) fail(ErrorKind::Internal, "solve dimension mismatch");
  MatR A(R, M.rows(), M.cols() + 1);
  for (size_t i = 0; i < M.rows(); ++i) {
    for (size_t j = 0; j < M.cols(); ++j) A.at(i, j) = M.at(i, j);
    A.at(i, M.cols()) = b[i];
  }
  auto pivots = rref(A);
  if (!pivots.empty() && pivots.back() == M.cols()) return std::nullopt;
  std::vector<RElem> x(M.cols(), R.zero());
  for (size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = A.at(pi, M.cols());
  return x;
}

bool in_column_span(const MatR& M, const std::vector<RElem>& v) {
  const Ring& F = fraction_field_of(M.ring());
  MatR W = M.ring().is_field() ? M : change_ring(M, F);
  std::vector<RElem> b;
  b.reserve(v.size());
  for (const auto& e : v) b.push_back(F.from_coeffs(e.c));
  return solve(W, b).has_value();
}

MatR column_basis(const MatR& M) {
  // pivot columns of rref(M) index a maximal independent column set
  const Ring& F = fraction_field_of(M.ring());
  MatR W = M.ring().is_field() ? M : change_ring(M, F);
  auto piv = rref(W);
  return M.columns(piv);
}

// --- integer matrices --------------------------------------------------------

MatZ MatZ::identity(size_t n) {
  MatZ I(n, n);
  for (size_t i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

MatZ MatZ::mul(const MatZ& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::Internal, "matrix dimension mismatch");
  MatZ r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

bool MatZ::operator==(const MatZ& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

namespace {

struct SnfWork {
  MatZ D, U, V, U_inv, V_inv;

  explicit SnfWork(const MatZ& M)
      : D(M),
        U(MatZ::identity(M.rows())),
        V(MatZ::identity(M.cols())),
        U_inv(MatZ::identity(M.rows())),
        V_inv(MatZ::identity(M.cols())) {}

  // row_i += k * row_j on D; transforms kept consistent with M = U * D * V.
  void row_add(size_t i, size_t j, const Int& k) {
    for (size_t c = 0; c < D.cols(); ++c) D.at(i, c) += k * D.at(j, c);
    // U -> U * L^{-1}: column op col_j -= k * col_i.
    for (size_t r = 0; r < U.rows(); ++r) U.at(r, j) -= k * U.at(r, i);
    for (size_t c = 0; c < U_inv.cols(); ++c) U_inv.at(i, c) += k * U_inv.at(j, c);
  }

  void row_swap(size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < D.cols(); ++c) std::swap(D.at(i, c), D.at(j, c));
    for (size_t r = 0; r < U.rows(); ++r) std::swap(U.at(r, i), U.at(r, j));
    for (size_t c = 0; c < U_inv.cols(); ++c) std::swap(U_inv.at(i, c), U_inv.at(j, c));
  }

  void row_negate(size_t i) {
    for (size_t c = 0; c < D.cols(); ++c) D.at(i, c) = -D.at(i, c);
    for (size_t r = 0; r < U.rows(); ++r) U.at(r, i) = -U.at(r, i);
    for (size_t c = 0; c < U_inv.cols(); ++c) U_inv.at(i, c) = -U_inv.at(i, c);
  }

  // col_i += k * col_j
  void col_add(size_t i, size_t j, const Int& k) {
    for (size_t r = 0; r < D.rows(); ++r) D.at(r, i) += k * D.at(r, j);
    // V -> C^{-1} * V: row_j -= k * row_i
    for (size_t c = 0; c < V.cols(); ++c) V.at(j, c) -= k * V.at(i, c);
    for (size_t r = 0; r < V_inv.rows(); ++r) V_inv.at(r, i) += k * V_inv.at(r, j);
  }

  void col_swap(size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < D.rows(); ++r) std::swap(D.at(r, i), D.at(r, j));
    for (size_t c = 0; c < V.cols(); ++c) std::swap(V.at(i, c), V.at(j, c));
    for (size_t r = 0; r < V_inv.rows(); ++r) std::swap(V_inv.at(r, i), V_inv.at(r, j));
  }

  void col_negate(size_t i) {
    for (size_t r = 0; r < D.rows(); ++r) D.at(r, i) = -D.at(r, i);
    for (size_t c = 0; c < V.cols(); ++c) V.at(i, c) = -V.at(i, c);
    for (size_t r = 0; r < V_inv.rows(); ++r) V_inv.at(r, i) = -V_inv.at(r, i);
  }

  // Unimodular 2x2 row transform [row_t; row_i] <- [[s,u],[-b/g,a/g]] * [..]
  // with (g,s,u) = xgcd(D[t][t], D[i][t]); zeroes D[i][t] in one step.
  void row_bezout(size_t t, size_t i) {
    Int a = D.at(t, t), b = D.at(i, t);
    Int g, s, u;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    Int alpha = a / g, beta = b / g;
    for (size_t c = 0; c < D.cols(); ++c) {
      Int rt = D.at(t, c), ri = D.at(i, c);
      D.at(t, c) = s * rt + u * ri;
      D.at(i, c) = -beta * rt + alpha * ri;
    }
    // U' = U * L^{-1}, L^{-1} = [[alpha, -u],[beta, s]]
    for (size_t r = 0; r < U.rows(); ++r) {
      Int ct = U.at(r, t), ci = U.at(r, i);
      U.at(r, t) = alpha * ct + beta * ci;
      U.at(r, i) = -u * ct + s * ci;
    }
    for (size_t c = 0; c < U_inv.cols(); ++c) {
      Int rt = U_inv.at(t, c), ri = U_inv.at(i, c);
      U_inv.at(t, c) = s * rt + u * ri;
      U_inv.at(i, c) = -beta * rt + alpha * ri;
    }
  }

  // Column analogue: D <- D * C with C = [[s, -b/g],[u, a/g]] acting on
  // columns (t, j), (g,s,u) = xgcd(D[t][t], D[t][j]).
  void col_bezout(size_t t, size_t j) {
    Int a = D.at(t, t), b = D.at(t, j);
    Int g, s, u;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    Int alpha = a / g, beta = b / g;
    for (size_t r = 0; r < D.rows(); ++r) {
      Int ct = D.at(r, t), cj = D.at(r, j);
      D.at(r, t) = s * ct + u * cj;
      D.at(r, j) = -beta * ct + alpha * cj;
    }
    // V' = C^{-1} * V, C^{-1} = [[alpha, beta],[-u, s]]
    for (size_t c = 0; c < V.cols(); ++c) {
      Int rt = V.at(t, c), rj = V.at(j, c);
      V.at(t, c) = alpha * rt + beta * rj;
      V.at(j, c) = -u * rt + s * rj;
    }
    for (size_t r = 0; r < V_inv.rows(); ++r) {
      Int ct = V_inv.at(r, t), cj = V_inv.at(r, j);
      V_inv.at(r, t) = s * ct + u * cj;
      V_inv.at(r, j) = -beta * ct + alpha * cj;
    }
  }
};

}  // namespace

SmithResult smith_normal_form_z(const MatZ& M) {
  SnfWork w(M);
  size_t n = M.rows(), m = M.cols();
  size_t t = 0;
  while (t < n && t < m) {
    // smallest-absolute-value pivot in the trailing block
    size_t pi = n, pj = m;
    Int best(0);
    for (size_t i = t; i < n; ++i)
      for (size_t j = t; j < m; ++j) {
        const Int& v = w.D.at(i, j);
        if (v == 0) continue;
        if (best == 0 || abs(v) < abs(best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);

    // Alternate clearing passes.  When the pivot divides an entry, a plain
    // elimination leaves the pivot row/column untouched; otherwise a Bezout
    // transform strictly shrinks |pivot|, so the loop terminates.
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = t + 1; i < n; ++i) {
        const Int& b = w.D.at(i, t);
        if (b == 0) continue;
        if (b % w.D.at(t, t) == 0)
          w.row_add(i, t, Int(-(b / w.D.at(t, t))));
        else
          w.row_bezout(t, i);
        changed = true;
      }
      for (size_t j = t + 1; j < m; ++j) {
        const Int& b = w.D.at(t, j);
        if (b == 0) continue;
        if (b % w.D.at(t, t) == 0)
          w.col_add(j, t, Int(-(b / w.D.at(t, t))));
        else
          w.col_bezout(t, j);
        changed = true;
      }
    }
    if (w.D.at(t, t) < 0) w.row_negate(t);
    // divisibility sweep: d_t must divide the rest of the block
    bool redo = false;
    for (size_t i = t + 1; i < n && !redo; ++i)
      for (size_t j = t + 1; j < m && !redo; ++j)
        if (w.D.at(i, j) % w.D.at(t, t) != 0) {
          w.row_add(t, i, Int(1));
          redo = true;
        }
    if (redo) continue;  // re-run elimination at the same t
    ++t;
  }
  SmithResult res;
  res.D = w.D;
  res.U = w.U;
  res.V = w.V;
  res.U_inv = w.U_inv;
  res.V_inv = w.V_inv;
  for (size_t i = 0; i < std::min(n, m); ++i)
    if (w.D.at(i, i) != 0) res.pivots.push_back(w.D.at(i, i));
  return res;
}

KernelZResult kernel_saturated_z(const MatZ& M) {
  SmithResult s = smith_normal_form_z(M);
  size_t r = s.pivots.size();
  size_t n = M.cols();
  KernelZResult out;
  out.pivots = s.pivots;
  out.basis = MatZ(n, n - r);
  for (size_t j = r; j < n; ++j)
    for (size_t i = 0; i < n; ++i) out.basis.at(i, j - r) = s.V_inv.at(i, j);
  return out;
}

KernelZResult saturate_columns_z(const MatZ& X) {
  SmithResult s = smith_normal_form_z(X);
  size_t r = s.pivots.size();
  KernelZResult out;
  out.pivots = s.pivots;
  out.basis = MatZ(X.rows(), r);
  for (size_t j = 0; j < r; ++j)
    for (size_t i = 0; i < X.rows(); ++i) out.basis.at(i, j) = s.U.at(i, j);
  return out;
}

// --- ring-level wrappers -----------------------------------------------------

MatZ clear_denominators(const MatR& M) {
  Int l(1);
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) {
      auto q = M.ring().as_rational(M.at(i, j));
      if (!q) fail(ErrorKind::Internal, "clear_denominators: non-rational entry");
      l = lcm(l, q->get_den());
    }
  MatZ Z(M.rows(), M.cols());
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) {
      Rat v = *M.ring().as_rational(M.at(i, j)) * Rat(l);
      Z.at(i, j) = v.get_num();
    }
  return Z;
}

MatR from_integer_matrix(const Ring& R, const MatZ& M) {
  MatR r(R, M.rows(), M.cols());
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j)
      if (M.at(i, j) != 0) r.at(i, j) = R.from_rat(Rat(M.at(i, j)));
  return r;
}

SmithResultR smith_normal_form(const MatR& M) {
  const Ring& R = M.ring();
  if (!R.is_pid())
    fail(ErrorKind::Unsupported,
         "Smith normal form needs a declared PID; " + R.descriptor() + " is not");
  SmithResultR out;
  if (R.is_field()) {
    // Diagonal of units via two-sided elimination.
    MatR D = M, U = MatR::identity(R, M.rows()), V = MatR::identity(R, M.cols());
    size_t t = 0;
    while (t < D.rows() && t < D.cols()) {
      size_t pi = D.rows(), pj = D.cols();
      for (size_t i = t; i < D.rows() && pi == D.rows(); ++i)
        for (size_t j = t; j < D.cols(); ++j)
          if (!R.is_zero(D.at(i, j))) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == D.rows()) break;
      // swap into place; mirror into U (columns) and V (rows)
      for (size_t c = 0; c < D.cols(); ++c) std::swap(D.at(pi, c), D.at(t, c));
      for (size_t r2 = 0; r2 < U.rows(); ++r2) std::swap(U.at(r2, pi), U.at(r2, t));
      for (size_t r2 = 0; r2 < D.rows(); ++r2) std::swap(D.at(r2, pj), D.at(r2, t));
      for (size_t c = 0; c < V.cols(); ++c) std::swap(V.at(pj, c), V.at(t, c));
      RElem inv = R.inv(D.at(t, t));
      for (size_t i = t + 1; i < D.rows(); ++i) {
        RElem f = R.mul(D.at(i, t), inv);
        if (R.is_zero(f)) continue;
        for (size_t c = t; c < D.cols(); ++c)
          D.at(i, c) = R.sub(D.at(i, c), R.mul(f, D.at(t, c)));
        for (size_t r2 = 0; r2 < U.rows(); ++r2)
          U.at(r2, t) = R.add(U.at(r2, t), R.mul(f, U.at(r2, i)));
      }
      for (size_t j = t + 1; j < D.cols(); ++j) {
        RElem f = R.mul(D.at(t, j), inv);
        if (R.is_zero(f)) continue;
        for (size_t r2 = t; r2 < D.rows(); ++r2)
          D.at(r2, j) = R.sub(D.at(r2, j), R.mul(f, D.at(r2, t)));
        for (size_t c = 0; c < V.cols(); ++c)
          V.at(t, c) = R.add(V.at(t, c), R.mul(f, V.at(j, c)));
      }
      ++t;
    }
    out.U = U;
    out.D = D;
    out.V = V;
    for (size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (!R.is_zero(D.at(i, i))) out.pivots.push_back(D.at(i, i));
    return out;
  }

  // Localized integers: scale by a unit to an integer matrix, run the
  // integer algorithm, then strip inverted primes from the pivots.
  Int scale(1);
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j)
      scale = lcm(scale, M.ring().as_rational(M.at(i, j))->get_den());
  MatZ Z = clear_denominators(M);  // scaling factor is a unit of R
  SmithResult s = smith_normal_form_z(Z);
  MatR D = from_integer_matrix(R, s.D);
  MatR V = from_integer_matrix(R, s.V);
  // strip inverted primes from pivots; fold adjustments and the 1/scale
  // factor into V's rows so M = U * D * V still holds over R
  for (size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) {
    if (R.is_zero(D.at(i, i))) continue;
    Int pivot = R.as_rational(D.at(i, i))->get_num();
    Int stripped = pivot;
    for (const Int& p : R.inverted_primes())
      while (stripped % p == 0) stripped /= p;
    Int unit_factor = pivot / stripped;
    if (unit_factor != 1) {
      D.at(i, i) = R.from_rat(Rat(stripped));
      for (size_t c = 0; c < V.cols(); ++c)
        V.at(i, c) = R.mul(V.at(i, c), R.from_rat(Rat(unit_factor)));
    }
  }
  // fold 1/scale into V rows (scale is a unit)
  if (scale != 1) {
    RElem sinv = R.inv(R.from_rat(Rat(scale)));
    for (size_t i = 0; i < V.rows(); ++i)
      for (size_t c = 0; c < V.cols(); ++c) V.at(i, c) = R.mul(V.at(i, c), sinv);
  }
  out.U = from_integer_matrix(R, s.U);
  out.D = D;
  out.V = V;
  for (size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (!R.is_zero(D.at(i, i))) out.pivots.push_back(D.at(i, i));
  return out;
}

void PrimeAccumulator::record(const Int& pivot) {
  if (pivot != 0 && abs(pivot) != 1) raw_pivots.push_back(abs(pivot));
}

void PrimeAccumulator::record_all(const std::vector<Int>& pivots) {
  for (const Int& p : pivots) record(p);
}

std::set<Int> PrimeAccumulator::primes(const std::vector<Int>& excluded) const {
  std::set<Int> out;
  for (const Int& v : raw_pivots)
    for (const Int& p : prime_divisors(v)) out.insert(p);
  for (const Int& p : excluded) out.erase(p);
  return out;
}

MatR solve_saturated_preimage(const MatR& A, const MatR& T, PrimeAccumulator* acc) {
  const Ring& R = A.ring();
  if (A.rows() != T.rows()) fail(ErrorKind::Internal, "preimage row mismatch");
  if (R.is_field()) {
    MatR S = A.hstack(T);  // [A | T]; sign of the T block is irrelevant for kernels
    MatR K = kernel(S);
    MatR X = K.top_rows(A.cols());
    return column_basis(X);
  }
  if (R.kind() != Ring::Kind::LocalizedIntegers)
    fail(ErrorKind::Unsupported, "saturated preimage needs a field or localized integers");

  MatZ S = clear_denominators(A.hstack(T));
  KernelZResult K = kernel_saturated_z(S);
  if (acc) {
    acc->record_all(K.pivots);
    // pivots of the operator matrix itself: reductions mod these primes can
    // enlarge the kernel, so they belong to the exceptional superset
    acc->record_all(smith_normal_form_z(clear_denominators(A)).pivots);
  }
  MatZ X(A.cols(), K.basis.cols());
  for (size_t i = 0; i < A.cols(); ++i)
    for (size_t j = 0; j < K.basis.cols(); ++j) X.at(i, j) = K.basis.at(i, j);
  KernelZResult sat = saturate_columns_z(X);
  if (acc) acc->record_all(sat.pivots);
  return from_integer_matrix(R, sat.basis);
}

MatR reduce_matrix_mod(const MatR& M, const Int& p) {
  Ring T = reduction_target(M.ring(), p);
  MatR r(T, M.rows(), M.cols());
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) r.at(i, j) = reduce_mod(M.ring(), M.at(i, j), p);
  return r;
}

}  // namespace hmf
