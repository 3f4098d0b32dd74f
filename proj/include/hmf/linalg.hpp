#pragma once

#include <set>
#include <vector>

#include "hmf/ring.hpp"

namespace hmf {

// Dense matrix over a coefficient ring.  Column vectors span submodules.
class MatR {
 public:
  MatR() : rows_(0), cols_(0) {}
  MatR(Ring R, size_t rows, size_t cols)
      : ring_(std::move(R)), rows_(rows), cols_(cols), e_(rows * cols) {}

  static MatR identity(const Ring& R, size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const Ring& ring() const { return ring_; }

  RElem& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const RElem& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  MatR mul(const MatR& o) const;
  MatR hstack(const MatR& o) const;
  MatR columns(const std::vector<size_t>& idx) const;
  MatR top_rows(size_t n) const;
  bool operator==(const MatR& o) const;

  bool is_zero() const;

 private:
  Ring ring_;
  size_t rows_, cols_;
  std::vector<RElem> e_;
};

// --- field linear algebra ---------------------------------------------------

// In-place reduced row echelon form; returns pivot column indices.
std::vector<size_t> rref(MatR& M);

size_t rank(const MatR& M);

// Kernel basis (columns) of M over a field.
MatR kernel(const MatR& M);

// Solve M x = b over a field; nullopt when inconsistent.  When the solution
// is not unique an arbitrary particular solution is returned.
std::optional<std::vector<RElem>> solve(const MatR& M, const std::vector<RElem>& b);

// Is v in the column span of M (over the fraction field)?
bool in_column_span(const MatR& M, const std::vector<RElem>& v);

// Column-reduce to a basis of the column span (drops dependent columns).
MatR column_basis(const MatR& M);

// --- integer matrices & Smith normal form ----------------------------------

class MatZ {
 public:
  MatZ() : rows_(0), cols_(0) {}
  MatZ(size_t rows, size_t cols) : rows_(rows), cols_(cols), e_(rows * cols, Int(0)) {}

  static MatZ identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const Int& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  MatZ mul(const MatZ& o) const;
  bool operator==(const MatZ& o) const;

 private:
  size_t rows_, cols_;
  std::vector<Int> e_;
};

// M = U * D * V with U, V unimodular and D in Smith form (d1 | d2 | ...).
// u_inv and v_inv are the tracked inverses, so D = u_inv * M * v_inv holds.
struct SmithResult {
  MatZ U, D, V;
  MatZ U_inv, V_inv;
  std::vector<Int> pivots;  // nonzero diagonal entries of D, in order
};

SmithResult smith_normal_form_z(const MatZ& M);

// Saturated kernel of an integer matrix: basis of ker(M) cap Z^n as columns
// (always a saturated submodule).  Pivots of the SNF are reported.
struct KernelZResult {
  MatZ basis;
  std::vector<Int> pivots;
};
KernelZResult kernel_saturated_z(const MatZ& M);

// Saturation of the column span of X inside Z^n: basis of (span_Q(X) cap Z^n).
// The divisions performed are recorded as pivots.
KernelZResult saturate_columns_z(const MatZ& X);

// --- ring-level wrappers (the coefficient-ring contract) --------------------

struct SmithResultR {
  MatR U, D, V;
  std::vector<RElem> pivots;
};

// Smith normal form over a declared-PID coefficient ring.  Fields get the
// trivial diagonal form; localized integers strip inverted primes from the
// pivots by unit scaling.  Errors with Unsupported for non-PID rings.
SmithResultR smith_normal_form(const MatR& M);

// Collects primes dividing recorded pivots across one run.
struct PrimeAccumulator {
  std::vector<Int> raw_pivots;
  void record(const Int& pivot);
  void record_all(const std::vector<Int>& pivots);
  // Distinct primes dividing any recorded pivot, minus `excluded`.
  std::set<Int> primes(const std::vector<Int>& excluded = {}) const;
};

// Basis of {x : A x in span(T)}, saturated over a PID (over a field this is
// plain linear algebra).  A and T must have equal row counts.  SNF pivots
// encountered along the way are recorded into `acc` when non-null.
MatR solve_saturated_preimage(const MatR& A, const MatR& T, PrimeAccumulator* acc);

// Entry-wise reduction of a rational/localized matrix mod p.
MatR reduce_matrix_mod(const MatR& M, const Int& p);

// Exact rational <-> ring-element matrix helpers.
MatZ clear_denominators(const MatR& M);  // unit-scaled integer version (PID rings)
MatR from_integer_matrix(const Ring& R, const MatZ& M);

}  // namespace hmf
