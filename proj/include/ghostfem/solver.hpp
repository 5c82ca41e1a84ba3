#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ghostfem/assembly.hpp"
#include "ghostfem/fields.hpp"

namespace ghostfem {

/// Direct sparse LU (partial pivoting, fill-reducing column ordering).
/// The symbolic analysis is kept across factorizations as long as the
/// sparsity pattern does not change.
class SparseLu {
 public:
  SparseLu();
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  /// Returns false when the matrix is singular; solve() must not be called then.
  bool factorize(const SparseMatrix& matrix);

  /// Solves with up to two steps of iterative refinement against the factored matrix.
  Vector solve(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot factor-and-solve. Throws SingularMatrix.
Vector lu_solve(const SparseMatrix& matrix, const Vector& rhs);

struct LineSearchOptions {
  enum class Kind { none, backtracking };
  Kind kind = Kind::backtracking;
  double c = 1e-4;  // sufficient decrease
  double shrink = 0.5;
  double min_alpha = 1e-8;
  bool operator==(const LineSearchOptions&) const = default;
};

/// Linear solver for the Newton step. `gmres` is restarted GMRES with the
/// spectral preconditioner. `automatic` tries GMRES and falls back to the
/// direct LU when GMRES stalls, unless the slab is a 2+1 problem above
/// kDirectDofLimit unknowns where the LU fill does not fit in memory.
enum class LinearSolverKind { lu, gmres, automatic };

inline constexpr std::size_t kDirectDofLimit = 50000;

const char* linear_solver_name(LinearSolverKind kind);
LinearSolverKind parse_linear_solver(const std::string& name);

struct NewtonOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  int max_iters = 50;
  LineSearchOptions line_search;
  LinearSolverKind linear_solver = LinearSolverKind::automatic;

  void validate() const;
  bool operator==(const NewtonOptions&) const = default;
};

enum class FailureReason { none, max_iters, line_search_stall, singular_matrix, non_finite };

const char* failure_reason_name(FailureReason reason);

struct NewtonReport {
  bool converged = false;
  int iterations = 0;  // Newton updates applied
  int krylov_iterations = 0;  // summed over steps, 0 for the direct solver
  std::vector<double> residual_history;  // ||R_k||_2 for every evaluated iterate
  FailureReason failure_reason = FailureReason::none;

  bool operator==(const NewtonReport&) const = default;
};

struct NewtonResult {
  SlabState state;
  NewtonReport report;
};

/// Newton's method with backtracking on ||R||_2. Stops once
/// ||R_k|| <= max(rtol * ||R_0||, atol). Failures are reported, never thrown.
NewtonResult newton_solve(SlabState initial, const SlabAssembler& assembler, const TimeSlice& ic,
                          const NewtonOptions& opts);

NewtonResult newton_solve(SlabState initial, const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode,
                          const TimeSlice& ic, const NewtonOptions& opts);

}  // namespace ghostfem
