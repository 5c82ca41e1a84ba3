#include "ghostfem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/UmfPackSupport>
#include <unsupported/Eigen/IterativeSolvers>

#include "ghostfem/error.hpp"
#include "ghostfem/spectral.hpp"

namespace ghostfem {

struct SparseLu::Impl {
  Impl() {
    // The slab pattern is structurally symmetric.
    lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_CHOLMOD;
  }
  Eigen::UmfPackLU<SparseMatrix> lu;
  SparseMatrix matrix;
  bool analyzed = false;
  bool factored = false;
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

namespace {
bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  if (!a.isCompressed() || !b.isCompressed()) return false;
  return std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.cols() + 1, b.outerIndexPtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros(), b.innerIndexPtr());
}
}  // namespace

bool SparseLu::factorize(const SparseMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw SizeMismatch("LU needs a square matrix");
  const bool reuse = impl_->analyzed && same_pattern(impl_->matrix, matrix);
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  impl_->factored = false;
  if (!reuse) {
    impl_->lu.analyzePattern(impl_->matrix);
    if (impl_->lu.info() != Eigen::Success) {
      impl_->analyzed = false;
      return false;
    }
    impl_->analyzed = true;
  }
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) return false;
  impl_->factored = true;
  return true;
}

Vector SparseLu::solve(const Vector& rhs) const {
  if (!impl_->factored) throw SingularMatrix("solve() called without a successful factorization");
  if (rhs.size() != impl_->matrix.rows()) throw SizeMismatch("right-hand side does not match the matrix");
  Vector x = impl_->lu.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  for (int step = 0; step < 2; ++step) {
    const Vector r = rhs - impl_->matrix * x;
    if (!(r.norm() > 1e-13 * scale)) break;
    x += impl_->lu.solve(r);
  }
  return x;
}

Vector lu_solve(const SparseMatrix& matrix, const Vector& rhs) {
  SparseLu lu;
  if (!lu.factorize(matrix)) throw SingularMatrix("sparse LU: matrix is singular");
  Vector x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularMatrix("sparse LU: non-finite solution");
  return x;
}

void NewtonOptions::validate() const {
  if (!(rtol >= 0.0)) throw ConfigError("solver.rtol must be >= 0");
  if (!(atol >= 0.0)) throw ConfigError("solver.atol must be >= 0");
  if (max_iters < 1) throw ConfigError("solver.max_iters >= 1 required");
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0)) {
    throw ConfigError("solver.ls_shrink must lie in (0, 1)");
  }
  if (!(line_search.min_alpha > 0.0)) throw ConfigError("solver.ls_min_alpha > 0 required");
  if (!(line_search.c >= 0.0 && line_search.c < 1.0)) throw ConfigError("solver.ls_c must lie in [0, 1)");
}

const char* linear_solver_name(LinearSolverKind kind) {
  switch (kind) {
    case LinearSolverKind::lu:
      return "lu";
    case LinearSolverKind::gmres:
      return "gmres";
    case LinearSolverKind::automatic:
      return "auto";
  }
  return "unknown";
}

LinearSolverKind parse_linear_solver(const std::string& name) {
  if (name == "lu") return LinearSolverKind::lu;
  if (name == "gmres") return LinearSolverKind::gmres;
  if (name == "auto") return LinearSolverKind::automatic;
  throw ConfigError("solver.linear_solver must be \"lu\", \"gmres\" or \"auto\", got \"" + name + "\"");
}

const char* failure_reason_name(FailureReason reason) {
  switch (reason) {
    case FailureReason::none:
      return "none";
    case FailureReason::max_iters:
      return "max-iters";
    case FailureReason::line_search_stall:
      return "line-search-stall";
    case FailureReason::singular_matrix:
      return "singular-matrix";
    case FailureReason::non_finite:
      return "non-finite";
  }
  return "unknown";
}

namespace {

// Residual norm, or NaN when the residual cannot be formed or is not finite.
double try_residual(const SlabAssembler& assembler, const SlabState& state, const TimeSlice& ic, Vector& r) {
  try {
    assembler.residual(state, ic, r);
  } catch (const SingularPotential&) {
    return std::nan("");
  }
  const double n = r.norm();
  return std::isfinite(n) ? n : std::nan("");
}

// Adapts SpectralPreconditioner to the interface Eigen's iterative solvers expect.
class SpectralRef {
 public:
  SpectralRef() = default;
  void bind(const SpectralPreconditioner* p) { p_ = p; }
  template <typename M>
  SpectralRef& analyzePattern(const M&) { return *this; }
  template <typename M>
  SpectralRef& factorize(const M&) { return *this; }
  template <typename M>
  SpectralRef& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() const { return p_ && p_->ready() ? Eigen::Success : Eigen::NumericalIssue; }
  template <typename V>
  Vector solve(const V& b) const { return p_->solve(b); }

 private:
  const SpectralPreconditioner* p_ = nullptr;
};

constexpr int kGmresRestart = 60;
constexpr int kGmresMaxIters = 600;
constexpr double kGmresTol = 1e-11;
// A step whose preconditioned residual is still above this is rejected.
constexpr double kGmresAccept = 1e-6;

// Newton step J dx = -r. `automatic` tries preconditioned GMRES first and
// falls back to the direct LU whenever the factorization fits.
class StepSolver {
 public:
  StepSolver(const SlabAssembler& assembler, LinearSolverKind kind) : assembler_(assembler) {
    const MeshSpec& mesh = assembler.mesh();
    const bool direct_fits = mesh.dims == Dims::d1p1 || assembler.pattern().dimension <= kDirectDofLimit;
    iterative_ = kind != LinearSolverKind::lu;
    direct_ = kind == LinearSolverKind::lu || (kind == LinearSolverKind::automatic && direct_fits);
    if (iterative_) {
      precond_ = std::make_unique<SpectralPreconditioner>(mesh, assembler.model());
      gmres_.set_restart(kGmresRestart);
      gmres_.setMaxIterations(kGmresMaxIters);
      gmres_.setTolerance(kGmresTol);
    }
  }

  // Empty result: the linear system could not be solved.
  std::optional<Vector> step(const SlabState& u, const SparseMatrix& jac, const Vector& r, int& krylov) {
    if (iterative_) {
      if (auto dx = krylov_step(u, jac, r, krylov)) return dx;
    }
    if (!direct_) return std::nullopt;
    if (!lu_.factorize(jac)) return std::nullopt;
    Vector dx = lu_.solve(-r);
    if (!dx.allFinite()) return std::nullopt;
    return dx;
  }

 private:
  std::optional<Vector> krylov_step(const SlabState& u, const SparseMatrix& jac, const Vector& r, int& krylov) {
    if (!precond_->update(assembler_.layer_mean_hessian(u))) return std::nullopt;
    gmres_.preconditioner().bind(precond_.get());
    gmres_.compute(jac);
    Vector dx = gmres_.solve(-r);
    krylov += static_cast<int>(gmres_.iterations());
    if (!dx.allFinite() || gmres_.info() == Eigen::NumericalIssue || !(gmres_.error() <= kGmresAccept)) {
      return std::nullopt;
    }
    return dx;
  }

  const SlabAssembler& assembler_;
  bool iterative_ = false;
  bool direct_ = false;
  SparseLu lu_;
  std::unique_ptr<SpectralPreconditioner> precond_;
  Eigen::GMRES<SparseMatrix, SpectralRef> gmres_;
};

}  // namespace

NewtonResult newton_solve(SlabState initial, const SlabAssembler& assembler, const TimeSlice& ic,
                          const NewtonOptions& opts) {
  opts.validate();
  NewtonResult out{std::move(initial), {}};
  auto& rep = out.report;
  SlabState& u = out.state;

  Vector r;
  double norm = u.allFinite() ? try_residual(assembler, u, ic, r) : std::nan("");
  if (std::isnan(norm)) {
    rep.failure_reason = FailureReason::non_finite;
    return out;
  }
  rep.residual_history.push_back(norm);
  const double tol = std::max(opts.rtol * norm, opts.atol);

  SparseMatrix jac = assembler.make_matrix();
  StepSolver solver(assembler, opts.linear_solver);
  Vector trial_r;
  for (;;) {
    if (norm <= tol) {
      rep.converged = true;
      return out;
    }
    if (rep.iterations >= opts.max_iters) {
      rep.failure_reason = FailureReason::max_iters;
      return out;
    }
    std::optional<Vector> solved;
    try {
      assembler.jacobian(u, jac);
      solved = solver.step(u, jac, r, rep.krylov_iterations);
    } catch (const SingularPotential&) {
      rep.failure_reason = FailureReason::non_finite;
      return out;
    }
    if (!solved) {
      rep.failure_reason = FailureReason::singular_matrix;
      return out;
    }
    const Vector& step = *solved;

    double alpha = 1.0;
    SlabState trial;
    double trial_norm = 0.0;
    if (opts.line_search.kind == LineSearchOptions::Kind::none) {
      trial = u + step;
      trial_norm = try_residual(assembler, trial, ic, trial_r);
      if (std::isnan(trial_norm)) {
        rep.failure_reason = FailureReason::non_finite;
        return out;
      }
    } else {
      for (;;) {
        trial = u + alpha * step;
        trial_norm = try_residual(assembler, trial, ic, trial_r);
        if (!std::isnan(trial_norm) && trial_norm <= (1.0 - opts.line_search.c * alpha) * norm) break;
        alpha *= opts.line_search.shrink;
        if (alpha < opts.line_search.min_alpha) {
          rep.failure_reason = FailureReason::line_search_stall;
          return out;
        }
      }
    }
    u = std::move(trial);
    r.swap(trial_r);
    norm = trial_norm;
    ++rep.iterations;
    rep.residual_history.push_back(norm);
  }
}

NewtonResult newton_solve(SlabState initial, const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode,
                          const TimeSlice& ic, const NewtonOptions& opts) {
  const SlabAssembler assembler(mesh, model, mode);
  return newton_solve(std::move(initial), assembler, ic, opts);
}

}  // namespace ghostfem
