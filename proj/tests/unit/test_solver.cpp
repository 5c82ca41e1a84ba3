#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ghostfem/error.hpp"
#include "ghostfem/initdata.hpp"
#include "ghostfem/mms.hpp"
#include "ghostfem/solver.hpp"
#include "ghostfem/spectral.hpp"

using namespace ghostfem;

namespace {

MeshSpec small_mesh(Dims d = Dims::d1p1) {
  MeshSpec m;
  m.dims = d;
  m.nx = 12;
  m.ny = d == Dims::d2p1 ? 6 : 1;
  m.nt = 7;
  m.t_slab = 0.3;
  return m;
}

Vector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(SparseLu, IdentitySolve) {
  SparseMatrix id(5, 5);
  id.setIdentity();
  const Vector b = random_vector(5, 1);
  EXPECT_EQ((lu_solve(id, b) - b).norm(), 0.0);
}

TEST(SparseLu, SpdInSlabPatternMatchesDenseSolve) {
  // 4x4 mesh pattern has 48 unknowns; pad to a 50 x 50 system.
  MeshSpec m;
  m.nx = 4;
  m.nt = 3;
  const SparsityPattern p = sparsity_pattern(m);
  const Eigen::Index n = static_cast<Eigen::Index>(p.dimension);
  SparseMatrix a = p.make_matrix();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (it.row() <= c) it.valueRef() = u(rng);
    }
  }
  SparseMatrix spd = SparseMatrix(a.triangularView<Eigen::Lower>()) * SparseMatrix(a.triangularView<Eigen::Lower>()).transpose();
  SparseMatrix shift(n, n);
  shift.setIdentity();
  spd += static_cast<double>(n) * shift;
  const Vector b = random_vector(n, 2);
  const Vector dense = Eigen::MatrixXd(spd).lu().solve(b);
  EXPECT_LT((lu_solve(spd, b) - dense).norm() / dense.norm(), 1e-10);
}

TEST(SparseLu, SingularMatrixReported) {
  SparseMatrix a(3, 3);
  a.insert(0, 0) = 1.0;
  a.insert(2, 2) = 1.0;
  a.insert(0, 1) = 2.0;
  a.makeCompressed();
  SparseLu lu;
  EXPECT_FALSE(lu.factorize(a));
  EXPECT_THROW(lu.solve(Vector::Ones(3)), SingularMatrix);
  EXPECT_THROW(lu_solve(a, Vector::Ones(3)), SingularMatrix);
}

TEST(SparseLu, RefactorizeWithSamePattern) {
  SparseMatrix a(2, 2);
  a.insert(0, 0) = 2.0;
  a.insert(1, 1) = 4.0;
  a.makeCompressed();
  SparseLu lu;
  ASSERT_TRUE(lu.factorize(a));
  EXPECT_NEAR(lu.solve(Vector::Ones(2))[1], 0.25, 1e-15);
  a.coeffRef(1, 1) = 8.0;
  ASSERT_TRUE(lu.factorize(a));
  EXPECT_NEAR(lu.solve(Vector::Ones(2))[1], 0.125, 1e-15);
}

TEST(NewtonOptions, Validation) {
  NewtonOptions o;
  EXPECT_NO_THROW(o.validate());
  o.rtol = -1.0;
  EXPECT_THROW(o.validate(), ConfigError);
  o = NewtonOptions{};
  o.max_iters = 0;
  EXPECT_THROW(o.validate(), ConfigError);
  o = NewtonOptions{};
  o.line_search.shrink = 1.0;
  EXPECT_THROW(o.validate(), ConfigError);
  EXPECT_EQ(parse_linear_solver("gmres"), LinearSolverKind::gmres);
  EXPECT_STREQ(linear_solver_name(LinearSolverKind::automatic), "auto");
  EXPECT_THROW(parse_linear_solver("cg"), ConfigError);
}

TEST(Newton, LinearProblemTakesOneStep) {
  const MeshSpec m = small_mesh();
  ModelParams model;
  model.potential = NoPotential{};
  const TimeSlice ic = build_slice(PlaneWave{}, m, model);
  for (auto kind : {LinearSolverKind::lu, LinearSolverKind::gmres}) {
    NewtonOptions o;
    o.linear_solver = kind;
    const auto r = newton_solve(SlabState::Zero(m.dof_count()), m, model, AssemblyMode::physical, ic, o);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1);
    EXPECT_EQ(r.report.failure_reason, FailureReason::none);
  }
}

TEST(Newton, ExactStartTakesNoStep) {
  const MeshSpec m = small_mesh();
  ModelParams model;
  model.potential = NoPotential{};
  const auto r = newton_solve(SlabState::Zero(m.dof_count()), m, model, AssemblyMode::physical,
                              TimeSlice::zeros(m.nodes_per_level()), NewtonOptions{});
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  EXPECT_EQ(r.report.residual_history.size(), 1u);
}

TEST(Newton, PlaneWaveSlabResidualDecreases) {
  const MeshSpec m;  // default 100 x 101
  const ModelParams model;
  const TimeSlice ic = build_slice(PlaneWave{0.6, 1.0}, m, model);
  const auto r = newton_solve(seed_slab(ic, m), m, model, AssemblyMode::physical, ic, NewtonOptions{});
  ASSERT_TRUE(r.report.converged);
  const auto& h = r.report.residual_history;
  ASSERT_GE(h.size(), 2u);
  for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LT(h[k], h[k - 1]);
  EXPECT_LE(h.back(), std::max(1e-8 * h.front(), 1e-12));
}

TEST(Newton, KrylovAndDirectAgree) {
  for (Dims d : {Dims::d1p1, Dims::d2p1}) {
    const MeshSpec m = small_mesh(d);
    const ModelParams model;
    const TimeSlice ic = build_slice(PlaneWave{1.0, 1.0}, m, model);
    NewtonOptions lu, kr;
    lu.linear_solver = LinearSolverKind::lu;
    kr.linear_solver = LinearSolverKind::gmres;
    const auto a = newton_solve(seed_slab(ic, m), m, model, AssemblyMode::physical, ic, lu);
    const auto b = newton_solve(seed_slab(ic, m), m, model, AssemblyMode::physical, ic, kr);
    ASSERT_TRUE(a.report.converged);
    ASSERT_TRUE(b.report.converged);
    EXPECT_GT(b.report.krylov_iterations, 0);
    EXPECT_EQ(a.report.krylov_iterations, 0);
    EXPECT_LT((a.state - b.state).norm() / a.state.norm(), 1e-9);
  }
}

TEST(Newton, NonFiniteStartIsReported) {
  const MeshSpec m = small_mesh();
  SlabState u = SlabState::Zero(m.dof_count());
  u[7] = std::nan("");
  const auto r = newton_solve(u, m, ModelParams{}, AssemblyMode::physical, TimeSlice::zeros(m.nodes_per_level()),
                              NewtonOptions{});
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.failure_reason, FailureReason::non_finite);
}

TEST(Newton, IterationCapIsReported) {
  const MeshSpec m = small_mesh();
  const ModelParams model;
  const TimeSlice ic = build_slice(PlaneWave{1.0, 1.0}, m, model);
  NewtonOptions o;
  o.max_iters = 1;
  o.rtol = 1e-14;
  o.atol = 0.0;
  const auto r = newton_solve(seed_slab(ic, m), m, model, AssemblyMode::physical, ic, o);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.failure_reason, FailureReason::max_iters);
  EXPECT_EQ(r.report.iterations, 1);
}

TEST(Newton, LargeDataBlowsUpWithoutThrowing) {
  const MeshSpec m = small_mesh();
  const ModelParams model;
  const TimeSlice ic = build_slice(PlaneWave{40.0, 1.0}, m, model);
  NewtonOptions o;
  o.max_iters = 20;
  const auto r = newton_solve(seed_slab(ic, m), m, model, AssemblyMode::physical, ic, o);
  EXPECT_FALSE(r.report.converged);
  EXPECT_NE(r.report.failure_reason, FailureReason::none);
}

TEST(Spectral, ExactInverseForFreeTheory) {
  for (Dims d : {Dims::d1p1, Dims::d2p1}) {
    const MeshSpec m = small_mesh(d);
    ModelParams model;
    model.potential = NoPotential{};
    model.m_phi = 0.4;
    model.m_chi = 1.7;
    const SlabAssembler a(m, model, AssemblyMode::physical);
    const SlabState u = random_vector(static_cast<Eigen::Index>(m.dof_count()), 3);
    SpectralPreconditioner p(m, model);
    ASSERT_TRUE(p.update(a.layer_mean_hessian(u)));
    const Vector x = random_vector(u.size(), 4);
    EXPECT_LT((p.solve(a.jacobian(u) * x) - x).norm() / x.norm(), 1e-12);
  }
}

TEST(Spectral, ExactForSpatiallyUniformFields) {
  const MeshSpec m = small_mesh(Dims::d2p1);
  const ModelParams model;
  const SlabAssembler a(m, model, AssemblyMode::physical);
  SlabState u = SlabState::Zero(static_cast<Eigen::Index>(m.dof_count()));
  for (int it = 0; it < m.nt; ++it) {
    for (std::size_t s = 0; s < m.nodes_per_level(); ++s) {
      const std::size_t n = it * m.nodes_per_level() + s;
      u[4 * n] = 0.3 + 0.1 * it;
      u[4 * n + 2] = -0.2 * it;
    }
  }
  SpectralPreconditioner p(m, model);
  ASSERT_TRUE(p.update(a.layer_mean_hessian(u)));
  const Vector x = random_vector(u.size(), 5);
  // Linear-in-time fields have a varying Hessian inside each layer, so only
  // the constant part is exact; the residual must still be small.
  EXPECT_LT((p.solve(a.jacobian(u) * x) - x).norm() / x.norm(), 1e-2);
  EXPECT_THROW(p.update({}), SizeMismatch);
}
