#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "ghostfem/element.hpp"
#include "ghostfem/fields.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"

namespace ghostfem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class AssemblyMode { physical, mms };

/// Compressed-column sparsity of the slab Jacobian. Every pair of nodes that
/// share an element couples through a dense 4x4 block; rows are sorted within
/// each column.
struct SparsityPattern {
  std::size_t dimension = 0;
  std::vector<int> col_ptr;
  std::vector<int> row_idx;

  std::size_t nnz() const { return row_idx.size(); }
  bool contains(std::size_t row, std::size_t col) const;
  SparseMatrix make_matrix() const;  // all stored values zero
};

SparsityPattern sparsity_pattern(const MeshSpec& mesh);

/// Residual and Jacobian of the weak first-order system on one slab.
///
/// Test rows per node are (K1, K2, G1, G2):
///   K1 = int d_t u psi + grad phi . grad psi + m_phi^2 phi psi + dV/dphi psi [- F_phi psi]
///   K2 = int d_t phi psi - u psi
///   G1 = int d_t v psi + grad chi . grad psi + m_chi^2 chi psi + gamma dV/dchi psi [- F_chi psi]
///   G2 = int d_t chi psi - v psi
/// Linear terms come from the element matrices, potential terms from 3-point
/// Gauss quadrature per dimension. Rows of the first temporal level are
/// replaced by the strong initial-data constraint U - ic.
class SlabAssembler {
 public:
  SlabAssembler(const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode);

  Vector residual(const SlabState& state, const TimeSlice& ic) const;
  void residual(const SlabState& state, const TimeSlice& ic, Vector& out) const;

  SparseMatrix jacobian(const SlabState& state) const;
  /// `out` must carry this assembler's pattern (see make_matrix()).
  void jacobian(const SlabState& state, SparseMatrix& out) const;

  SparseMatrix make_matrix() const { return pattern_.make_matrix(); }

  /// Potential Hessian averaged over every quadrature point of each time
  /// layer, nt - 1 entries. Zero for the free theory.
  std::vector<PotentialHessian> layer_mean_hessian(const SlabState& state) const;

  const MeshSpec& mesh() const { return mesh_; }
  const ModelParams& model() const { return model_; }
  AssemblyMode mode() const { return mode_; }
  const SparsityPattern& pattern() const { return pattern_; }
  const ElementMatrices& element_matrices() const { return element_; }

  /// Number of leading degrees of freedom pinned to the initial data.
  std::size_t constrained_dofs() const { return 4 * mesh_.nodes_per_level(); }

 private:
  void check_sizes(const SlabState& state) const;
  std::size_t slot(std::size_t e, int a, int b, int row_comp, int col_comp) const;
  void build_linear_values();
  void build_forcing();

  MeshSpec mesh_;
  ModelParams model_;
  AssemblyMode mode_;
  int npe_;
  ElementMatrices element_;
  BasisTable quad_;
  double element_volume_;
  bool nonlinear_;

  SparsityPattern pattern_;
  std::vector<int> element_nodes_;          // npe per element
  std::vector<std::uint8_t> block_pos_;     // npe*npe per element: position of node a in node b's column blocks
  std::vector<int> node_block_base_;        // first value slot of node n's 4 columns
  std::vector<int> node_degree_;            // coupled nodes per node
  std::vector<double> linear_values_;       // linear Jacobian in pattern order, constraint rows = identity
  SparseMatrix linear_operator_;
  std::vector<double> forcing_;             // 2 * npe per element: integral of (F_phi, F_chi) psi_a
};

/// Convenience wrappers that build a throwaway assembler.
Vector form_residual(const SlabState& state, const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode,
                     const TimeSlice& ic);
SparseMatrix form_jacobian(const SlabState& state, const MeshSpec& mesh, const ModelParams& model,
                           AssemblyMode mode, const TimeSlice& ic);

}  // namespace ghostfem
