#include "ghostfem/assembly.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "ghostfem/error.hpp"
#include "ghostfem/manufactured.hpp"

namespace ghostfem {

namespace {

constexpr int kQuadraturePoints = 3;

// Element nodes in time-major element order (x fastest, then y, then t).
std::vector<int> build_element_nodes(const MeshSpec& mesh) {
  const int npe = mesh.nodes_per_element();
  const int ny = mesh.spatial_ny();
  std::vector<int> nodes;
  nodes.reserve(mesh.element_count() * npe);
  for (int it = 0; it < mesh.nt - 1; ++it) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < mesh.nx; ++ix) {
        for (int a = 0; a < npe; ++a) {
          const auto& ln = kLocalNodes[a];
          nodes.push_back(static_cast<int>(global_node_index(mesh, ix + ln.xi, iy + ln.zeta, it + ln.tau)));
        }
      }
    }
  }
  return nodes;
}

std::vector<std::vector<int>> build_node_neighbors(const MeshSpec& mesh, const std::vector<int>& element_nodes) {
  const int npe = mesh.nodes_per_element();
  std::vector<std::vector<int>> nbr(mesh.node_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const int* en = &element_nodes[e * npe];
    for (int a = 0; a < npe; ++a) {
      for (int b = 0; b < npe; ++b) nbr[en[b]].push_back(en[a]);
    }
  }
  for (auto& list : nbr) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nbr;
}

SparsityPattern pattern_from_neighbors(const std::vector<std::vector<int>>& nbr) {
  SparsityPattern p;
  p.dimension = 4 * nbr.size();
  p.col_ptr.reserve(p.dimension + 1);
  p.col_ptr.push_back(0);
  for (const auto& list : nbr) {
    for (int c = 0; c < 4; ++c) {
      for (int m : list) {
        for (int r = 0; r < 4; ++r) p.row_idx.push_back(4 * m + r);
      }
      p.col_ptr.push_back(static_cast<int>(p.row_idx.size()));
    }
  }
  return p;
}

}  // namespace

bool SparsityPattern::contains(std::size_t row, std::size_t col) const {
  if (col >= dimension) return false;
  const auto first = row_idx.begin() + col_ptr[col];
  const auto last = row_idx.begin() + col_ptr[col + 1];
  return std::binary_search(first, last, static_cast<int>(row));
}

SparseMatrix SparsityPattern::make_matrix() const {
  const auto n = static_cast<Eigen::Index>(dimension);
  SparseMatrix m(n, n);
  m.resizeNonZeros(static_cast<Eigen::Index>(nnz()));
  std::copy(col_ptr.begin(), col_ptr.end(), m.outerIndexPtr());
  std::copy(row_idx.begin(), row_idx.end(), m.innerIndexPtr());
  std::fill(m.valuePtr(), m.valuePtr() + nnz(), 0.0);
  return m;
}

SparsityPattern sparsity_pattern(const MeshSpec& mesh) {
  mesh.validate();
  return pattern_from_neighbors(build_node_neighbors(mesh, build_element_nodes(mesh)));
}

SlabAssembler::SlabAssembler(const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode)
    : mesh_(mesh), model_(model), mode_(mode), npe_(mesh.nodes_per_element()) {
  mesh_.validate();
  model_.validate();
  const bool mms_potential = std::holds_alternative<MmsPotential>(model_.potential);
  if (mode_ == AssemblyMode::mms && !mms_potential) {
    throw ConfigError("manufactured-solution assembly requires the mms potential");
  }
  if (mode_ == AssemblyMode::physical && mms_potential) {
    throw ConfigError("the mms potential is only valid in manufactured-solution runs");
  }

  const ElementSpacing h{mesh_.hx(), mesh_.ht(), mesh_.hy()};
  element_ = ghostfem::element_matrices(mesh_.dims, h);
  quad_ = tabulate_basis(mesh_.dims, kQuadraturePoints);
  element_volume_ = h.hx * h.ht * (mesh_.dims == Dims::d2p1 ? h.hy : 1.0);
  nonlinear_ = has_nonlinearity(model_.potential);

  element_nodes_ = build_element_nodes(mesh_);
  const auto nbr = build_node_neighbors(mesh_, element_nodes_);
  pattern_ = pattern_from_neighbors(nbr);

  node_block_base_.resize(nbr.size());
  node_degree_.resize(nbr.size());
  for (std::size_t n = 0; n < nbr.size(); ++n) {
    node_block_base_[n] = pattern_.col_ptr[4 * n];
    node_degree_[n] = static_cast<int>(nbr[n].size());
  }

  const std::size_t ne = mesh_.element_count();
  block_pos_.resize(ne * npe_ * npe_);
  for (std::size_t e = 0; e < ne; ++e) {
    const int* en = &element_nodes_[e * npe_];
    for (int a = 0; a < npe_; ++a) {
      for (int b = 0; b < npe_; ++b) {
        const auto& list = nbr[en[b]];
        const auto it = std::lower_bound(list.begin(), list.end(), en[a]);
        block_pos_[(e * npe_ + a) * npe_ + b] = static_cast<std::uint8_t>(it - list.begin());
      }
    }
  }

  build_linear_values();
  if (mode_ == AssemblyMode::mms) build_forcing();
}

std::size_t SlabAssembler::slot(std::size_t e, int a, int b, int row_comp, int col_comp) const {
  const int nb = element_nodes_[e * npe_ + b];
  const int pos = block_pos_[(e * npe_ + a) * npe_ + b];
  return static_cast<std::size_t>(node_block_base_[nb] + col_comp * 4 * node_degree_[nb] + 4 * pos + row_comp);
}

void SlabAssembler::build_linear_values() {
  linear_values_.assign(pattern_.nnz(), 0.0);
  const auto& T = element_.time;
  const Eigen::MatrixXd S = element_.space_x + element_.space_y;
  const auto& M = element_.mass;
  const double m2_phi = model_.m_phi * model_.m_phi;
  const double m2_chi = model_.m_chi * model_.m_chi;
  const std::size_t npl = mesh_.nodes_per_level();

  constexpr int kPhi = 0, kU = 1, kChi = 2, kV = 3;
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const int* en = &element_nodes_[e * npe_];
    for (int a = 0; a < npe_; ++a) {
      if (static_cast<std::size_t>(en[a]) < npl) continue;  // constrained test row
      for (int b = 0; b < npe_; ++b) {
        linear_values_[slot(e, a, b, kPhi, kPhi)] += S(a, b) + m2_phi * M(a, b);
        linear_values_[slot(e, a, b, kPhi, kU)] += T(a, b);
        linear_values_[slot(e, a, b, kU, kPhi)] += T(a, b);
        linear_values_[slot(e, a, b, kU, kU)] -= M(a, b);
        linear_values_[slot(e, a, b, kChi, kChi)] += S(a, b) + m2_chi * M(a, b);
        linear_values_[slot(e, a, b, kChi, kV)] += T(a, b);
        linear_values_[slot(e, a, b, kV, kChi)] += T(a, b);
        linear_values_[slot(e, a, b, kV, kV)] -= M(a, b);
      }
    }
  }
  for (std::size_t n = 0; n < npl; ++n) {
    for (int c = 0; c < 4; ++c) {
      const std::size_t col = 4 * n + c;
      const auto first = pattern_.row_idx.begin() + pattern_.col_ptr[col];
      const auto last = pattern_.row_idx.begin() + pattern_.col_ptr[col + 1];
      const auto it = std::lower_bound(first, last, static_cast<int>(col));
      linear_values_[it - pattern_.row_idx.begin()] = 1.0;
    }
  }
  linear_operator_ = pattern_.make_matrix();
  std::copy(linear_values_.begin(), linear_values_.end(), linear_operator_.valuePtr());
}

void SlabAssembler::build_forcing() {
  const std::size_t ne = mesh_.element_count();
  forcing_.assign(ne * npe_ * 2, 0.0);
  const int ny = mesh_.spatial_ny();
  const double hx = mesh_.hx(), hy = mesh_.hy(), ht = mesh_.ht();
  std::size_t e = 0;
  for (int it = 0; it < mesh_.nt - 1; ++it) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < mesh_.nx; ++ix, ++e) {
        double* fe = &forcing_[e * npe_ * 2];
        for (std::size_t q = 0; q < quad_.size(); ++q) {
          const auto& p = quad_.points[q];
          const double x = mesh_.x0 + (ix + p[0]) * hx;
          const double t = (it + p[1]) * ht;
          const double y = mesh_.x0 + (iy + p[2]) * hy;
          const auto f = mms::forcing(mesh_.dims, x, t, y, model_);
          const double w = quad_.weights[q] * element_volume_;
          for (int a = 0; a < npe_; ++a) {
            const double psi = quad_.value(q, a);
            fe[2 * a] += w * f.f_phi * psi;
            fe[2 * a + 1] += w * f.f_chi * psi;
          }
        }
      }
    }
  }
}

void SlabAssembler::check_sizes(const SlabState& state) const {
  if (static_cast<std::size_t>(state.size()) != mesh_.dof_count()) {
    throw SizeMismatch("slab state has " + std::to_string(state.size()) + " entries, mesh needs " +
                       std::to_string(mesh_.dof_count()));
  }
}

Vector SlabAssembler::residual(const SlabState& state, const TimeSlice& ic) const {
  Vector r;
  residual(state, ic, r);
  return r;
}

void SlabAssembler::residual(const SlabState& state, const TimeSlice& ic, Vector& out) const {
  check_sizes(state);
  require_slice_matches(ic, mesh_);
  out.noalias() = linear_operator_ * state;

  const std::size_t npl = mesh_.nodes_per_level();
  for (std::size_t n = 0; n < npl; ++n) {
    out[4 * n + 0] -= ic.phi[n];
    out[4 * n + 1] -= ic.u[n];
    out[4 * n + 2] -= ic.chi[n];
    out[4 * n + 3] -= ic.v[n];
  }

  const std::size_t ne = mesh_.element_count();
  if (mode_ == AssemblyMode::mms) {
    for (std::size_t e = 0; e < ne; ++e) {
      const int* en = &element_nodes_[e * npe_];
      const double* fe = &forcing_[e * npe_ * 2];
      for (int a = 0; a < npe_; ++a) {
        if (static_cast<std::size_t>(en[a]) < npl) continue;
        out[4 * en[a] + 0] -= fe[2 * a];
        out[4 * en[a] + 2] -= fe[2 * a + 1];
      }
    }
  }

  if (!nonlinear_) return;
  const double gamma = model_.gamma;
  std::array<double, 8> phi{}, chi{}, r_phi{}, r_chi{};
  for (std::size_t e = 0; e < ne; ++e) {
    const int* en = &element_nodes_[e * npe_];
    for (int b = 0; b < npe_; ++b) {
      phi[b] = state[4 * en[b] + 0];
      chi[b] = state[4 * en[b] + 2];
    }
    r_phi.fill(0.0);
    r_chi.fill(0.0);
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      double pq = 0.0, cq = 0.0;
      for (int b = 0; b < npe_; ++b) {
        pq += quad_.value(q, b) * phi[b];
        cq += quad_.value(q, b) * chi[b];
      }
      const auto g = potential_grad(model_.potential, pq, cq);
      const double w = quad_.weights[q] * element_volume_;
      for (int a = 0; a < npe_; ++a) {
        r_phi[a] += w * g.d_phi * quad_.value(q, a);
        r_chi[a] += w * gamma * g.d_chi * quad_.value(q, a);
      }
    }
    for (int a = 0; a < npe_; ++a) {
      if (static_cast<std::size_t>(en[a]) < npl) continue;
      out[4 * en[a] + 0] += r_phi[a];
      out[4 * en[a] + 2] += r_chi[a];
    }
  }
}

SparseMatrix SlabAssembler::jacobian(const SlabState& state) const {
  SparseMatrix j = make_matrix();
  jacobian(state, j);
  return j;
}

void SlabAssembler::jacobian(const SlabState& state, SparseMatrix& out) const {
  check_sizes(state);
  if (static_cast<std::size_t>(out.nonZeros()) != pattern_.nnz() || !out.isCompressed()) {
    throw SizeMismatch("jacobian storage does not carry the slab sparsity pattern");
  }
  std::copy(linear_values_.begin(), linear_values_.end(), out.valuePtr());
  if (!nonlinear_) return;

  double* values = out.valuePtr();
  const std::size_t npl = mesh_.nodes_per_level();
  const double gamma = model_.gamma;
  constexpr int kPhi = 0, kChi = 2;
  std::array<double, 8> phi{}, chi{};
  std::array<double, 64> h_pp{}, h_pc{}, h_cc{};
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const int* en = &element_nodes_[e * npe_];
    for (int b = 0; b < npe_; ++b) {
      phi[b] = state[4 * en[b] + 0];
      chi[b] = state[4 * en[b] + 2];
    }
    h_pp.fill(0.0);
    h_pc.fill(0.0);
    h_cc.fill(0.0);
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      double pq = 0.0, cq = 0.0;
      for (int b = 0; b < npe_; ++b) {
        pq += quad_.value(q, b) * phi[b];
        cq += quad_.value(q, b) * chi[b];
      }
      const auto hs = potential_hess(model_.potential, pq, cq);
      const double w = quad_.weights[q] * element_volume_;
      for (int a = 0; a < npe_; ++a) {
        const double wa = w * quad_.value(q, a);
        for (int b = 0; b < npe_; ++b) {
          const double wab = wa * quad_.value(q, b);
          h_pp[a * npe_ + b] += wab * hs.phi_phi;
          h_pc[a * npe_ + b] += wab * hs.phi_chi;
          h_cc[a * npe_ + b] += wab * hs.chi_chi;
        }
      }
    }
    for (int a = 0; a < npe_; ++a) {
      if (static_cast<std::size_t>(en[a]) < npl) continue;
      for (int b = 0; b < npe_; ++b) {
        const int ab = a * npe_ + b;
        values[slot(e, a, b, kPhi, kPhi)] += h_pp[ab];
        values[slot(e, a, b, kPhi, kChi)] += h_pc[ab];
        values[slot(e, a, b, kChi, kPhi)] += gamma * h_pc[ab];
        values[slot(e, a, b, kChi, kChi)] += gamma * h_cc[ab];
      }
    }
  }
}

std::vector<PotentialHessian> SlabAssembler::layer_mean_hessian(const SlabState& state) const {
  check_sizes(state);
  const std::size_t npl = mesh_.nodes_per_level();
  std::vector<PotentialHessian> out(static_cast<std::size_t>(mesh_.nt - 1));
  if (!nonlinear_) return out;
  std::array<double, 8> phi{}, chi{};
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const int* en = &element_nodes_[e * npe_];
    for (int b = 0; b < npe_; ++b) {
      phi[b] = state[4 * en[b] + 0];
      chi[b] = state[4 * en[b] + 2];
    }
    PotentialHessian& acc = out[e / npl];
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      double pq = 0.0, cq = 0.0;
      for (int b = 0; b < npe_; ++b) {
        pq += quad_.value(q, b) * phi[b];
        cq += quad_.value(q, b) * chi[b];
      }
      const auto hs = potential_hess(model_.potential, pq, cq);
      acc.phi_phi += quad_.weights[q] * hs.phi_phi;
      acc.phi_chi += quad_.weights[q] * hs.phi_chi;
      acc.chi_chi += quad_.weights[q] * hs.chi_chi;
    }
  }
  double wsum = 0.0;
  for (double w : quad_.weights) wsum += w;
  const double scale = 1.0 / (wsum * static_cast<double>(npl));
  for (auto& h : out) {
    h.phi_phi *= scale;
    h.phi_chi *= scale;
    h.chi_chi *= scale;
  }
  return out;
}

Vector form_residual(const SlabState& state, const MeshSpec& mesh, const ModelParams& model, AssemblyMode mode,
                     const TimeSlice& ic) {
  return SlabAssembler(mesh, model, mode).residual(state, ic);
}

SparseMatrix form_jacobian(const SlabState& state, const MeshSpec& mesh, const ModelParams& model,
                           AssemblyMode mode, const TimeSlice& ic) {
  require_slice_matches(ic, mesh);
  return SlabAssembler(mesh, model, mode).jacobian(state);
}

}  // namespace ghostfem
