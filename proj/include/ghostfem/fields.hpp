#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "ghostfem/mesh.hpp"

namespace ghostfem {

using Vector = Eigen::VectorXd;

/// Full nodal unknown vector of one slab: 4 * node_count entries, node-major,
/// (phi, u, chi, v) interleaved per node, nodes time-major.
using SlabState = Vector;

/// (phi, u, chi, v) on one temporal level, u = d_t phi and v = d_t chi.
/// Arrays run over the spatial nodes with x fastest.
struct TimeSlice {
  std::vector<double> phi;
  std::vector<double> u;
  std::vector<double> chi;
  std::vector<double> v;

  static TimeSlice zeros(std::size_t n);

  std::size_t size() const { return phi.size(); }
  bool consistent() const;
  bool all_finite() const;

  bool operator==(const TimeSlice&) const = default;
};

/// Copies temporal level `it` out of a slab state.
TimeSlice extract_level(const SlabState& state, const MeshSpec& mesh, int it);

/// Throws SizeMismatch unless the slice has one entry per spatial node of the mesh.
void require_slice_matches(const TimeSlice& slice, const MeshSpec& mesh);

bool all_finite(const Vector& v);

}  // namespace ghostfem
