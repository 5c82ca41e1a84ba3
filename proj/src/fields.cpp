#include "ghostfem/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghostfem/error.hpp"

namespace ghostfem {

TimeSlice TimeSlice::zeros(std::size_t n) {
  TimeSlice s;
  s.phi.assign(n, 0.0);
  s.u.assign(n, 0.0);
  s.chi.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

bool TimeSlice::consistent() const {
  return u.size() == phi.size() && chi.size() == phi.size() && v.size() == phi.size();
}

bool TimeSlice::all_finite() const {
  auto finite = [](const std::vector<double>& a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(phi) && finite(u) && finite(chi) && finite(v);
}

void require_slice_matches(const TimeSlice& slice, const MeshSpec& mesh) {
  if (!slice.consistent() || slice.size() != mesh.nodes_per_level()) {
    throw SizeMismatch("time slice has " + std::to_string(slice.size()) + " nodes, mesh level has " +
                       std::to_string(mesh.nodes_per_level()));
  }
}

TimeSlice extract_level(const SlabState& state, const MeshSpec& mesh, int it) {
  if (static_cast<std::size_t>(state.size()) != mesh.dof_count()) {
    throw SizeMismatch("slab state size " + std::to_string(state.size()) + " != " +
                       std::to_string(mesh.dof_count()));
  }
  if (it < 0 || it >= mesh.nt) throw std::out_of_range("temporal level out of range");
  const std::size_t n = mesh.nodes_per_level();
  TimeSlice s = TimeSlice::zeros(n);
  const std::size_t first = static_cast<std::size_t>(it) * n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t node = first + i;
    s.phi[i] = state[dof_index(node, Component::phi)];
    s.u[i] = state[dof_index(node, Component::u)];
    s.chi[i] = state[dof_index(node, Component::chi)];
    s.v[i] = state[dof_index(node, Component::v)];
  }
  return s;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace ghostfem
