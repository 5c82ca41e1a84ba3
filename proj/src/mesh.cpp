#include "ghostfem/mesh.hpp"

#include <cmath>

#include "ghostfem/error.hpp"

namespace ghostfem {

const char* dims_name(Dims dims) { return dims == Dims::d1p1 ? "1+1" : "2+1"; }

Dims parse_dims(const std::string& text) {
  if (text == "1+1") return Dims::d1p1;
  if (text == "2+1") return Dims::d2p1;
  throw ConfigError("dims must be \"1+1\" or \"2+1\", got \"" + text + "\"");
}

std::size_t MeshSpec::nodes_per_level() const {
  return static_cast<std::size_t>(nx) * static_cast<std::size_t>(spatial_ny());
}

void MeshSpec::validate() const {
  if (nx < 3) throw ConfigError("mesh.nx >= 3 required");
  if (dims == Dims::d2p1 && ny < 3) throw ConfigError("mesh.ny >= 3 required in 2+1");
  if (nt < 2) throw ConfigError("mesh.nt >= 2 required");
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("mesh.L > 0 required");
  if (!(t_slab > 0.0) || !std::isfinite(t_slab)) throw ConfigError("mesh.T_slab > 0 required");
  if (!std::isfinite(x0)) throw ConfigError("mesh.x0 must be finite");
}

namespace {
long wrap(long i, long n) {
  const long r = i % n;
  return r < 0 ? r + n : r;
}
}  // namespace

std::size_t global_node_index(const MeshSpec& mesh, long ix, long iy, long it) {
  if (it < 0 || it >= mesh.nt) {
    throw std::out_of_range("temporal index " + std::to_string(it) + " outside [0, " + std::to_string(mesh.nt) +
                            ")");
  }
  const long nx = mesh.nx;
  const long ny = mesh.spatial_ny();
  return static_cast<std::size_t>((it * ny + wrap(iy, ny)) * nx + wrap(ix, nx));
}

std::size_t global_node_index(const MeshSpec& mesh, long ix, long it) { return global_node_index(mesh, ix, 0, it); }

}  // namespace ghostfem
