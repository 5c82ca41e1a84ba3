#pragma once

#include <cstddef>
#include <string>

namespace ghostfem {

enum class Dims { d1p1, d2p1 };

const char* dims_name(Dims dims);
Dims parse_dims(const std::string& text);

/// Structured spacetime slab. Space is periodic with nx (ny) nodes over the
/// length L, so h_x = L / nx. Time is not periodic: nt levels span T_slab,
/// h_t = T_slab / (nt - 1).
struct MeshSpec {
  Dims dims = Dims::d1p1;
  int nx = 100;
  int ny = 1;  // ignored in 1+1
  int nt = 101;
  double length = 1.0;
  double t_slab = 1.0;
  double x0 = 0.0;  // left edge of the periodic box, also used for y

  double hx() const { return length / nx; }
  double hy() const { return length / ny; }
  double ht() const { return t_slab / (nt - 1); }

  int spatial_nx() const { return nx; }
  int spatial_ny() const { return dims == Dims::d2p1 ? ny : 1; }
  std::size_t nodes_per_level() const;
  std::size_t node_count() const { return nodes_per_level() * static_cast<std::size_t>(nt); }
  std::size_t dof_count() const { return 4 * node_count(); }
  std::size_t element_count() const { return nodes_per_level() * static_cast<std::size_t>(nt - 1); }
  int nodes_per_element() const { return dims == Dims::d1p1 ? 4 : 8; }

  double x(int ix) const { return x0 + ix * hx(); }
  double y(int iy) const { return x0 + iy * hy(); }
  double t(int it) const { return it * ht(); }  // relative to the slab start

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  bool operator==(const MeshSpec&) const = default;
};

/// Time-major flat node index; spatial indices wrap, the temporal one must be in [0, nt).
std::size_t global_node_index(const MeshSpec& mesh, long ix, long it);
std::size_t global_node_index(const MeshSpec& mesh, long ix, long iy, long it);

/// Unknowns carried by every node, interleaved in this order.
enum class Component : int { phi = 0, u = 1, chi = 2, v = 3 };

inline std::size_t dof_index(std::size_t node, Component c) { return 4 * node + static_cast<std::size_t>(c); }

}  // namespace ghostfem
