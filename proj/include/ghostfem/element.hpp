#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ghostfem/mesh.hpp"

namespace ghostfem {

/// Local nodes are numbered counter-clockwise in the (x, t) plane:
/// 0:(0,0) 1:(h_x,0) 2:(h_x,h_t) 3:(0,h_t). In 2+1 nodes 4..7 repeat the
/// pattern on the y = h_y face.
struct LocalNode {
  int xi;
  int tau;
  int zeta;
};

inline constexpr std::array<LocalNode, 8> kLocalNodes{{
    {0, 0, 0},
    {1, 0, 0},
    {1, 1, 0},
    {0, 1, 0},
    {0, 0, 1},
    {1, 0, 1},
    {1, 1, 1},
    {0, 1, 1},
}};

inline int nodes_per_element(Dims dims) { return dims == Dims::d1p1 ? 4 : 8; }

struct ElementSpacing {
  double hx = 1.0;
  double ht = 1.0;
  double hy = 1.0;
};

/// Bilinear (1+1) or trilinear (2+1) basis function i (0-based) at unit coordinates.
/// zeta is ignored in 1+1. Throws std::out_of_range for a bad index.
double basis_eval(Dims dims, int i, double xi, double tau, double zeta = 0.0);

/// Physical gradient of basis function i, ordered (d/dx, d/dt, d/dy); d/dy is 0 in 1+1.
std::array<double, 3> basis_grad(Dims dims, int i, double xi, double tau, double zeta, const ElementSpacing& h);

/// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre_unit(int n);

/// Tensor-product quadrature over the reference element with basis values
/// tabulated at every point. weights[q] sums to 1 over q; multiply by the
/// element volume to integrate.
struct BasisTable {
  int n_nodes = 0;
  std::vector<std::array<double, 3>> points;  // (xi, tau, zeta)
  std::vector<double> weights;
  std::vector<double> values;  // values[q * n_nodes + a]

  std::size_t size() const { return weights.size(); }
  double value(std::size_t q, int a) const { return values[q * n_nodes + a]; }
};

BasisTable tabulate_basis(Dims dims, int points_per_dim);

/// Element stiffness matrices, row index = test function, column = trial:
///   time(a, b)    = integral of psi_a d_t psi_b
///   space_x(a, b) = integral of d_x psi_a d_x psi_b
///   space_y(a, b) = integral of d_y psi_a d_y psi_b   (2+1 only, zero otherwise)
///   mass(a, b)    = integral of psi_a psi_b
struct ElementMatrices {
  Eigen::MatrixXd time;
  Eigen::MatrixXd space_x;
  Eigen::MatrixXd space_y;
  Eigen::MatrixXd mass;
};

/// 1+1 uses the hard-coded closed forms; 2+1 integrates the trilinear
/// products with 2-point Gauss rules, which is exact for them.
ElementMatrices element_matrices(Dims dims, const ElementSpacing& h);

}  // namespace ghostfem
