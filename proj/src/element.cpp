#include "ghostfem/element.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghostfem {

namespace {

void check_index(Dims dims, int i) {
  if (i < 0 || i >= nodes_per_element(dims)) {
    throw std::out_of_range("local basis index " + std::to_string(i) + " out of range for " + dims_name(dims));
  }
}

// One-dimensional hat factor: 1 - s for the node at 0, s for the node at 1.
double hat(int node, double s) { return node == 0 ? 1.0 - s : s; }
double hat_slope(int node) { return node == 0 ? -1.0 : 1.0; }

}  // namespace

double basis_eval(Dims dims, int i, double xi, double tau, double zeta) {
  check_index(dims, i);
  const auto& n = kLocalNodes[i];
  const double v = hat(n.xi, xi) * hat(n.tau, tau);
  return dims == Dims::d1p1 ? v : v * hat(n.zeta, zeta);
}

std::array<double, 3> basis_grad(Dims dims, int i, double xi, double tau, double zeta, const ElementSpacing& h) {
  check_index(dims, i);
  const auto& n = kLocalNodes[i];
  const double fz = dims == Dims::d1p1 ? 1.0 : hat(n.zeta, zeta);
  std::array<double, 3> g{};
  g[0] = hat_slope(n.xi) * hat(n.tau, tau) * fz / h.hx;
  g[1] = hat(n.xi, xi) * hat_slope(n.tau) * fz / h.ht;
  g[2] = dims == Dims::d1p1 ? 0.0 : hat(n.xi, xi) * hat(n.tau, tau) * hat_slope(n.zeta) / h.hy;
  return g;
}

QuadratureRule gauss_legendre_unit(int n) {
  std::vector<double> x;
  std::vector<double> w;
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("Gauss-Legendre rule with " + std::to_string(n) + " points not tabulated");
  }
  QuadratureRule r;
  for (std::size_t k = 0; k < x.size(); ++k) {
    r.points.push_back(0.5 * (x[k] + 1.0));
    r.weights.push_back(0.5 * w[k]);
  }
  return r;
}

BasisTable tabulate_basis(Dims dims, int points_per_dim) {
  const auto rule = gauss_legendre_unit(points_per_dim);
  const int nz = dims == Dims::d1p1 ? 1 : points_per_dim;
  BasisTable table;
  table.n_nodes = nodes_per_element(dims);
  for (int kz = 0; kz < nz; ++kz) {
    for (int kt = 0; kt < points_per_dim; ++kt) {
      for (int kx = 0; kx < points_per_dim; ++kx) {
        const double xi = rule.points[kx];
        const double tau = rule.points[kt];
        const double zeta = dims == Dims::d1p1 ? 0.0 : rule.points[kz];
        double w = rule.weights[kx] * rule.weights[kt];
        if (dims == Dims::d2p1) w *= rule.weights[kz];
        table.points.push_back({xi, tau, zeta});
        table.weights.push_back(w);
        for (int a = 0; a < table.n_nodes; ++a) {
          table.values.push_back(basis_eval(dims, a, xi, tau, zeta));
        }
      }
    }
  }
  return table;
}

namespace {

ElementMatrices closed_form_1p1(const ElementSpacing& h) {
  ElementMatrices m;
  m.time.resize(4, 4);
  m.time << -2, -1, 1, 2,  //
      -1, -2, 2, 1,        //
      -1, -2, 2, 1,        //
      -2, -1, 1, 2;
  m.time *= h.hx / 12.0;

  m.space_x.resize(4, 4);
  m.space_x << 2, -2, -1, 1,  //
      -2, 2, 1, -1,           //
      -1, 1, 2, -2,           //
      1, -1, -2, 2;
  m.space_x *= h.ht / (6.0 * h.hx);

  m.mass.resize(4, 4);
  m.mass << 4, 2, 1, 2,  //
      2, 4, 2, 1,        //
      1, 2, 4, 2,        //
      2, 1, 2, 4;
  m.mass *= h.hx * h.ht / 36.0;

  m.space_y = Eigen::MatrixXd::Zero(4, 4);
  return m;
}

ElementMatrices quadrature_2p1(const ElementSpacing& h) {
  const int n = 8;
  const auto rule = gauss_legendre_unit(2);
  const double volume = h.hx * h.ht * h.hy;
  ElementMatrices m;
  m.time = Eigen::MatrixXd::Zero(n, n);
  m.space_x = Eigen::MatrixXd::Zero(n, n);
  m.space_y = Eigen::MatrixXd::Zero(n, n);
  m.mass = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t kz = 0; kz < rule.points.size(); ++kz) {
    for (std::size_t kt = 0; kt < rule.points.size(); ++kt) {
      for (std::size_t kx = 0; kx < rule.points.size(); ++kx) {
        const double xi = rule.points[kx];
        const double tau = rule.points[kt];
        const double zeta = rule.points[kz];
        const double w = rule.weights[kx] * rule.weights[kt] * rule.weights[kz] * volume;
        for (int a = 0; a < n; ++a) {
          const double pa = basis_eval(Dims::d2p1, a, xi, tau, zeta);
          const auto ga = basis_grad(Dims::d2p1, a, xi, tau, zeta, h);
          for (int b = 0; b < n; ++b) {
            const double pb = basis_eval(Dims::d2p1, b, xi, tau, zeta);
            const auto gb = basis_grad(Dims::d2p1, b, xi, tau, zeta, h);
            m.time(a, b) += w * pa * gb[1];
            m.space_x(a, b) += w * ga[0] * gb[0];
            m.space_y(a, b) += w * ga[2] * gb[2];
            m.mass(a, b) += w * pa * pb;
          }
        }
      }
    }
  }
  return m;
}

}  // namespace

ElementMatrices element_matrices(Dims dims, const ElementSpacing& h) {
  if (!(h.hx > 0.0) || !(h.ht > 0.0) || (dims == Dims::d2p1 && !(h.hy > 0.0))) {
    throw std::invalid_argument("element spacings must be positive");
  }
  return dims == Dims::d1p1 ? closed_form_1p1(h) : quadrature_2p1(h);
}

}  // namespace ghostfem
