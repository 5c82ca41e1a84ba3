#include "ghostfem/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace ghostfem::mms {

using std::numbers::pi;

ExactValues exact_solution(Dims dims, double x, double t, double y) {
  const double space = dims == Dims::d1p1 ? std::cos(pi * x) : std::cos(pi * x) * std::cos(pi * y);
  const double ct = std::cos(pi * t);
  const double st = std::sin(pi * t);
  return {1.0 + space * ct, 1.0 + space * st, -pi * space * st, pi * space * ct};
}

ModelParams mms_model(double lambda) {
  ModelParams m;
  m.m_phi = 1.0;
  m.m_chi = 1.0;
  m.gamma = -1;
  m.potential = MmsPotential{lambda};
  return m;
}

ForcingValues forcing(Dims dims, double x, double t, double y, const ModelParams& model) {
  const auto e = exact_solution(dims, x, t, y);
  // Wave operator of the oscillating part: zero in 1+1, pi^2 (f - 1) in 2+1
  // because the extra spatial factor doubles the Laplacian.
  const double wave_phi = dims == Dims::d1p1 ? 0.0 : pi * pi * (e.phi - 1.0);
  const double wave_chi = dims == Dims::d1p1 ? 0.0 : pi * pi * (e.chi - 1.0);
  const auto g = potential_grad(model.potential, e.phi, e.chi);
  return {wave_phi + model.m_phi * model.m_phi * e.phi + g.d_phi,
          wave_chi + model.m_chi * model.m_chi * e.chi + model.gamma * g.d_chi};
}

ForcingValues forcing(Dims dims, double x, double t, double y, double lambda) {
  return forcing(dims, x, t, y, mms_model(lambda));
}

}  // namespace ghostfem::mms
