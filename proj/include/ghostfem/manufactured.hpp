#pragma once

#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"

namespace ghostfem::mms {

struct ExactValues {
  double phi;
  double chi;
  double u;
  double v;
};

/// 1+1: phi = 1 + cos(pi x) cos(pi t), chi = 1 + cos(pi x) sin(pi t).
/// 2+1: the same with an extra cos(pi y) factor on the oscillating part.
ExactValues exact_solution(Dims dims, double x, double t, double y = 0.0);

struct ForcingValues {
  double f_phi;
  double f_chi;
};

/// Model the manufactured solution is verified against: unit masses, ghost on,
/// gradient-only MMS potential with strength lambda.
ModelParams mms_model(double lambda);

/// Right-hand sides that make exact_solution satisfy
///   phi_tt - lap phi + m_phi^2 phi + dV/dphi = F_phi
///   chi_tt - lap chi + m_chi^2 chi + gamma dV/dchi = F_chi.
ForcingValues forcing(Dims dims, double x, double t, double y, const ModelParams& model);
ForcingValues forcing(Dims dims, double x, double t, double y, double lambda);

}  // namespace ghostfem::mms
