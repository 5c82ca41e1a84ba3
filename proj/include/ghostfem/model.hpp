#pragma once

#include <variant>

namespace ghostfem {

struct NoPotential {
  bool operator==(const NoPotential&) const = default;
};

/// V = lambda22 phi^2 chi^2
struct V22Potential {
  double lambda22 = 1.0;
  bool operator==(const V22Potential&) const = default;
};

/// Lifted sextic potential V(W) = m^2 W / 2 - lambda W^2 / 4 + g W^3 / 6 with W = phi^2 + chi^2.
struct LiftedPhi6Potential {
  double m = 1.0;
  double lambda = 1.0;
  double g = 1.0;
  bool operator==(const LiftedPhi6Potential&) const = default;
};

/// Gradient-only potential used by the manufactured-solution verification.
/// Only its first and second derivatives exist; the value is never formed.
struct MmsPotential {
  double lambda = 1.0;
  bool operator==(const MmsPotential&) const = default;
};

using PotentialSpec = std::variant<NoPotential, V22Potential, LiftedPhi6Potential, MmsPotential>;

struct ModelParams {
  double m_phi = 1.0;
  double m_chi = 1.0;
  int gamma = -1;  // -1 puts the ghost in chi
  PotentialSpec potential = V22Potential{};

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

struct PotentialGradient {
  double d_phi = 0.0;
  double d_chi = 0.0;
};

struct PotentialHessian {
  double phi_phi = 0.0;
  double phi_chi = 0.0;
  double chi_chi = 0.0;
};

struct PotentialSplit {
  double phi_self = 0.0;     // V(phi, 0)
  double chi_self = 0.0;     // V(0, chi)
  double interaction = 0.0;  // V - phi_self - chi_self
};

/// Throws UnsupportedOperation for MmsPotential.
double potential_value(const PotentialSpec& spec, double phi, double chi);

/// Throws SingularPotential when the MMS denominator is not a positive finite number.
PotentialGradient potential_grad(const PotentialSpec& spec, double phi, double chi);

PotentialHessian potential_hess(const PotentialSpec& spec, double phi, double chi);

PotentialSplit split_potential(const PotentialSpec& spec, double phi, double chi);

bool has_nonlinearity(const PotentialSpec& spec);

const char* potential_name(const PotentialSpec& spec);

}  // namespace ghostfem
