#include "ghostfem/model.hpp"

#include <cmath>
#include <sstream>

#include "ghostfem/error.hpp"
#include "overloaded.hpp"

namespace ghostfem {

using detail::Overloaded;

namespace {

// Intermediate quantities of the manufactured-solution potential:
// a = phi^2 - chi^2 + 1, c = phi^2 - chi^2 - 1, b = c^2 + 4 phi^2.
struct MmsTerms {
  double a;
  double b;
  double c;
};

MmsTerms mms_terms(double phi, double chi) {
  const double s = phi * phi - chi * chi;
  const double c = s - 1.0;
  const double b = c * c + 4.0 * phi * phi;
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw SingularPotential(phi, chi);
  }
  return {s + 1.0, b, c};
}

}  // namespace

SingularPotential::SingularPotential(double phi, double chi)
    : Error([&] {
        std::ostringstream os;
        os << "singular potential at (phi, chi) = (" << phi << ", " << chi << ")";
        return os.str();
      }()),
      phi_(phi),
      chi_(chi) {}

void ModelParams::validate() const {
  if (gamma != 1 && gamma != -1) {
    throw ConfigError("model.gamma must be +1 or -1");
  }
  if (!(m_phi >= 0.0) || !(m_chi >= 0.0)) {
    throw ConfigError("model masses must be >= 0");
  }
  if (const auto* p6 = std::get_if<LiftedPhi6Potential>(&potential)) {
    if (!(p6->g > 0.0)) {
      throw ConfigError("lifted phi6 potential requires g > 0");
    }
  }
}

double potential_value(const PotentialSpec& spec, double phi, double chi) {
  return std::visit(
      Overloaded{
          [](const NoPotential&) { return 0.0; },
          [&](const V22Potential& p) { return p.lambda22 * phi * phi * chi * chi; },
          [&](const LiftedPhi6Potential& p) {
            const double w = phi * phi + chi * chi;
            return 0.5 * p.m * p.m * w - 0.25 * p.lambda * w * w + p.g * w * w * w / 6.0;
          },
          [](const MmsPotential&) -> double {
            throw UnsupportedOperation("the manufactured-solution potential has no value, only gradients");
          },
      },
      spec);
}

PotentialGradient potential_grad(const PotentialSpec& spec, double phi, double chi) {
  return std::visit(
      Overloaded{
          [](const NoPotential&) { return PotentialGradient{}; },
          [&](const V22Potential& p) {
            return PotentialGradient{2.0 * p.lambda22 * phi * chi * chi, 2.0 * p.lambda22 * phi * phi * chi};
          },
          [&](const LiftedPhi6Potential& p) {
            const double w = phi * phi + chi * chi;
            const double dv_dw = 0.5 * p.m * p.m - 0.5 * p.lambda * w + 0.5 * p.g * w * w;
            return PotentialGradient{2.0 * phi * dv_dw, 2.0 * chi * dv_dw};
          },
          [&](const MmsPotential& p) {
            const auto t = mms_terms(phi, chi);
            const double inv = 1.0 / (t.b * std::sqrt(t.b));
            return PotentialGradient{-2.0 * p.lambda * phi * t.a * inv, 2.0 * p.lambda * chi * t.c * inv};
          },
      },
      spec);
}

PotentialHessian potential_hess(const PotentialSpec& spec, double phi, double chi) {
  return std::visit(
      Overloaded{
          [](const NoPotential&) { return PotentialHessian{}; },
          [&](const V22Potential& p) {
            const double l = p.lambda22;
            return PotentialHessian{2.0 * l * chi * chi, 4.0 * l * phi * chi, 2.0 * l * phi * phi};
          },
          [&](const LiftedPhi6Potential& p) {
            const double w = phi * phi + chi * chi;
            const double d1 = 0.5 * p.m * p.m - 0.5 * p.lambda * w + 0.5 * p.g * w * w;
            const double d2 = -0.5 * p.lambda + p.g * w;
            return PotentialHessian{2.0 * d1 + 4.0 * phi * phi * d2, 4.0 * phi * chi * d2,
                                    2.0 * d1 + 4.0 * chi * chi * d2};
          },
          [&](const MmsPotential& p) {
            const auto [a, b, c] = mms_terms(phi, chi);
            const double inv = 1.0 / (b * b * std::sqrt(b));  // b^{-5/2}
            const double l = p.lambda;
            return PotentialHessian{
                -2.0 * l * inv * (a * b + 2.0 * phi * phi * b - 6.0 * phi * phi * a * a),
                4.0 * l * phi * chi * inv * (b - 3.0 * a * c),
                2.0 * l * inv * (c * b - 2.0 * chi * chi * b + 6.0 * chi * chi * c * c),
            };
          },
      },
      spec);
}

PotentialSplit split_potential(const PotentialSpec& spec, double phi, double chi) {
  PotentialSplit s;
  s.phi_self = potential_value(spec, phi, 0.0);
  s.chi_self = potential_value(spec, 0.0, chi);
  s.interaction = potential_value(spec, phi, chi) - s.phi_self - s.chi_self;
  return s;
}

bool has_nonlinearity(const PotentialSpec& spec) {
  return std::visit(Overloaded{
                        [](const NoPotential&) { return false; },
                        [](const V22Potential& p) { return p.lambda22 != 0.0; },
                        [](const LiftedPhi6Potential&) { return true; },
                        [](const MmsPotential& p) { return p.lambda != 0.0; },
                    },
                    spec);
}

const char* potential_name(const PotentialSpec& spec) {
  return std::visit(Overloaded{
                        [](const NoPotential&) { return "none"; },
                        [](const V22Potential&) { return "v22"; },
                        [](const LiftedPhi6Potential&) { return "lifted_phi6"; },
                        [](const MmsPotential&) { return "mms"; },
                    },
                    spec);
}

}  // namespace ghostfem
