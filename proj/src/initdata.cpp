#include "ghostfem/initdata.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ghostfem/error.hpp"
#include "overloaded.hpp"

namespace ghostfem {

using detail::Overloaded;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

void require_sign(int s, const char* key) {
  if (s != 1 && s != -1) throw ConfigError(std::string("ic.") + key + " must be +1 or -1");
}

// Signed distance from c to x on the periodic box, in [-L/2, L/2).
double periodic_offset(double x, double c, double length) {
  double d = x - c;
  d -= length * std::floor(d / length + 0.5);
  return d;
}

// Profiles depend on x only; 2+1 levels repeat the row for every y.
template <class F>
TimeSlice fill_rows(const MeshSpec& mesh, F&& at_x) {
  TimeSlice s = TimeSlice::zeros(mesh.nodes_per_level());
  const int nx = mesh.nx;
  for (int ix = 0; ix < nx; ++ix) {
    const auto [phi, u, chi, v] = at_x(mesh.x(ix));
    for (int iy = 0; iy < mesh.spatial_ny(); ++iy) {
      const std::size_t n = static_cast<std::size_t>(iy) * nx + ix;
      s.phi[n] = phi;
      s.u[n] = u;
      s.chi[n] = chi;
      s.v[n] = v;
    }
  }
  return s;
}

struct Nodal {
  double phi, u, chi, v;
};

// Uniform on [0, 1) from the top 53 bits, so draws do not depend on the
// standard library's distribution implementation.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

TimeSlice plane_wave(const PlaneWave& p, const MeshSpec& mesh, const ModelParams& model) {
  const double L = mesh.length;
  const double k_phi = kTwoPi * p.C / L;
  const double k_chi = 2.0 * k_phi;
  const double c_phi = p.sign_phi * std::sqrt((k_phi * k_phi + model.m_phi * model.m_phi) / (k_phi * k_phi));
  const double c_chi = p.sign_chi * std::sqrt((k_chi * k_chi + model.m_chi * model.m_chi) / (k_chi * k_chi));
  const double x_phi = mesh.x0 + p.x_phi.value_or(0.0);
  const double x_chi = mesh.x0 + p.x_chi.value_or(L / 3.0);
  return fill_rows(mesh, [&](double x) {
    const double a = k_phi * (x - x_phi);
    const double b = k_chi * (x - x_chi);
    return Nodal{p.A * std::sin(a), -c_phi * k_phi * p.A * std::cos(a), p.A * std::sin(b),
                 -c_chi * k_chi * p.A * std::cos(b)};
  });
}

TimeSlice gaussian_packet(const GaussianPacket& p, const MeshSpec& mesh) {
  const double L = mesh.length;
  const double k = kTwoPi * p.C / L;
  const double ell = 1.0 / (4.0 * k);
  const double x_phi = mesh.x0 + p.x_phi.value_or(0.3 * L);
  const double x_chi = mesh.x0 + p.x_chi.value_or(0.7 * L);
  auto packet = [&](double d, int c) {
    const double g = p.A * std::exp(-d * d / (2.0 * ell * ell));
    return std::pair{g, c * d / (ell * ell) * g};
  };
  return fill_rows(mesh, [&](double x) {
    const auto [phi, u] = packet(periodic_offset(x, x_phi, L), p.c_phi);
    const auto [chi, v] = packet(periodic_offset(x, x_chi, L), p.c_chi);
    return Nodal{phi, u, chi, v};
  });
}

TimeSlice colored_noise(const ColoredNoise& p, const MeshSpec& mesh, const ModelParams& model) {
  const double L = mesh.length;
  const int modes = p.n2 - p.n1 + 1;
  std::mt19937_64 rng(p.rng_seed);
  std::vector<double> theta_phi(modes), theta_chi(modes), s(modes);
  for (double& th : theta_phi) th = kTwoPi * unit_draw(rng);
  for (double& th : theta_chi) th = kTwoPi * unit_draw(rng) + p.delta_phase;
  for (int j = 0; j < modes; ++j) {
    const int n = p.n1 + j;
    switch (p.s_policy) {
      case SPolicy::counter:
        s[j] = -1.0;
        break;
      case SPolicy::co:
        s[j] = 1.0;
        break;
      case SPolicy::alternating:
        s[j] = n % 2 == 0 ? 1.0 : -1.0;
        break;
      case SPolicy::random:
        s[j] = unit_draw(rng) < 0.5 ? -1.0 : 1.0;
        break;
    }
  }

  std::vector<double> k(modes), amp(modes), w_phi(modes), w_chi(modes);
  double power = 0.0;
  for (int j = 0; j < modes; ++j) {
    k[j] = kTwoPi * (p.n1 + j) / L;
    amp[j] = std::pow(k[j], p.n_s / 2.0);
    power += std::pow(k[j], p.n_s);
    w_phi[j] = std::sqrt(k[j] * k[j] + model.m_phi * model.m_phi);
    w_chi[j] = std::sqrt(k[j] * k[j] + model.m_chi * model.m_chi);
  }
  const double norm = p.A / std::sqrt(0.5 * power);

  return fill_rows(mesh, [&](double x) {
    Nodal out{0.0, 0.0, 0.0, 0.0};
    for (int j = 0; j < modes; ++j) {
      const double a = k[j] * (x - mesh.x0) + theta_phi[j];
      const double b = k[j] * (x - mesh.x0) + theta_chi[j];
      out.phi += norm * amp[j] * std::cos(a);
      out.u += s[j] * w_phi[j] * norm * amp[j] * std::sin(a);
      out.chi += norm * amp[j] * std::cos(b);
      out.v += s[j] * w_chi[j] * norm * amp[j] * std::sin(b);
    }
    return out;
  });
}

TimeSlice phase_correlated(const PhaseCorrelated& p, const MeshSpec& mesh, const ModelParams& model) {
  const double k = kTwoPi * p.C / mesh.length;
  const double w_phi = std::sqrt(k * k + model.m_phi * model.m_phi);
  const double w_chi = std::sqrt(k * k + model.m_chi * model.m_chi);
  const double x_phi = mesh.x0 + p.x_phi.value_or(0.0);
  const double x_chi = mesh.x0 + p.x_chi.value_or(0.0);
  return fill_rows(mesh, [&](double x) {
    const double a = k * (x - x_phi);
    const double b = k * (x - x_chi) + p.delta_phi;
    // d_t f = -(w / k) d_x f for a right-moving cos profile
    return Nodal{p.A * std::cos(a), w_phi * p.A * std::sin(a), p.A * p.r * std::cos(b),
                 p.sigma_prop * w_chi * p.A * p.r * std::sin(b)};
  });
}

TimeSlice oscillon_seed(const OscillonSeed& p, const MeshSpec& mesh) {
  const double center = mesh.x0 + p.x0.value_or(mesh.length / 2.0);
  const double chi_scale = p.r * std::cos(p.delta_phi);
  return fill_rows(mesh, [&](double x) {
    const double d = periodic_offset(x, center, mesh.length);
    double profile = p.A / std::cosh(d / p.width_sigma);
    if (p.k0 != 0.0) profile *= std::cos(p.k0 * d);
    return Nodal{profile, 0.0, chi_scale * profile, 0.0};
  });
}

}  // namespace

const char* s_policy_name(SPolicy policy) {
  switch (policy) {
    case SPolicy::counter:
      return "counter";
    case SPolicy::co:
      return "co";
    case SPolicy::alternating:
      return "alternating";
    case SPolicy::random:
      return "random";
  }
  return "unknown";
}

SPolicy parse_s_policy(const std::string& text) {
  for (SPolicy p : {SPolicy::counter, SPolicy::co, SPolicy::alternating, SPolicy::random}) {
    if (text == s_policy_name(p)) return p;
  }
  throw ConfigError("ic.s_policy must be one of counter, co, alternating, random (got '" + text + "')");
}

const char* initial_data_name(const InitialDataSpec& spec) {
  return std::visit(Overloaded{[](const PlaneWave&) { return "plane_wave"; },
                               [](const GaussianPacket&) { return "gaussian_packet"; },
                               [](const ColoredNoise&) { return "colored_noise"; },
                               [](const PhaseCorrelated&) { return "phase_correlated"; },
                               [](const OscillonSeed&) { return "oscillon_seed"; }},
                    spec);
}

void validate_initial_data(const InitialDataSpec& spec) {
  std::visit(Overloaded{
                 [](const PlaneWave& p) {
                   if (!(p.C > 0.0)) throw ConfigError("ic.C > 0 required");
                   if (!is_integer(2.0 * p.C)) {
                     throw ConfigError("ic.C: chi wavenumber 4 pi C / L is incommensurate with the box (2C must be an integer)");
                   }
                   require_sign(p.sign_phi, "sign_phi");
                   require_sign(p.sign_chi, "sign_chi");
                 },
                 [](const GaussianPacket& p) {
                   if (!(p.C > 0.0)) throw ConfigError("ic.C > 0 required");
                   require_sign(p.c_phi, "c_phi");
                   require_sign(p.c_chi, "c_chi");
                 },
                 [](const ColoredNoise& p) {
                   if (p.n1 < 1 || p.n2 < p.n1) throw ConfigError("ic: 1 <= n1 <= n2 required");
                   if (!std::isfinite(p.n_s)) throw ConfigError("ic.n_s must be finite");
                 },
                 [](const PhaseCorrelated& p) {
                   if (!(p.C > 0.0) || !is_integer(p.C)) {
                     throw ConfigError("ic.C must be a positive integer for a periodic carrier");
                   }
                   if (!(p.r > 0.0)) throw ConfigError("ic.r > 0 required");
                   require_sign(p.sigma_prop, "sigma_prop");
                 },
                 [](const OscillonSeed& p) {
                   if (!(p.width_sigma > 0.0)) throw ConfigError("ic.width_sigma > 0 required");
                   if (!(p.r >= 0.0)) throw ConfigError("ic.r >= 0 required");
                 },
             },
             spec);
}

TimeSlice build_slice(const InitialDataSpec& spec, const MeshSpec& mesh, const ModelParams& model) {
  mesh.validate();
  validate_initial_data(spec);
  return std::visit(Overloaded{[&](const PlaneWave& p) { return plane_wave(p, mesh, model); },
                               [&](const GaussianPacket& p) { return gaussian_packet(p, mesh); },
                               [&](const ColoredNoise& p) { return colored_noise(p, mesh, model); },
                               [&](const PhaseCorrelated& p) { return phase_correlated(p, mesh, model); },
                               [&](const OscillonSeed& p) { return oscillon_seed(p, mesh); }},
                    spec);
}

SlabState seed_slab(const TimeSlice& slice, const MeshSpec& mesh) {
  require_slice_matches(slice, mesh);
  const std::size_t npl = mesh.nodes_per_level();
  SlabState U(static_cast<Eigen::Index>(mesh.dof_count()));
  for (int it = 0; it < mesh.nt; ++it) {
    for (std::size_t n = 0; n < npl; ++n) {
      const std::size_t node = static_cast<std::size_t>(it) * npl + n;
      U[dof_index(node, Component::phi)] = slice.phi[n];
      U[dof_index(node, Component::u)] = slice.u[n];
      U[dof_index(node, Component::chi)] = slice.chi[n];
      U[dof_index(node, Component::v)] = slice.v[n];
    }
  }
  return U;
}

}  // namespace ghostfem
