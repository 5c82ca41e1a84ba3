#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "ghostfem/fields.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"

namespace ghostfem {

// Positions left unset default to a fraction of the box length, measured from
// the left edge of the mesh. Wavenumbers are k = 2 pi C / L.

/// phi = A sin(k (x - x_phi)), chi = A sin(2k (x - x_chi)); each wave moves with
/// phase speed sign * sqrt(k^2 + m^2) / k.
struct PlaneWave {
  double A = 0.6;
  double C = 1.0;
  std::optional<double> x_phi;  // default 0
  std::optional<double> x_chi;  // default L/3
  int sign_phi = 1;
  int sign_chi = -1;
  bool operator==(const PlaneWave&) const = default;
};

/// Gaussian profiles of width l = 1 / (4k) travelling with unit speed in the
/// direction of c_phi / c_chi.
struct GaussianPacket {
  double A = 1.0;
  double C = 1.0;
  std::optional<double> x_phi;  // default 0.3 L
  std::optional<double> x_chi;  // default 0.7 L
  int c_phi = 1;
  int c_chi = -1;
  bool operator==(const GaussianPacket&) const = default;
};

/// How the per-mode transport signs s_n are chosen.
enum class SPolicy { counter, co, alternating, random };

const char* s_policy_name(SPolicy policy);
SPolicy parse_s_policy(const std::string& text);

/// Random-phase sum over harmonics n1..n2 with amplitudes k_n^(n_s/2),
/// normalized so that the RMS over the box is A for random phases.
struct ColoredNoise {
  double A = 1.0;
  int n1 = 1;
  int n2 = 64;
  double n_s = 0.0;
  std::uint64_t rng_seed = 0;
  double delta_phase = 0.0;
  SPolicy s_policy = SPolicy::counter;
  bool operator==(const ColoredNoise&) const = default;
};

/// Single carrier k with chi = A r cos(k (x - x_chi) + delta_phi);
/// sigma_prop = +1 co-propagating, -1 counter-propagating.
struct PhaseCorrelated {
  double A = 1.0;
  double C = 1.0;
  double r = 1.0;
  double delta_phi = 0.0;
  int sigma_prop = 1;
  std::optional<double> x_phi;  // default 0
  std::optional<double> x_chi;  // default 0
  bool operator==(const PhaseCorrelated&) const = default;
};

/// Time-symmetric sech lumps, optionally modulated by cos(k0 (x - x0)).
struct OscillonSeed {
  double A = 1.0;
  double width_sigma = 0.05;
  double r = 1.0;
  double delta_phi = 0.0;
  std::optional<double> x0;  // default L/2
  double k0 = 0.0;
  bool operator==(const OscillonSeed&) const = default;
};

using InitialDataSpec = std::variant<PlaneWave, GaussianPacket, ColoredNoise, PhaseCorrelated, OscillonSeed>;

const char* initial_data_name(const InitialDataSpec& spec);

/// Throws ConfigError naming the violated invariant.
void validate_initial_data(const InitialDataSpec& spec);

/// Evaluates the family at every spatial node. 2+1 meshes get the 1D profile
/// extruded uniformly in y. Throws ConfigError for invalid or incommensurate specs.
TimeSlice build_slice(const InitialDataSpec& spec, const MeshSpec& mesh, const ModelParams& model);

/// Newton starting guess: the slice copied onto every temporal level.
SlabState seed_slab(const TimeSlice& slice, const MeshSpec& mesh);

}  // namespace ghostfem
