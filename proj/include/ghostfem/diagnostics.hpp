#pragma once

#include <filesystem>
#include <vector>

#include "ghostfem/fields.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"

namespace ghostfem {

struct EnergyRecord {
  double t = 0.0;
  double H = 0.0;
  double H_phi = 0.0;
  double H_chi = 0.0;
  double H_int = 0.0;
  double dev_phi = 0.0;  // |H_phi(t) - H_phi(0)|
  double dev_chi = 0.0;  // |H_chi(t) - H_chi(0)|

  bool operator==(const EnergyRecord&) const = default;
};

/// Split Hamiltonian of one time level. Time derivatives come from (u, v),
/// spatial gradients from centered differences on the periodic grid, and the
/// integral over the box from the rectangle rule. H is integrated from the full
/// density and H_int from V_int, so H - H_phi - H_chi - H_int is rounding only.
/// Deviations are left at zero (see deviation_series).
EnergyRecord energies(const TimeSlice& slice, const MeshSpec& mesh, const ModelParams& model, double t = 0.0);

/// Root mean square over the entries.
double rms(const std::vector<double>& values);

/// Fills dev_phi / dev_chi against the first record.
void deviation_series(std::vector<EnergyRecord>& records);

/// Columns t,H,H_phi,H_chi,H_int,dev_phi,dev_chi.
void write_energies_csv(const std::filesystem::path& path, const std::vector<EnergyRecord>& records);

}  // namespace ghostfem
