#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ghostfem/config.hpp"
#include "ghostfem/diagnostics.hpp"
#include "ghostfem/parallel.hpp"
#include "ghostfem/solver.hpp"

namespace ghostfem {

enum class Termination { blow_up, max_slabs };

const char* termination_name(Termination t);

struct RunReport {
  int t_long_lived = 0;  // converged slabs before the first failed solve
  Termination terminated_by = Termination::max_slabs;
  std::vector<NewtonReport> slab_reports;  // one per attempted slab
  std::vector<EnergyRecord> energies;      // every level of every converged slab
  std::filesystem::path energy_csv_path;   // empty when nothing was written
  std::filesystem::path report_json_path;
  std::vector<std::filesystem::path> field_snapshot_paths;
};

/// Called after every converged slab with its index and solution.
using SlabObserver = std::function<void(int slab, const SlabState& state, const NewtonReport& report)>;

/// Marches slab by slab until a Newton solve fails (blow-up) or max_slabs
/// slabs have converged. With a non-empty output_dir writes energies.csv,
/// report.json and fields_s<slab>.csv every snapshot_every slabs.
RunReport evolve(const RunConfig& config, const SlabObserver& observer = {});

struct SweepPoint {
  double axis_value = 0.0;
  int t_long_lived = 0;
  Termination terminated_by = Termination::max_slabs;
};

/// One independent evolve per value of the dotted config key `axis`, results in
/// input order. Per-point runs write no files; with a non-empty output_dir the
/// table goes to lifetimes.csv. Throws ConfigError for an unknown axis.
std::vector<SweepPoint> sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values);

/// Lifetime against ic.A for the lifted sextic potential with oscillon seeds
/// (r = 1, delta_phi = 0, k0 = 0). Writes phi6_scan.csv with the sweep schema.
std::vector<SweepPoint> phi6_amplitude_scan(const RunConfig& base, const std::vector<double>& amplitudes);

/// Columns axis_value,t_long_lived,terminated_by.
void write_lifetimes_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);

}  // namespace ghostfem
