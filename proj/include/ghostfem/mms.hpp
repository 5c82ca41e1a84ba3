#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ghostfem/fields.hpp"
#include "ghostfem/manufactured.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/solver.hpp"

namespace ghostfem::mms {

/// Square verification slab: x (and y) in [-1, 1) periodic, t in [0, 2],
/// n spatial nodes and n + 1 levels so that h_x = h_t (= h_y) = 2 / n.
MeshSpec verification_mesh(Dims dims, int n);

std::string mesh_label(const MeshSpec& mesh);

/// Exact initial level of the manufactured solution.
TimeSlice exact_slice(const MeshSpec& mesh);

/// Exact solution sampled at every node of the slab.
SlabState exact_state(const MeshSpec& mesh);

struct L2Error {
  double phi = 0.0;
  double chi = 0.0;
};

/// sqrt(sum over slab nodes of (U - exact)^2 * h_x h_t [h_y]) per field.
L2Error l2_error(const SlabState& state, const MeshSpec& mesh);

struct LevelResult {
  MeshSpec mesh;
  SlabState state;
  NewtonReport report;
  L2Error error;
};

/// Solves the forced slab starting from the exact initial level replicated in time.
LevelResult solve_level(const MeshSpec& mesh, double lambda, const NewtonOptions& opts);

struct ConvergenceRow {
  std::string mesh_label;
  double h = 0.0;
  double l2_err_phi = 0.0;
  double rate_phi = 0.0;  // NaN on the first row
  double l2_err_chi = 0.0;
  double rate_chi = 0.0;
  int newton_iterations = 0;
  bool converged = false;
};

/// log(E_coarse / E_fine) / log(h_coarse / h_fine).
double observed_rate(double err_coarse, double err_fine, double h_coarse, double h_fine);

/// Throws ConfigError unless every level shares dims and domain and halves h.
void require_nested(const std::vector<MeshSpec>& levels);

std::vector<ConvergenceRow> convergence_study(const std::vector<MeshSpec>& levels, double lambda,
                                              const NewtonOptions& opts);

/// Columns mesh_label,h,l2_err_phi,rate_phi,l2_err_chi,rate_chi,newton_iterations,converged.
void write_mms_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);

}  // namespace ghostfem::mms
