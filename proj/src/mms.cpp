#include "ghostfem/mms.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "ghostfem/assembly.hpp"
#include "ghostfem/error.hpp"
#include "ghostfem/initdata.hpp"
#include "ghostfem/parallel.hpp"

namespace ghostfem::mms {

MeshSpec verification_mesh(Dims dims, int n) {
  MeshSpec m;
  m.dims = dims;
  m.nx = n;
  m.ny = dims == Dims::d2p1 ? n : 1;
  m.nt = n + 1;
  m.length = 2.0;
  m.t_slab = 2.0;
  m.x0 = -1.0;
  return m;
}

std::string mesh_label(const MeshSpec& mesh) {
  std::string s = std::to_string(mesh.nx);
  if (mesh.dims == Dims::d2p1) s += "x" + std::to_string(mesh.ny);
  return s + "x" + std::to_string(mesh.nt);
}

namespace {

ExactValues exact_at(const MeshSpec& mesh, int ix, int iy, int it) {
  return exact_solution(mesh.dims, mesh.x(ix), mesh.t(it), mesh.dims == Dims::d2p1 ? mesh.y(iy) : 0.0);
}

}  // namespace

TimeSlice exact_slice(const MeshSpec& mesh) {
  TimeSlice s = TimeSlice::zeros(mesh.nodes_per_level());
  for (int iy = 0; iy < mesh.spatial_ny(); ++iy) {
    for (int ix = 0; ix < mesh.nx; ++ix) {
      const std::size_t n = static_cast<std::size_t>(iy) * mesh.nx + ix;
      const ExactValues e = exact_at(mesh, ix, iy, 0);
      s.phi[n] = e.phi;
      s.u[n] = e.u;
      s.chi[n] = e.chi;
      s.v[n] = e.v;
    }
  }
  return s;
}

SlabState exact_state(const MeshSpec& mesh) {
  SlabState U(static_cast<Eigen::Index>(mesh.dof_count()));
  for (int it = 0; it < mesh.nt; ++it) {
    for (int iy = 0; iy < mesh.spatial_ny(); ++iy) {
      for (int ix = 0; ix < mesh.nx; ++ix) {
        const std::size_t node = global_node_index(mesh, ix, iy, it);
        const ExactValues e = exact_at(mesh, ix, iy, it);
        U[dof_index(node, Component::phi)] = e.phi;
        U[dof_index(node, Component::u)] = e.u;
        U[dof_index(node, Component::chi)] = e.chi;
        U[dof_index(node, Component::v)] = e.v;
      }
    }
  }
  return U;
}

L2Error l2_error(const SlabState& state, const MeshSpec& mesh) {
  if (static_cast<std::size_t>(state.size()) != mesh.dof_count()) {
    throw SizeMismatch("slab state does not match the mesh");
  }
  double sp = 0.0, sc = 0.0;
  for (int it = 0; it < mesh.nt; ++it) {
    for (int iy = 0; iy < mesh.spatial_ny(); ++iy) {
      for (int ix = 0; ix < mesh.nx; ++ix) {
        const std::size_t node = global_node_index(mesh, ix, iy, it);
        const ExactValues e = exact_at(mesh, ix, iy, it);
        const double dp = state[dof_index(node, Component::phi)] - e.phi;
        const double dc = state[dof_index(node, Component::chi)] - e.chi;
        sp += dp * dp;
        sc += dc * dc;
      }
    }
  }
  double cell = mesh.hx() * mesh.ht();
  if (mesh.dims == Dims::d2p1) cell *= mesh.hy();
  return {std::sqrt(sp * cell), std::sqrt(sc * cell)};
}

LevelResult solve_level(const MeshSpec& mesh, double lambda, const NewtonOptions& opts) {
  mesh.validate();
  const TimeSlice ic = exact_slice(mesh);
  const SlabAssembler assembler(mesh, mms_model(lambda), AssemblyMode::mms);
  NewtonResult res = newton_solve(seed_slab(ic, mesh), assembler, ic, opts);
  LevelResult out{mesh, std::move(res.state), res.report, {}};
  out.error = l2_error(out.state, mesh);
  return out;
}

double observed_rate(double err_coarse, double err_fine, double h_coarse, double h_fine) {
  return std::log(err_coarse / err_fine) / std::log(h_coarse / h_fine);
}

void require_nested(const std::vector<MeshSpec>& levels) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const MeshSpec& a = levels[i - 1];
    const MeshSpec& b = levels[i];
    const bool same_domain = a.dims == b.dims && close(a.length, b.length) && close(a.t_slab, b.t_slab) &&
                             close(a.x0, b.x0);
    const bool halved = b.nx == 2 * a.nx && b.nt - 1 == 2 * (a.nt - 1) &&
                        (a.dims == Dims::d1p1 || b.ny == 2 * a.ny);
    if (!same_domain || !halved) {
      throw ConfigError("mms levels must refine the same domain by halving h (level " + std::to_string(i) + ": " +
                        mesh_label(a) + " -> " + mesh_label(b) + ")");
    }
  }
}

std::vector<ConvergenceRow> convergence_study(const std::vector<MeshSpec>& levels, double lambda,
                                              const NewtonOptions& opts) {
  require_nested(levels);
  std::vector<ConvergenceRow> rows(levels.size());
  parallel_for(levels.size(), [&](std::size_t i) {
    const LevelResult r = solve_level(levels[i], lambda, opts);
    ConvergenceRow& row = rows[i];
    row.mesh_label = mesh_label(levels[i]);
    row.h = levels[i].hx();
    row.l2_err_phi = r.error.phi;
    row.l2_err_chi = r.error.chi;
    row.newton_iterations = r.report.iterations;
    row.converged = r.report.converged;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].rate_phi = rows[i].rate_chi = std::numeric_limits<double>::quiet_NaN();
    } else {
      rows[i].rate_phi = observed_rate(rows[i - 1].l2_err_phi, rows[i].l2_err_phi, rows[i - 1].h, rows[i].h);
      rows[i].rate_chi = observed_rate(rows[i - 1].l2_err_chi, rows[i].l2_err_chi, rows[i - 1].h, rows[i].h);
    }
  }
  return rows;
}

void write_mms_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(10);
  out << "mesh_label,h,l2_err_phi,rate_phi,l2_err_chi,rate_chi,newton_iterations,converged\n";
  for (const ConvergenceRow& r : rows) {
    out << r.mesh_label << ',' << r.h << ',' << r.l2_err_phi << ',';
    if (!std::isnan(r.rate_phi)) out << r.rate_phi;
    out << ',' << r.l2_err_chi << ',';
    if (!std::isnan(r.rate_chi)) out << r.rate_chi;
    out << ',' << r.newton_iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ghostfem::mms
