#include "ghostfem/driver.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "ghostfem/assembly.hpp"
#include "ghostfem/error.hpp"
#include "ghostfem/initdata.hpp"
#include "ghostfem/parallel.hpp"

namespace ghostfem {

namespace fs = std::filesystem;

const char* termination_name(Termination t) { return t == Termination::blow_up ? "blow-up" : "max-slabs"; }

namespace {

void append_energies(std::vector<EnergyRecord>& out, const SlabState& U, const RunConfig& cfg, int slab,
                     int first_level) {
  const double t0 = slab * cfg.mesh.t_slab;
  for (int it = first_level; it < cfg.mesh.nt; ++it) {
    out.push_back(energies(extract_level(U, cfg.mesh, it), cfg.mesh, cfg.model, t0 + cfg.mesh.t(it)));
  }
}

fs::path write_snapshot(const fs::path& dir, const SlabState& U, const MeshSpec& mesh, int slab) {
  const fs::path path = dir / ("fields_s" + std::to_string(slab) + ".csv");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(12);
  const bool planar = mesh.dims == Dims::d2p1;
  out << (planar ? "x,y,t,phi,u,chi,v\n" : "x,t,phi,u,chi,v\n");
  const double t0 = slab * mesh.t_slab;
  for (int it = 0; it < mesh.nt; ++it) {
    for (int iy = 0; iy < mesh.spatial_ny(); ++iy) {
      for (int ix = 0; ix < mesh.nx; ++ix) {
        const std::size_t node = global_node_index(mesh, ix, iy, it);
        out << mesh.x(ix) << ',';
        if (planar) out << mesh.y(iy) << ',';
        out << t0 + mesh.t(it) << ',' << U[dof_index(node, Component::phi)] << ','
            << U[dof_index(node, Component::u)] << ',' << U[dof_index(node, Component::chi)] << ','
            << U[dof_index(node, Component::v)] << '\n';
      }
    }
  }
  if (!out) throw Error("failed writing " + path.string());
  return path;
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : flatten_config(cfg)) {
    const auto dot = key.find('.');
    std::visit([&](const auto& x) { j[key.substr(0, dot)][key.substr(dot + 1)] = x; }, value);
  }
  return j;
}

void write_report(const fs::path& path, const RunConfig& cfg, const RunReport& rep) {
  nlohmann::json j;
  j["t_long_lived"] = rep.t_long_lived;
  j["terminated_by"] = termination_name(rep.terminated_by);
  j["energy_csv"] = rep.energy_csv_path.filename().string();
  j["snapshots"] = nlohmann::json::array();
  for (const fs::path& p : rep.field_snapshot_paths) j["snapshots"].push_back(p.filename().string());
  j["slabs"] = nlohmann::json::array();
  for (const NewtonReport& r : rep.slab_reports) {
    j["slabs"].push_back({{"converged", r.converged},
                          {"iterations", r.iterations},
                          {"final_residual", r.residual_history.empty() ? 0.0 : r.residual_history.back()},
                          {"failure_reason", failure_reason_name(r.failure_reason)}});
  }
  j["config"] = config_json(cfg);
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

RunReport evolve(const RunConfig& config, const SlabObserver& observer) {
  config.validate();
  const bool writing = !config.output_dir.empty();
  const fs::path dir(config.output_dir);
  if (writing) fs::create_directories(dir);

  const MeshSpec& mesh = config.mesh;
  const SlabAssembler assembler(mesh, config.model, AssemblyMode::physical);
  TimeSlice slice = build_slice(config.ic, mesh, config.model);

  RunReport rep;
  for (int slab = 0; slab < config.max_slabs; ++slab) {
    NewtonResult res = newton_solve(seed_slab(slice, mesh), assembler, slice, config.solver);
    rep.slab_reports.push_back(res.report);
    if (!res.report.converged) {
      rep.terminated_by = Termination::blow_up;
      break;
    }
    rep.t_long_lived = slab + 1;
    append_energies(rep.energies, res.state, config, slab, slab == 0 ? 0 : 1);
    if (writing && config.snapshot_every > 0 && slab % config.snapshot_every == 0) {
      rep.field_snapshot_paths.push_back(write_snapshot(dir, res.state, mesh, slab));
    }
    if (observer) observer(slab, res.state, res.report);
    slice = extract_level(res.state, mesh, mesh.nt - 1);
  }
  deviation_series(rep.energies);

  if (writing) {
    rep.energy_csv_path = dir / "energies.csv";
    write_energies_csv(rep.energy_csv_path, rep.energies);
    rep.report_json_path = dir / "report.json";
    write_report(rep.report_json_path, config, rep);
  }
  return rep;
}

std::vector<SweepPoint> sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values) {
  const auto keys = settable_keys(base);
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
    RunConfig probe = base;
    set_config_value(probe, axis, 0.0);  // throws the unknown / not-applicable message
    throw ConfigError("sweep axis '" + axis + "' is not a scalar config field");
  }

  std::vector<RunConfig> jobs;
  for (double v : values) {
    RunConfig c = base;
    set_config_value(c, axis, v);
    c.output_dir.clear();
    c.snapshot_every = 0;
    c.validate();
    jobs.push_back(std::move(c));
  }

  std::vector<SweepPoint> points(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const RunReport r = evolve(jobs[i]);
    points[i] = {values[i], r.t_long_lived, r.terminated_by};
  });

  if (!base.output_dir.empty()) {
    fs::create_directories(base.output_dir);
    write_lifetimes_csv(fs::path(base.output_dir) / "lifetimes.csv", points);
  }
  return points;
}

std::vector<SweepPoint> phi6_amplitude_scan(const RunConfig& base, const std::vector<double>& amplitudes) {
  if (!std::holds_alternative<LiftedPhi6Potential>(base.model.potential)) {
    throw ConfigError("phi6 scan needs model.potential = \"lifted_phi6\"");
  }
  const auto* seed = std::get_if<OscillonSeed>(&base.ic);
  if (!seed) throw ConfigError("phi6 scan needs ic.family = \"oscillon_seed\"");
  if (seed->r != 1.0 || seed->delta_phi != 0.0 || seed->k0 != 0.0) {
    throw ConfigError("phi6 scan needs oscillon seeds with r = 1, delta_phi = 0, k0 = 0");
  }
  RunConfig quiet = base;
  quiet.output_dir.clear();
  std::vector<SweepPoint> points = sweep(quiet, "ic.A", amplitudes);
  if (!base.output_dir.empty()) {
    fs::create_directories(base.output_dir);
    write_lifetimes_csv(fs::path(base.output_dir) / "phi6_scan.csv", points);
  }
  return points;
}

void write_lifetimes_csv(const fs::path& path, const std::vector<SweepPoint>& points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(12);
  out << "axis_value,t_long_lived,terminated_by\n";
  for (const SweepPoint& p : points) {
    out << p.axis_value << ',' << p.t_long_lived << ',' << termination_name(p.terminated_by) << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ghostfem
