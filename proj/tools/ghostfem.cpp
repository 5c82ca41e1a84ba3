#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ghostfem/config.hpp"
#include "ghostfem/driver.hpp"
#include "ghostfem/error.hpp"
#include "ghostfem/mms.hpp"

namespace fs = std::filesystem;
using namespace ghostfem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInternal = 1;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<double> rtol;
  std::optional<int> max_iters;
  std::string linear_solver;
};

void add_solver_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--rtol", c.rtol, "Newton relative tolerance (solver.rtol)");
  cmd->add_option("--max-iters", c.max_iters, "Newton iteration cap per slab (solver.max_iters)");
  cmd->add_option("--linear-solver", c.linear_solver, "lu, gmres or auto (solver.linear_solver)")
      ->check(CLI::IsMember({"lu", "gmres", "auto"}));
}

void add_config_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "Run configuration (TOML)")->required();
  cmd->add_option("-s,--set", c.overrides, "Override one key, e.g. --set model.gamma=1")->allow_extra_args(false);
  cmd->add_option("-o,--out", c.out, "Output directory (default: run.output_dir, else the current directory)");
  add_solver_flags(cmd, c);
}

std::vector<std::string> all_overrides(const Common& c) {
  std::vector<std::string> o = c.overrides;
  if (c.rtol) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "solver.rtol=%.17g", *c.rtol);
    o.push_back(buf);
  }
  if (c.max_iters) o.push_back("solver.max_iters=" + std::to_string(*c.max_iters));
  if (!c.linear_solver.empty()) o.push_back("solver.linear_solver=\"" + c.linear_solver + "\"");
  return o;
}

RunConfig load(const Common& c) {
  RunConfig cfg = parse_config(c.config_path, all_overrides(c));
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (cfg.output_dir.empty()) cfg.output_dir = ".";
  return cfg;
}

std::string lifetimes(const std::vector<SweepPoint>& points) {
  std::string s;
  for (const SweepPoint& p : points) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%g:%d%s", s.empty() ? "" : " ", p.axis_value, p.t_long_lived,
                  p.terminated_by == Termination::blow_up ? "" : "+");
    s += buf;
  }
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("not a number in list: '" + item + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

int cmd_run(const Common& c) {
  const RunConfig cfg = load(c);
  const RunReport r = evolve(cfg);
  std::printf("run: t_long_lived=%d terminated_by=%s slabs_attempted=%zu report=%s\n", r.t_long_lived,
              termination_name(r.terminated_by), r.slab_reports.size(), r.report_json_path.string().c_str());
  return 0;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::string& values) {
  const RunConfig cfg = load(c);
  const auto points = sweep(cfg, axis, parse_list(values));
  std::printf("sweep %s: t_long_lived %s (+ = reached max_slabs) table=%s\n", axis.c_str(), lifetimes(points).c_str(),
              (fs::path(cfg.output_dir) / "lifetimes.csv").string().c_str());
  return 0;
}

int cmd_phi6(const Common& c, const std::string& amplitudes) {
  const RunConfig cfg = load(c);
  const auto points = phi6_amplitude_scan(cfg, parse_list(amplitudes));
  std::printf("phi6-scan: t_long_lived %s (+ = reached max_slabs) table=%s\n", lifetimes(points).c_str(),
              (fs::path(cfg.output_dir) / "phi6_scan.csv").string().c_str());
  return 0;
}

int cmd_mms(const Common& c, const std::string& dims_text, const std::string& levels_text, double lambda) {
  RunConfig defaults;
  for (const std::string& o : all_overrides(c)) {
    const auto [key, value] = split_override(o);
    if (key.rfind("solver.", 0) != 0) throw ConfigError("mms accepts only solver.* overrides, got '" + key + "'");
    set_config_value(defaults, key, parse_override_value(value));
  }
  defaults.solver.validate();
  const Dims dims = parse_dims(dims_text);
  std::vector<MeshSpec> levels;
  for (double n : parse_list(levels_text)) {
    if (n != std::floor(n) || n < 3) throw ConfigError("mms levels must be integers >= 3");
    levels.push_back(mms::verification_mesh(dims, static_cast<int>(n)));
  }
  const auto rows = mms::convergence_study(levels, lambda, defaults.solver);
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  fs::create_directories(dir);
  const fs::path csv = dir / "mms.csv";
  mms::write_mms_csv(csv, rows);
  for (const auto& r : rows) {
    std::printf("  %-10s h=%.5f err_phi=%.4e rate=%.4f err_chi=%.4e rate=%.4f newton=%d%s\n", r.mesh_label.c_str(), r.h,
                r.l2_err_phi, r.rate_phi, r.l2_err_chi, r.rate_chi, r.newton_iterations,
                r.converged ? "" : " NOT CONVERGED");
  }
  const auto& last = rows.back();
  std::printf("mms %s: final rate_phi=%.4f rate_chi=%.4f table=%s\n", dims_text.c_str(), last.rate_phi, last.rate_chi,
              csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spacetime finite-element evolution of a normal field coupled to a ghost"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Common run_opts, sweep_opts, phi6_opts, mms_opts;
  std::string axis, values, amplitudes, dims = "1+1", levels;
  double lambda = 1.0;

  CLI::App* run = app.add_subcommand("run", "Evolve slab by slab until blow-up or run.max_slabs");
  add_config_flags(run, run_opts);

  CLI::App* sw = app.add_subcommand("sweep", "Lifetime for each value of one config key");
  add_config_flags(sw, sweep_opts);
  sw->add_option("--axis", axis, "Dotted config key, e.g. ic.A")->required();
  sw->add_option("--values", values, "Comma-separated values")->required();

  CLI::App* p6 = app.add_subcommand("phi6-scan", "Lifetime against oscillon amplitude for the lifted sextic potential");
  add_config_flags(p6, phi6_opts);
  p6->add_option("--amplitudes", amplitudes, "Comma-separated amplitudes")->required();

  CLI::App* mm = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mm->add_option("--dims", dims, "1+1 or 2+1")->check(CLI::IsMember({"1+1", "2+1"}));
  mm->add_option("--levels", levels, "Comma-separated spatial node counts, each double the previous")->required();
  mm->add_option("--lambda", lambda, "Manufactured potential coupling");
  mm->add_option("-s,--set", mms_opts.overrides, "Override a solver key, e.g. --set solver.atol=1e-13");
  mm->add_option("-o,--out", mms_opts.out, "Output directory (default: current directory)");
  add_solver_flags(mm, mms_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sw) return cmd_sweep(sweep_opts, axis, values);
    if (*p6) return cmd_phi6(phi6_opts, amplitudes);
    if (*mm) return cmd_mms(mms_opts, dims, levels, lambda);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "ghostfem: %s\n", e.what());
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "ghostfem: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "ghostfem: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ghostfem: internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
