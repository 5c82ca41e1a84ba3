#include "ghostfem/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include <toml.hpp>

#include "ghostfem/error.hpp"
#include "overloaded.hpp"

namespace ghostfem {

using detail::Overloaded;

namespace {

const char* type_name(const ConfigValue& v) {
  return std::visit(Overloaded{[](bool) { return "a boolean"; }, [](std::int64_t) { return "an integer"; },
                               [](double) { return "a float"; }, [](const std::string&) { return "a string"; }},
                    v);
}

[[noreturn]] void wrong_type(const std::string& key, const char* expected, const ConfigValue& v) {
  throw ConfigError(key + " expects " + expected + ", got " + type_name(v));
}

double to_double(const ConfigValue& v, const std::string& key) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  wrong_type(key, "a number", v);
}

std::int64_t to_integer(const ConfigValue& v, const std::string& key) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  // Sweeps hand every axis value over as a double.
  if (const auto* d = std::get_if<double>(&v); d && std::isfinite(*d) && *d == std::round(*d) &&
                                               std::abs(*d) < 9.0e15) {
    return static_cast<std::int64_t>(*d);
  }
  wrong_type(key, "an integer", v);
}

const std::string& to_string(const ConfigValue& v, const std::string& key) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  wrong_type(key, "a string", v);
}

void assign(double& dst, const ConfigValue& v, const std::string& key) { dst = to_double(v, key); }

void assign(std::optional<double>& dst, const ConfigValue& v, const std::string& key) { dst = to_double(v, key); }

void assign(int& dst, const ConfigValue& v, const std::string& key) {
  const std::int64_t i = to_integer(v, key);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ConfigError(key + " is out of range");
  }
  dst = static_cast<int>(i);
}

void assign(std::uint64_t& dst, const ConfigValue& v, const std::string& key) {
  const std::int64_t i = to_integer(v, key);
  if (i < 0) throw ConfigError(key + " must be >= 0");
  dst = static_cast<std::uint64_t>(i);
}

void assign(std::string& dst, const ConfigValue& v, const std::string& key) { dst = to_string(v, key); }

std::optional<ConfigValue> to_value(double x) { return ConfigValue{x}; }
std::optional<ConfigValue> to_value(const std::optional<double>& x) {
  return x ? std::optional<ConfigValue>{*x} : std::nullopt;
}
std::optional<ConfigValue> to_value(int x) { return ConfigValue{static_cast<std::int64_t>(x)}; }
std::optional<ConfigValue> to_value(std::uint64_t x) { return ConfigValue{static_cast<std::int64_t>(x)}; }
std::optional<ConfigValue> to_value(const std::string& x) { return ConfigValue{x}; }

struct Field {
  std::string key;
  std::function<void(RunConfig&, const ConfigValue&)> set;
  std::function<std::optional<ConfigValue>(const RunConfig&)> get;
};

template <class Pick>
Field member(std::string key, Pick pick) {
  Field f;
  f.key = key;
  f.set = [pick, key](RunConfig& c, const ConfigValue& v) { assign(pick(c), v, key); };
  f.get = [pick](const RunConfig& c) { return to_value(pick(const_cast<RunConfig&>(c))); };
  return f;
}

template <class S, class T>
auto ic_part(T S::*m) {
  return [m](RunConfig& c) -> T& { return std::get<S>(c.ic).*m; };
}

template <class S, class T>
auto potential_part(T S::*m) {
  return [m](RunConfig& c) -> T& { return std::get<S>(c.model.potential).*m; };
}

PotentialSpec default_potential(const std::string& name) {
  if (name == "none") return NoPotential{};
  if (name == "v22") return V22Potential{};
  if (name == "lifted_phi6") return LiftedPhi6Potential{};
  if (name == "mms") return MmsPotential{};
  throw ConfigError("model.potential must be one of none, v22, lifted_phi6, mms (got '" + name + "')");
}

InitialDataSpec default_ic(const std::string& name) {
  if (name == "plane_wave") return PlaneWave{};
  if (name == "gaussian_packet") return GaussianPacket{};
  if (name == "colored_noise") return ColoredNoise{};
  if (name == "phase_correlated") return PhaseCorrelated{};
  if (name == "oscillon_seed") return OscillonSeed{};
  throw ConfigError(
      "ic.family must be one of plane_wave, gaussian_packet, colored_noise, phase_correlated, oscillon_seed (got '" +
      name + "')");
}

const char* line_search_name(LineSearchOptions::Kind k) {
  return k == LineSearchOptions::Kind::none ? "none" : "backtracking";
}

std::vector<Field> fields_for(const RunConfig& cfg) {
  std::vector<Field> f;

  f.push_back({"model.potential",
               [](RunConfig& c, const ConfigValue& v) {
                 const std::string& name = to_string(v, "model.potential");
                 if (name != potential_name(c.model.potential)) c.model.potential = default_potential(name);
               },
               [](const RunConfig& c) { return to_value(std::string(potential_name(c.model.potential))); }});
  f.push_back(member("model.m_phi", [](RunConfig& c) -> double& { return c.model.m_phi; }));
  f.push_back(member("model.m_chi", [](RunConfig& c) -> double& { return c.model.m_chi; }));
  f.push_back(member("model.gamma", [](RunConfig& c) -> int& { return c.model.gamma; }));
  std::visit(Overloaded{
                 [](const NoPotential&) {},
                 [&](const V22Potential&) { f.push_back(member("model.lambda22", potential_part(&V22Potential::lambda22))); },
                 [&](const LiftedPhi6Potential&) {
                   f.push_back(member("model.phi6_m", potential_part(&LiftedPhi6Potential::m)));
                   f.push_back(member("model.phi6_lambda", potential_part(&LiftedPhi6Potential::lambda)));
                   f.push_back(member("model.phi6_g", potential_part(&LiftedPhi6Potential::g)));
                 },
                 [&](const MmsPotential&) { f.push_back(member("model.mms_lambda", potential_part(&MmsPotential::lambda))); },
             },
             cfg.model.potential);

  f.push_back({"mesh.dims",
               [](RunConfig& c, const ConfigValue& v) { c.mesh.dims = parse_dims(to_string(v, "mesh.dims")); },
               [](const RunConfig& c) { return to_value(std::string(dims_name(c.mesh.dims))); }});
  f.push_back(member("mesh.nx", [](RunConfig& c) -> int& { return c.mesh.nx; }));
  f.push_back(member("mesh.ny", [](RunConfig& c) -> int& { return c.mesh.ny; }));
  f.push_back(member("mesh.nt", [](RunConfig& c) -> int& { return c.mesh.nt; }));
  f.push_back(member("mesh.L", [](RunConfig& c) -> double& { return c.mesh.length; }));
  f.push_back(member("mesh.T_slab", [](RunConfig& c) -> double& { return c.mesh.t_slab; }));
  f.push_back(member("mesh.x0", [](RunConfig& c) -> double& { return c.mesh.x0; }));

  f.push_back({"ic.family",
               [](RunConfig& c, const ConfigValue& v) {
                 const std::string& name = to_string(v, "ic.family");
                 if (name != initial_data_name(c.ic)) c.ic = default_ic(name);
               },
               [](const RunConfig& c) { return to_value(std::string(initial_data_name(c.ic))); }});
  std::visit(Overloaded{
                 [&](const PlaneWave&) {
                   f.push_back(member("ic.A", ic_part(&PlaneWave::A)));
                   f.push_back(member("ic.C", ic_part(&PlaneWave::C)));
                   f.push_back(member("ic.x_phi", ic_part(&PlaneWave::x_phi)));
                   f.push_back(member("ic.x_chi", ic_part(&PlaneWave::x_chi)));
                   f.push_back(member("ic.sign_phi", ic_part(&PlaneWave::sign_phi)));
                   f.push_back(member("ic.sign_chi", ic_part(&PlaneWave::sign_chi)));
                 },
                 [&](const GaussianPacket&) {
                   f.push_back(member("ic.A", ic_part(&GaussianPacket::A)));
                   f.push_back(member("ic.C", ic_part(&GaussianPacket::C)));
                   f.push_back(member("ic.x_phi", ic_part(&GaussianPacket::x_phi)));
                   f.push_back(member("ic.x_chi", ic_part(&GaussianPacket::x_chi)));
                   f.push_back(member("ic.c_phi", ic_part(&GaussianPacket::c_phi)));
                   f.push_back(member("ic.c_chi", ic_part(&GaussianPacket::c_chi)));
                 },
                 [&](const ColoredNoise&) {
                   f.push_back(member("ic.A", ic_part(&ColoredNoise::A)));
                   f.push_back(member("ic.n1", ic_part(&ColoredNoise::n1)));
                   f.push_back(member("ic.n2", ic_part(&ColoredNoise::n2)));
                   f.push_back(member("ic.n_s", ic_part(&ColoredNoise::n_s)));
                   f.push_back(member("ic.rng_seed", ic_part(&ColoredNoise::rng_seed)));
                   f.push_back(member("ic.delta_phase", ic_part(&ColoredNoise::delta_phase)));
                   f.push_back({"ic.s_policy",
                                [](RunConfig& c, const ConfigValue& v) {
                                  std::get<ColoredNoise>(c.ic).s_policy = parse_s_policy(to_string(v, "ic.s_policy"));
                                },
                                [](const RunConfig& c) {
                                  return to_value(std::string(s_policy_name(std::get<ColoredNoise>(c.ic).s_policy)));
                                }});
                 },
                 [&](const PhaseCorrelated&) {
                   f.push_back(member("ic.A", ic_part(&PhaseCorrelated::A)));
                   f.push_back(member("ic.C", ic_part(&PhaseCorrelated::C)));
                   f.push_back(member("ic.r", ic_part(&PhaseCorrelated::r)));
                   f.push_back(member("ic.delta_phi", ic_part(&PhaseCorrelated::delta_phi)));
                   f.push_back(member("ic.sigma_prop", ic_part(&PhaseCorrelated::sigma_prop)));
                   f.push_back(member("ic.x_phi", ic_part(&PhaseCorrelated::x_phi)));
                   f.push_back(member("ic.x_chi", ic_part(&PhaseCorrelated::x_chi)));
                 },
                 [&](const OscillonSeed&) {
                   f.push_back(member("ic.A", ic_part(&OscillonSeed::A)));
                   f.push_back(member("ic.width_sigma", ic_part(&OscillonSeed::width_sigma)));
                   f.push_back(member("ic.r", ic_part(&OscillonSeed::r)));
                   f.push_back(member("ic.delta_phi", ic_part(&OscillonSeed::delta_phi)));
                   f.push_back(member("ic.x0", ic_part(&OscillonSeed::x0)));
                   f.push_back(member("ic.k0", ic_part(&OscillonSeed::k0)));
                 },
             },
             cfg.ic);

  f.push_back(member("solver.rtol", [](RunConfig& c) -> double& { return c.solver.rtol; }));
  f.push_back(member("solver.atol", [](RunConfig& c) -> double& { return c.solver.atol; }));
  f.push_back(member("solver.max_iters", [](RunConfig& c) -> int& { return c.solver.max_iters; }));
  f.push_back({"solver.line_search",
               [](RunConfig& c, const ConfigValue& v) {
                 const std::string& s = to_string(v, "solver.line_search");
                 if (s == "none") {
                   c.solver.line_search.kind = LineSearchOptions::Kind::none;
                 } else if (s == "backtracking") {
                   c.solver.line_search.kind = LineSearchOptions::Kind::backtracking;
                 } else {
                   throw ConfigError("solver.line_search must be none or backtracking (got '" + s + "')");
                 }
               },
               [](const RunConfig& c) { return to_value(std::string(line_search_name(c.solver.line_search.kind))); }});
  f.push_back(member("solver.ls_c", [](RunConfig& c) -> double& { return c.solver.line_search.c; }));
  f.push_back(member("solver.ls_shrink", [](RunConfig& c) -> double& { return c.solver.line_search.shrink; }));
  f.push_back(member("solver.ls_min_alpha", [](RunConfig& c) -> double& { return c.solver.line_search.min_alpha; }));
  f.push_back({"solver.linear_solver",
               [](RunConfig& c, const ConfigValue& v) {
                 c.solver.linear_solver = parse_linear_solver(to_string(v, "solver.linear_solver"));
               },
               [](const RunConfig& c) { return to_value(std::string(linear_solver_name(c.solver.linear_solver))); }});

  f.push_back(member("run.max_slabs", [](RunConfig& c) -> int& { return c.max_slabs; }));
  f.push_back(member("run.output_dir", [](RunConfig& c) -> std::string& { return c.output_dir; }));
  f.push_back(member("run.snapshot_every", [](RunConfig& c) -> int& { return c.snapshot_every; }));
  return f;
}

// Union of keys over every potential and IC family, to tell "unknown" from "not applicable".
const std::set<std::string>& all_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> out;
    const PotentialSpec potentials[] = {NoPotential{}, V22Potential{}, LiftedPhi6Potential{}, MmsPotential{}};
    const InitialDataSpec ics[] = {PlaneWave{}, GaussianPacket{}, ColoredNoise{}, PhaseCorrelated{}, OscillonSeed{}};
    for (const auto& p : potentials) {
      for (const auto& ic : ics) {
        RunConfig c;
        c.model.potential = p;
        c.ic = ic;
        for (const Field& fld : fields_for(c)) out.insert(fld.key);
      }
    }
    return out;
  }();
  return keys;
}

struct Entry {
  ConfigValue value;
  std::string where;  // "origin:line" or "--set"
};

std::optional<ConfigValue> scalar_of(const toml::node& node) {
  if (const auto* i = node.as_integer()) return ConfigValue{i->get()};
  if (const auto* d = node.as_floating_point()) return ConfigValue{d->get()};
  if (const auto* s = node.as_string()) return ConfigValue{s->get()};
  if (const auto* b = node.as_boolean()) return ConfigValue{b->get()};
  return std::nullopt;
}

std::string location(const std::string& origin, const toml::node& node) {
  return origin + ":" + std::to_string(node.source().begin.line);
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  if (std::holds_alternative<MmsPotential>(model.potential)) {
    throw ConfigError("model.potential = \"mms\" is reserved for the mms subcommand");
  }
  mesh.validate();
  validate_initial_data(ic);
  solver.validate();
  if (max_slabs < 1) throw ConfigError("run.max_slabs >= 1 required");
  if (snapshot_every < 0) throw ConfigError("run.snapshot_every >= 0 required");
}

std::vector<std::pair<std::string, ConfigValue>> flatten_config(const RunConfig& config) {
  std::vector<std::pair<std::string, ConfigValue>> out;
  for (const Field& f : fields_for(config)) {
    if (auto v = f.get(config)) out.emplace_back(f.key, std::move(*v));
  }
  return out;
}

std::vector<std::string> settable_keys(const RunConfig& config) {
  std::vector<std::string> out;
  for (const Field& f : fields_for(config)) out.push_back(f.key);
  return out;
}

void set_config_value(RunConfig& config, const std::string& key, const ConfigValue& value) {
  for (const Field& f : fields_for(config)) {
    if (f.key == key) {
      f.set(config, value);
      return;
    }
  }
  if (all_keys().count(key)) {
    throw ConfigError("key '" + key + "' does not apply to potential '" + potential_name(config.model.potential) +
                      "' / ic family '" + initial_data_name(config.ic) + "'");
  }
  throw ConfigError("unknown key '" + key + "'");
}

ConfigValue parse_override_value(const std::string& text) {
  try {
    const toml::table t = toml::parse("v = " + text);
    if (const toml::node* n = t.get("v")) {
      if (auto v = scalar_of(*n)) return *v;
    }
  } catch (const toml::parse_error&) {
  }
  return ConfigValue{text};
}

std::pair<std::string, std::string> split_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + text + "' is not of the form key=value");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& origin) {
  toml::table doc;
  try {
    doc = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }

  static const std::set<std::string> sections = {"model", "mesh", "ic", "solver", "run"};
  std::vector<std::string> order;
  std::map<std::string, Entry> entries;
  for (const auto& [section, node] : doc) {
    const std::string name(section.str());
    const toml::table* tbl = node.as_table();
    if (!tbl) throw ConfigError(location(origin, node) + ": key '" + name + "' must live inside a section");
    if (!sections.count(name)) throw ConfigError(location(origin, node) + ": unknown section [" + name + "]");
    for (const auto& [k, v] : *tbl) {
      const std::string key = name + "." + std::string(k.str());
      auto value = scalar_of(v);
      if (!value) throw ConfigError(location(origin, v) + ": " + key + " must be a scalar value");
      order.push_back(key);
      entries[key] = Entry{*value, location(origin, v)};
    }
  }
  for (const std::string& o : overrides) {
    const auto [key, value] = split_override(o);
    if (!entries.count(key)) order.push_back(key);
    entries[key] = Entry{parse_override_value(value), "--set " + key};
  }

  RunConfig cfg;
  auto apply = [&](const std::string& key) {
    const Entry& e = entries.at(key);
    try {
      set_config_value(cfg, key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.where + ": " + err.what());
    }
  };
  // Variant selectors first so the remaining keys are checked against the chosen block.
  for (const char* selector : {"model.potential", "ic.family"}) {
    if (entries.count(selector)) apply(selector);
  }
  for (const std::string& key : order) {
    if (key != "model.potential" && key != "ic.family") apply(key);
  }
  if (std::holds_alternative<ColoredNoise>(cfg.ic) && !entries.count("ic.rng_seed")) {
    throw ConfigError(origin + ": ic.rng_seed is required for colored_noise initial data");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides, path.string());
}

std::string write_config(const RunConfig& config) {
  toml::table doc;
  for (const auto& [key, value] : flatten_config(config)) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);
    if (!doc.contains(section)) doc.insert(section, toml::table{});
    toml::table& tbl = *doc[section].as_table();
    std::visit([&](const auto& x) { tbl.insert_or_assign(name, x); }, value);
  }
  std::ostringstream os;
  os << doc << '\n';
  return os.str();
}

}  // namespace ghostfem
