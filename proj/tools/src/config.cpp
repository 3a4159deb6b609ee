#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

namespace langmuir::app {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const auto u = to_unsigned(key, v);
  if (u > 1000000) throw ConfigError(key + ": value too large");
  return static_cast<int>(u);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

const std::map<std::string, std::vector<std::string>>& family_params() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"zero", {}},
      {"box", {"height", "w_extent", "l_half"}},
      {"maxwellian", {"amplitude", "temperature", "drift"}},
      {"witness", {"amplitude", "w_max", "l_max"}},
      {"bump", {"amplitude", "center", "half_width", "l_half"}},
      {"table", {"tail_mass"}},
  };
  return m;
}

void set_species_key(DistributionSpec& d, const std::string& key, const std::string& field,
                     const std::string& v) {
  if (field == "family") {
    if (!family_params().count(v)) throw ConfigError(key + ": unknown family '" + v + "'");
    d.family = v;
  } else if (field == "path") {
    d.path = v;
  } else {
    d.params[field] = to_double(key, v);
  }
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(n) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues parse_overrides(const std::vector<std::string>& items) {
  KeyValues kv;
  for (const auto& it : items) {
    std::istringstream in(it);
    for (auto& [k, v] : parse_key_values(in, "--set " + it)) kv[k] = v;
  }
  return kv;
}

SolverConfig config_from_keys(const KeyValues& kv) {
  SolverConfig c;
  auto& q = c.quad;
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"geometry.r_b", [&](auto& k, auto& v) { c.r_b = to_double(k, v); }},
      {"probe.phi_p", [&](auto& k, auto& v) { c.phi_p = to_double(k, v); }},
      {"plasma.lambda", [&](auto& k, auto& v) { c.lambda = to_double(k, v); }},
      {"plasma.mu", [&](auto& k, auto& v) { c.mu = to_double(k, v); }},
      {"grid.nodes", [&](auto& k, auto& v) { c.nodes = to_unsigned(k, v); }},
      {"quadrature.l_panels", [&](auto& k, auto& v) { q.l_panels = to_int(k, v); }},
      {"quadrature.l_resolution", [&](auto& k, auto& v) { q.l_resolution = to_int(k, v); }},
      {"quadrature.l_order", [&](auto& k, auto& v) { q.l_order = to_int(k, v); }},
      {"quadrature.w_panels", [&](auto& k, auto& v) { q.w_panels = to_int(k, v); }},
      {"quadrature.w_resolution", [&](auto& k, auto& v) { q.w_resolution = to_int(k, v); }},
      {"quadrature.w_order", [&](auto& k, auto& v) { q.w_order = to_int(k, v); }},
      {"quadrature.graded", [&](auto& k, auto& v) { q.graded = to_bool(k, v); }},
      {"quadrature.grading_floor", [&](auto& k, auto& v) { q.grading_floor = to_double(k, v); }},
      {"quadrature.norm_panels", [&](auto& k, auto& v) { q.norm_panels = to_int(k, v); }},
      {"quadrature.norm_order", [&](auto& k, auto& v) { q.norm_order = to_int(k, v); }},
      {"quadrature.sup_nodes", [&](auto& k, auto& v) { q.sup_nodes = to_unsigned(k, v); }},
      {"quadrature.reference_w_nodes", [&](auto& k, auto& v) { q.reference_w_nodes = to_unsigned(k, v); }},
      {"quadrature.w_max", [&](auto& k, auto& v) { q.w_max = to_double(k, v); }},
      {"quadrature.l_max", [&](auto& k, auto& v) { q.l_max = to_double(k, v); }},
      {"quadrature.tail_tolerance", [&](auto& k, auto& v) { q.tail_tolerance = to_double(k, v); }},
      {"solver.tol_outer", [&](auto& k, auto& v) { c.tol_outer = to_double(k, v); }},
      {"solver.tol_inner", [&](auto& k, auto& v) { c.tol_inner = to_double(k, v); }},
      {"solver.tol_consistency", [&](auto& k, auto& v) { c.tol_consistency = to_double(k, v); }},
      {"solver.max_outer", [&](auto& k, auto& v) { c.max_outer = to_unsigned(k, v); }},
      {"solver.max_inner", [&](auto& k, auto& v) { c.max_inner = to_unsigned(k, v); }},
      {"solver.omega", [&](auto& k, auto& v) { c.omega = to_double(k, v); }},
      {"solver.initializer",
       [&](auto& k, auto& v) {
         if (v == "linear") c.initializer = Initializer::linear;
         else if (v == "newton") c.initializer = Initializer::newton;
         else throw ConfigError(k + ": expected linear or newton, got '" + v + "'");
       }},
      {"seed", [&](auto& k, auto& v) { c.seed = to_unsigned(k, v); }},
      {"sweep.phi_p", [&](auto& k, auto& v) { c.sweep = to_list(k, v); }},
      {"sweep.warm_start", [&](auto& k, auto& v) { c.sweep_warm_start = to_bool(k, v); }},
  };
  // family first so that parameter keys can be checked against it
  for (const char* sp : {"ions", "electrons"}) {
    const auto it = kv.find(std::string(sp) + ".family");
    if (it != kv.end()) set_species_key(sp[0] == 'i' ? c.ions : c.electrons, it->first, "family", it->second);
  }
  for (const auto& [key, value] : kv) {
    if (const auto s = setters.find(key); s != setters.end()) {
      s->second(key, value);
      continue;
    }
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if ((section == "ions" || section == "electrons") && dot != std::string::npos) {
      const std::string field = key.substr(dot + 1);
      if (field == "family") continue;
      set_species_key(section == "ions" ? c.ions : c.electrons, key, field, value);
      continue;
    }
    throw ConfigError("unknown key '" + key + "'");
  }
  return c;
}

SolverConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  KeyValues kv = parse_key_values(in, path.string());
  for (auto& [k, v] : parse_overrides(overrides)) kv[k] = v;
  SolverConfig c = config_from_keys(kv);
  // relative table paths are relative to the config file
  for (auto* d : {&c.ions, &c.electrons})
    if (!d->path.empty() && std::filesystem::path(d->path).is_relative())
      d->path = (path.parent_path() / d->path).string();
  validate(c);
  return c;
}

BoundaryDistribution make_distribution(const DistributionSpec& spec) {
  const auto fam = family_params().find(spec.family);
  if (fam == family_params().end()) throw ConfigError("unknown distribution family '" + spec.family + "'");
  for (const auto& [k, v] : spec.params)
    if (std::find(fam->second.begin(), fam->second.end(), k) == fam->second.end())
      throw ConfigError("distribution '" + spec.family + "' has no parameter '" + k + "'");
  auto get = [&](const char* k, double def) {
    const auto it = spec.params.find(k);
    return it == spec.params.end() ? def : it->second;
  };
  try {
    if (spec.family == "zero") return BoundaryDistribution::zero();
    if (spec.family == "box")
      return BoundaryDistribution::box(get("height", 1.0), get("w_extent", 1.0), get("l_half", 1.0));
    if (spec.family == "maxwellian")
      return BoundaryDistribution::half_maxwellian(get("amplitude", 1.0), get("temperature", 1.0),
                                                   get("drift", 0.0));
    if (spec.family == "witness")
      return BoundaryDistribution::witness(get("amplitude", 1.0), get("w_max", 8.0), get("l_max", 4.0));
    if (spec.family == "bump")
      return BoundaryDistribution::bump(get("amplitude", 1.0), get("center", -1.0),
                                        get("half_width", 0.5), get("l_half", 1.0));
    if (spec.path.empty()) throw ConfigError("table distribution needs a path");
    return BoundaryDistribution::from_csv(spec.path, get("tail_mass", 0.0));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("distribution '" + spec.family + "': " + e.what());
  }
}

void validate(const SolverConfig& c) {
  if (!(c.r_b > 1.0)) throw ConfigError("geometry.r_b must exceed 1");
  if (!(c.lambda > 0.0)) throw ConfigError("plasma.lambda must be positive");
  if (!(c.mu > 0.0 && c.mu <= 1.0)) throw ConfigError("plasma.mu must lie in (0, 1]");
  if (c.nodes < 3) throw ConfigError("grid.nodes must be at least 3");
  if (!(c.tol_outer > 0.0 && c.tol_inner > 0.0 && c.tol_consistency > 0.0))
    throw ConfigError("solver tolerances must be positive");
  if (c.max_outer < 1 || c.max_inner < 1) throw ConfigError("iteration caps must be at least 1");
  if (!(c.omega > 0.0 && c.omega <= 1.0)) throw ConfigError("solver.omega must lie in (0, 1]");
  try {
    c.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("quadrature: ") + e.what());
  }
  for (const auto* d : {&c.ions, &c.electrons}) {
    const BoundaryDistribution f = make_distribution(*d);
    NormReport n;
    try {
      n = compute_norms(f, c.quad);
    } catch (const std::exception& e) {
      throw ConfigError("distribution '" + d->family + "': " + e.what());
    }
    if (!n.finite) throw ConfigError("distribution '" + d->family + "' has a non-finite norm");
  }
}

FixedPointOptions fixed_point_options(const SolverConfig& c, std::size_t threads) {
  FixedPointOptions o;
  o.phi_p = c.phi_p;
  o.lambda = c.lambda;
  o.mu = c.mu;
  o.nodes = c.nodes;
  o.tol_outer = c.tol_outer;
  o.tol_inner = c.tol_inner;
  o.tol_consistency = c.tol_consistency;
  o.max_outer = c.max_outer;
  o.omega = c.omega;
  o.initializer = c.initializer;
  o.inner.max_iterations = c.max_inner;
  o.inner.threads = threads;
  return o;
}

std::string to_key_values(const SolverConfig& c) {
  std::map<std::string, std::string> kv{
      {"geometry.r_b", format(c.r_b)},
      {"probe.phi_p", format(c.phi_p)},
      {"plasma.lambda", format(c.lambda)},
      {"plasma.mu", format(c.mu)},
      {"grid.nodes", std::to_string(c.nodes)},
      {"quadrature.l_panels", std::to_string(c.quad.l_panels)},
      {"quadrature.l_resolution", std::to_string(c.quad.l_resolution)},
      {"quadrature.l_order", std::to_string(c.quad.l_order)},
      {"quadrature.w_panels", std::to_string(c.quad.w_panels)},
      {"quadrature.w_resolution", std::to_string(c.quad.w_resolution)},
      {"quadrature.w_order", std::to_string(c.quad.w_order)},
      {"quadrature.graded", c.quad.graded ? "true" : "false"},
      {"quadrature.grading_floor", format(c.quad.grading_floor)},
      {"quadrature.norm_panels", std::to_string(c.quad.norm_panels)},
      {"quadrature.norm_order", std::to_string(c.quad.norm_order)},
      {"quadrature.sup_nodes", std::to_string(c.quad.sup_nodes)},
      {"quadrature.reference_w_nodes", std::to_string(c.quad.reference_w_nodes)},
      {"quadrature.w_max", format(c.quad.w_max)},
      {"quadrature.l_max", format(c.quad.l_max)},
      {"quadrature.tail_tolerance", format(c.quad.tail_tolerance)},
      {"solver.tol_outer", format(c.tol_outer)},
      {"solver.tol_inner", format(c.tol_inner)},
      {"solver.tol_consistency", format(c.tol_consistency)},
      {"solver.max_outer", std::to_string(c.max_outer)},
      {"solver.max_inner", std::to_string(c.max_inner)},
      {"solver.omega", format(c.omega)},
      {"solver.initializer", c.initializer == Initializer::newton ? "newton" : "linear"},
      {"seed", std::to_string(c.seed)},
      {"sweep.warm_start", c.sweep_warm_start ? "true" : "false"},
  };
  if (!c.sweep.empty()) {
    std::string list;
    for (double v : c.sweep) list += (list.empty() ? "" : ", ") + format(v);
    kv["sweep.phi_p"] = list;
  }
  for (const auto* sp : {"ions", "electrons"}) {
    const DistributionSpec& d = sp[0] == 'i' ? c.ions : c.electrons;
    kv[std::string(sp) + ".family"] = d.family;
    for (const auto& [k, v] : d.params) kv[std::string(sp) + "." + k] = format(v);
    if (!d.path.empty()) kv[std::string(sp) + ".path"] = d.path;
  }
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace langmuir::app
