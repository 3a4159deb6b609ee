#include "driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "langmuir/kinetics.hpp"
#include "langmuir/parallel.hpp"
#include "langmuir/poisson.hpp"

namespace langmuir::app {
namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::ordered_json norms_json(const BoundaryDistribution& f, const QuadratureSpec& quad,
                                  double r_b) {
  const NormReport n = compute_norms(f, quad);
  nlohmann::ordered_json j;
  j["family"] = n.family;
  j["l1"] = n.l1;
  j["l1l_linfw"] = n.l1l_linfw;
  j["l1w_linfl"] = n.l1w_linfl;
  j["gamma"] = n.gamma;
  j["tail_mass"] = n.tail_mass;
  j["finite"] = n.finite;
  j["norm_bound"] = norm_bound(f, quad);
  j["g_bound"] = g_bound(f, quad, r_b);
  return j;
}

}  // namespace

KineticModel make_model(const SolverConfig& c) {
  return KineticModel(c.r_b, make_distribution(c.ions), make_distribution(c.electrons), c.quad);
}

SolveReport solve(const SolverConfig& c, std::size_t threads) {
  const KineticModel model = make_model(c);
  return iterate(model, fixed_point_options(c, threads));
}

nlohmann::ordered_json report_json(const SolverConfig& c, const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["converged"] = rep.converged;
  j["message"] = rep.message;
  j["outer_iterations"] = rep.history.size();
  j["predictor_residuals"] = rep.predictor_history;

  nlohmann::ordered_json res;
  res["last_update"] = rep.history.empty() ? 0.0 : rep.history.back().delta;
  res["self_consistency"] = rep.consistency.combined;
  res["self_consistency_heights"] = rep.consistency.heights;
  res["self_consistency_radii"] = rep.consistency.radii;
  res["direct_poisson"] = rep.direct_residual;
  res["inner"] = rep.history.empty() ? 0.0 : rep.history.back().inner_residual;
  j["residuals"] = res;

  double psi2 = 0.0;
  for (const auto& it : rep.history) psi2 = std::max(psi2, it.psi_second_sup);
  j["bounds"] = {{"psi_second_sup", psi2}, {"psi_second_bound", rep.psi_second_bound}};

  const double j_i = rep.j_i.value(0), j_e = rep.j_e.value(0);
  j["probe_currents"] = {{"j_i", j_i}, {"j_e", j_e}, {"j_total", j_i - j_e}};

  const KineticModel model = make_model(c);
  j["norms"] = {{"ions", norms_json(model.distribution(Species::ion), c.quad, c.r_b)},
                {"electrons", norms_json(model.distribution(Species::electron), c.quad, c.r_b)}};

  nlohmann::ordered_json cfg;
  std::istringstream in(to_key_values(c));
  for (const auto& [k, v] : parse_key_values(in)) cfg[k] = v;
  j["config"] = cfg;
  return j;
}

void write_profile_csv(std::ostream& out, const SolveReport& rep) {
  out << "r,phi,n_i,n_e,j_i,j_e\n";
  for (std::size_t k = 0; k < rep.phi.size(); ++k) {
    out << csv_number(rep.phi.node(k)) << ',' << csv_number(rep.phi.value(k)) << ','
        << csv_number(rep.n_i.value(k)) << ',' << csv_number(rep.n_e.value(k)) << ','
        << csv_number(rep.j_i.value(k)) << ',' << csv_number(rep.j_e.value(k)) << '\n';
  }
}

void write_history_csv(std::ostream& out, const SolveReport& rep) {
  out << "iteration,delta,consistency,consistency_heights,consistency_radii,inner_iterations,"
         "inner_residual,energy,psi_second_sup\n";
  for (std::size_t n = 0; n < rep.history.size(); ++n) {
    const auto& it = rep.history[n];
    out << n + 1 << ',' << csv_number(it.delta) << ',' << csv_number(it.consistency.combined) << ','
        << csv_number(it.consistency.heights) << ',' << csv_number(it.consistency.radii) << ','
        << it.inner_iterations << ',' << csv_number(it.inner_residual) << ','
        << csv_number(it.energy) << ',' << csv_number(it.psi_second_sup) << '\n';
  }
}

int run_solve(const SolverConfig& c, const std::filesystem::path& dir, std::size_t threads,
              std::ostream& log) {
  std::filesystem::create_directories(dir);
  const SolveReport rep = solve(c, threads);
  std::ostringstream profile, history;
  write_profile_csv(profile, rep);
  write_history_csv(history, rep);
  write_file(dir / "profile.csv", profile.str());
  write_file(dir / "history.csv", history.str());
  write_file(dir / "report.json", report_json(c, rep).dump(2) + "\n");
  write_file(dir / "timing.json",
             nlohmann::ordered_json{{"wall_seconds", rep.wall_seconds}}.dump(2) + "\n");
  log << (rep.converged ? "converged" : "not converged") << ": " << rep.message << " ("
      << rep.history.size() << " outer iterations, self-consistency " << rep.consistency.combined
      << ", direct residual " << rep.direct_residual << ")\n";
  return rep.converged ? kConverged : kNotConverged;
}

std::vector<SweepRow> sweep(const SolverConfig& c, const std::vector<double>& phi_p,
                            std::size_t threads) {
  if (phi_p.empty()) throw ConfigError("sweep: empty phi_p list");
  std::vector<SweepRow> rows(phi_p.size());
  const KineticModel model = make_model(c);
  auto fill = [&](std::size_t i, const SolveReport& rep) {
    rows[i].phi_p = phi_p[i];
    rows[i].j_i = rep.j_i.value(0);
    rows[i].j_e = rep.j_e.value(0);
    rows[i].j_total = rows[i].j_i - rows[i].j_e;
    rows[i].converged = rep.converged;
    rows[i].message = rep.message;
  };
  auto options = [&](double p, std::size_t inner_threads) {
    SolverConfig row = c;
    row.phi_p = p;
    return fixed_point_options(row, inner_threads);
  };
  auto guarded = [&](std::size_t i, const FixedPointOptions& o) {
    try {
      const SolveReport rep = iterate(model, o);
      fill(i, rep);
      return std::optional<SolveReport>(rep);
    } catch (const std::exception& e) {
      rows[i] = {phi_p[i], 0.0, 0.0, 0.0, false, e.what()};
      return std::optional<SolveReport>();
    }
  };

  if (!c.sweep_warm_start) {
    parallel_for(phi_p.size(), threads, [&](std::size_t i) { guarded(i, options(phi_p[i], 1)); });
    return rows;
  }
  std::optional<RadialGridFunction> prev_psi;
  for (std::size_t i = 0; i < phi_p.size(); ++i) {
    FixedPointOptions o = options(phi_p[i], threads);
    if (prev_psi) o.initial_phi = recover_phi(*prev_psi, phi_p[i], c.r_b);
    const auto rep = guarded(i, o);
    if (rep) prev_psi = rep->psi;
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "phi_p,j_i,j_e,j_total,converged\n";
  for (const auto& r : rows)
    out << csv_number(r.phi_p) << ',' << csv_number(r.j_i) << ',' << csv_number(r.j_e) << ','
        << csv_number(r.j_total) << ',' << (r.converged ? 1 : 0) << '\n';
}

int run_sweep(const SolverConfig& c, const std::filesystem::path& dir, std::size_t threads,
              std::ostream& log) {
  if (c.sweep.empty()) throw ConfigError("sweep.phi_p is not set");
  std::filesystem::create_directories(dir);
  const auto rows = sweep(c, c.sweep, threads);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  write_file(dir / "sweep.csv", out.str());
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.converged;
    if (!r.converged) log << "phi_p = " << r.phi_p << ": " << r.message << '\n';
  }
  log << rows.size() << " rows, " << (all ? "all converged" : "some rows did not converge") << '\n';
  return all ? kConverged : kNotConverged;
}

nlohmann::ordered_json validate_distribution(const DistributionSpec& spec, const QuadratureSpec& quad,
                                             double r_b) {
  const BoundaryDistribution f = make_distribution(spec);
  nlohmann::ordered_json j;
  try {
    j = norms_json(f, quad, r_b);
  } catch (const std::exception& e) {
    throw ConfigError("distribution '" + spec.family + "': " + e.what());
  }
  if (!j["finite"].get<bool>() || !std::isfinite(j["g_bound"].get<double>()))
    throw ConfigError("distribution '" + spec.family + "' has a non-finite norm");
  return j;
}

void write_trace_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,r,v_r,v_theta,e,L\n";
  for (const auto& s : tr.samples)
    out << csv_number(s.t) << ',' << csv_number(s.r) << ',' << csv_number(s.v_r) << ','
        << csv_number(s.v_theta) << ',' << csv_number(s.energy) << ',' << csv_number(s.momentum)
        << '\n';
}

RadialGridFunction read_profile_phi(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,phi", 0) != 0)
    throw ConfigError(path.string() + ": expected a header starting with r,phi");
  std::vector<double> r, phi;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
      throw ConfigError(path.string() + ": malformed row '" + line + "'");
    r.push_back(std::stod(a));
    phi.push_back(std::stod(b));
  }
  try {
    return {std::move(r), std::move(phi)};
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace langmuir::app
