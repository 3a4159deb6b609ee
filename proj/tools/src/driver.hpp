#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"
#include "langmuir/characteristics.hpp"
#include "langmuir/fixedpoint.hpp"

namespace langmuir::app {

enum ExitCode : int { kConverged = 0, kUsage = 1, kNotConverged = 2 };

KineticModel make_model(const SolverConfig& c);

SolveReport solve(const SolverConfig& c, std::size_t threads);

/// Everything except wall time, so equal configs give equal bytes.
nlohmann::ordered_json report_json(const SolverConfig& c, const SolveReport& rep);

/// r, phi, n_i, n_e, j_i, j_e with 17 significant digits.
void write_profile_csv(std::ostream& out, const SolveReport& rep);
void write_history_csv(std::ostream& out, const SolveReport& rep);

/// Writes profile.csv, history.csv, report.json and timing.json into dir.
int run_solve(const SolverConfig& c, const std::filesystem::path& dir, std::size_t threads,
              std::ostream& log);

struct SweepRow {
  double phi_p = 0.0;
  double j_i = 0.0, j_e = 0.0, j_total = 0.0;
  bool converged = false;
  std::string message;
};

/// One solve per phi_p. Rows are independent (parallel over threads) unless
/// warm starts are requested, which chains them in list order.
std::vector<SweepRow> sweep(const SolverConfig& c, const std::vector<double>& phi_p,
                            std::size_t threads);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes sweep.csv into dir; converged only if every row is.
int run_sweep(const SolverConfig& c, const std::filesystem::path& dir, std::size_t threads,
              std::ostream& log);

/// Norms and the density ceiling of one distribution; throws ConfigError if any is non-finite.
nlohmann::ordered_json validate_distribution(const DistributionSpec& spec, const QuadratureSpec& quad,
                                             double r_b);

/// t, r, v_r, v_theta, e, L of one characteristic.
void write_trace_csv(std::ostream& out, const Trajectory& tr);

/// Reads the r and phi columns of a profile CSV.
RadialGridFunction read_profile_phi(const std::filesystem::path& path);

}  // namespace langmuir::app
