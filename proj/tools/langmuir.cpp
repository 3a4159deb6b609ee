// Command line front end: solve, sweep, validate, trace.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "driver.hpp"
#include "langmuir/parallel.hpp"

using namespace langmuir;
using namespace langmuir::app;

int main(int argc, char** argv) {
  CLI::App app{"Stationary Vlasov-Poisson solver for a cylindrical Langmuir probe"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  std::size_t threads = 0;
  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("-c,--config", config_path, "key = value configuration file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-s,--set", overrides, "override a configuration key (key=value)");
    sub->add_option("-j,--threads", threads, "worker threads (default: LANGMUIR_THREADS or 1)");
  };

  auto* solve_cmd = app.add_subcommand("solve", "self-consistent solve for one probe potential");
  common(solve_cmd, true);
  solve_cmd->add_option("-o,--out", out_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "current-voltage characteristic over sweep.phi_p");
  common(sweep_cmd, true);
  sweep_cmd->add_option("-o,--out", out_dir, "output directory");

  auto* validate_cmd = app.add_subcommand("validate", "norms and density ceiling of the distributions");
  common(validate_cmd, true);

  auto* trace_cmd = app.add_subcommand("trace", "integrate one characteristic and dump it as CSV");
  std::string profile, species = "ion", trace_out;
  double r0 = 1.5, vr = -0.5, vt = 0.0, r_b = 2.0, dt = 1e-3, t_max = 100.0;
  trace_cmd->add_option("--profile", profile, "profile CSV (r, phi, ...) from solve; default phi = 0")
      ->check(CLI::ExistingFile);
  trace_cmd->add_option("--r-b", r_b, "outer radius when no profile is given");
  trace_cmd->add_option("--r", r0, "start radius")->required();
  trace_cmd->add_option("--vr", vr, "radial velocity")->required();
  trace_cmd->add_option("--vt", vt, "angular velocity")->required();
  trace_cmd->add_option("--species", species, "ion or electron")
      ->check(CLI::IsMember({"ion", "electron"}));
  trace_cmd->add_option("--dt", dt, "RK4 step");
  trace_cmd->add_option("--t-max", t_max, "time limit");
  trace_cmd->add_option("-o,--out", trace_out, "output file (default: stdout)");
  trace_cmd->add_option("-j,--threads", threads, "unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (threads == 0) threads = default_threads();

  try {
    if (*trace_cmd) {
      const RadialGridFunction phi =
          profile.empty() ? RadialGridFunction::constant(uniform_nodes(1.0, r_b, 2), 0.0)
                          : read_profile_phi(profile);
      IntegratorOptions o;
      o.dt = dt;
      o.t_max = t_max;
      o.record = true;
      const PhasePoint p{r0, vr, vt, species == "ion" ? Species::ion : Species::electron};
      const Trajectory tr = integrate_characteristic(p, Potential(phi), o);
      if (trace_out.empty()) {
        write_trace_csv(std::cout, tr);
      } else {
        std::ofstream out(trace_out);
        if (!out) throw ConfigError("cannot write " + trace_out);
        write_trace_csv(out, tr);
      }
      std::cerr << "exit " << to_string(tr.exit) << " at t = " << tr.time << ", origin "
                << to_string(classify(p, phi)) << ", energy drift " << tr.energy_drift << '\n';
      return kConverged;
    }

    const SolverConfig c = load_config(config_path, overrides);
    if (*validate_cmd) {
      nlohmann::ordered_json j;
      j["ions"] = validate_distribution(c.ions, c.quad, c.r_b);
      j["electrons"] = validate_distribution(c.electrons, c.quad, c.r_b);
      std::cout << j.dump(2) << '\n';
      return kConverged;
    }
    if (*solve_cmd) return run_solve(c, out_dir, threads, std::cerr);
    return run_sweep(c, out_dir, threads, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
