#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csgs/io.hpp"
#include "csgs/nonexistence.hpp"
#include "csgs/solver.hpp"
#include "csgs/verify.hpp"

namespace {

using csgs::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;

int default_jobs() {
  if (const char* env = std::getenv("CSGS_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

void emit_json(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::invalid_argument("cannot write " + out_path);
  os << text;
}

// CSV path: explicit --csv wins; otherwise derived from --out.
std::string sidecar(const std::string& csv_path, const std::string& out_path) {
  if (!csv_path.empty()) return csv_path;
  if (out_path.empty()) return {};
  auto dot = out_path.find_last_of('.');
  return (dot == std::string::npos ? out_path : out_path.substr(0, dot)) +
         ".csv";
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot write " + path);
  return os;
}

std::vector<double> linspace(double from, double to, int steps) {
  if (steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
  std::vector<double> v(steps);
  if (steps == 1) {
    v[0] = from;
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v[i] = from + (to - from) * double(i) / double(steps - 1);
  return v;
}

struct Cli {
  csgs::Params prm;
  csgs::SolveConfig scfg;
  csgs::SampleSpec spec;
  std::string out, csv, axis;
  double from = 0.0, to = 0.0;
  int steps = 0;
  int jobs = default_jobs();
  double oracle_step = 5e-4;

  int run_solve() {
    prm.validate();
    if (!(prm.p > 5.0))
      throw std::invalid_argument("solve: needs p > 5");
    csgs::SolveResult sr = csgs::minimize_on_M(prm, scfg);

    json j = csgs::solve_to_json(prm, sr);
    emit_json(j, out);
    std::string cp = sidecar(csv, out);
    if (!cp.empty()) {
      auto os = open_csv(cp);
      csgs::write_solve_csv(os, sr.u_star,
                            csgs::compute_gauge(sr.u_star, prm.mu));
    }

    bool gates = sr.residuals.nehari <= scfg.nehari_tol &&
                 sr.residuals.pohozaev <= scfg.pohozaev_tol &&
                 sr.residuals.pde_l2 <= scfg.pde_tol;
    std::cerr << "solve: sigma=" << sr.sigma << " iters=" << sr.iterations
              << " converged=" << (sr.converged ? "yes" : "no")
              << " |N|=" << sr.residuals.nehari
              << " |P|=" << sr.residuals.pohozaev
              << " pde=" << sr.residuals.pde_l2 << " (" << sr.message << ")\n";
    return sr.converged && gates ? kExitOk : kExitNotConverged;
  }

  int run_threshold() {
    csgs::ThresholdResult tr = csgs::thresholds(prm);
    emit_json(csgs::threshold_to_json(prm, tr), out);
    std::cerr << "threshold: regime=" << csgs::regime_name(tr.regime)
              << " omega_sharp=" << tr.omega_sharp
              << " omega_sufficient=" << tr.omega_sufficient
              << " t_star=" << tr.t_star << "\n";
    return kExitOk;
  }

  int run_sweep() {
    if (axis == "omega")
      throw std::invalid_argument(
          "sweep: thresholds do not depend on omega; axis must be q, mu or "
          "p");
    csgs::SweepResult sw =
        csgs::monotonicity_sweep(axis, prm, linspace(from, to, steps), jobs);
    emit_json(csgs::sweep_to_json(prm, sw), out);
    std::string cp = sidecar(csv, out);
    if (!cp.empty()) {
      auto os = open_csv(cp);
      csgs::write_sweep_csv(os, sw);
    }
    std::cerr << "sweep: axis=" << sw.axis << " rows=" << sw.rows.size()
              << " monotone_ok=" << (sw.monotone_ok ? "yes" : "no")
              << " mu_bound_ok=" << (sw.mu_bound_ok ? "yes" : "no") << "\n";
    return sw.monotone_ok && sw.mu_bound_ok ? kExitOk : kExitNotConverged;
  }

  int run_verify(double bounds_R, int bounds_n, double ident_R, int ident_n,
                 double tol) {
    prm.validate();
    csgs::GridPtr gb = csgs::make_grid(bounds_R, bounds_n);
    csgs::GridPtr gi = csgs::make_grid(ident_R, ident_n);
    double alpha = csgs::default_alpha(prm.p);

    std::vector<csgs::CheckReport> reps;
    reps.push_back(csgs::check_quartic_bound(spec, gb, jobs));
    reps.push_back(csgs::check_sextic_bound(spec, gb, jobs));
    reps.push_back(csgs::check_young_combined(spec, gb, prm, jobs));
    reps.push_back(csgs::check_identities(spec, gi, prm, alpha, tol, jobs));

    json j = csgs::artifact_envelope("verify", prm);
    j["seed"] = spec.seed;
    j["count"] = spec.count;
    j["alpha"] = alpha;
    j["bounds_grid"] = csgs::grid_to_json(*gb);
    j["identity_grid"] = csgs::grid_to_json(*gi);
    j["identity_tol"] = tol;
    json arr = json::array();
    int violations = 0;
    for (const auto& rep : reps) {
      arr.push_back(csgs::report_to_json(rep));
      violations += rep.violations;
      std::cerr << "verify: " << rep.name << " violations=" << rep.violations
                << " worst=" << rep.worst_margin << "\n";
    }
    j["checks"] = arr;
    emit_json(j, out);
    return violations == 0 ? kExitOk : kExitNotConverged;
  }

  int run_oracle() {
    if (!(prm.omega > 0.0) || !(prm.lambda > 0.0) || !(prm.p > 1.0))
      throw std::invalid_argument("oracle: needs omega, lambda > 0 and p > 1");
    double R = scfg.R > 0.0 ? scfg.R : 20.0 / std::sqrt(prm.omega);
    csgs::GridPtr g = csgs::make_grid(R, scfg.n, scfg.stretch);
    csgs::ShootingResult sh =
        csgs::shooting_oracle(prm.omega, prm.lambda, prm.p, g, oracle_step);

    csgs::Params op = csgs::Params::oracle(prm.omega, prm.lambda, prm.p);
    emit_json(csgs::shooting_to_json(op, sh), out);
    std::string cp = sidecar(csv, out);
    if (!cp.empty() && sh.ok) {
      auto os = open_csv(cp);
      csgs::write_profile_csv(os, sh.u);
    }
    std::cerr << "oracle: u0=" << sh.u0 << " energy=" << sh.energy
              << " bisections=" << sh.bisections << " ("
              << sh.message << ")\n";
    return sh.ok ? kExitOk : kExitNotConverged;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Radial ground states of a gauged modified Schrodinger equation:\n"
      "constrained minimization, non-existence thresholds, identity and\n"
      "inequality checks."};
  app.require_subcommand(1);
  Cli cli;

  auto add_params = [&](CLI::App* cmd, bool with_mu_q) {
    cmd->add_option("--p", cli.prm.p, "nonlinearity exponent");
    cmd->add_option("--omega", cli.prm.omega, "mass parameter (> 0)");
    cmd->add_option("--lambda", cli.prm.lambda, "nonlinearity strength (> 0)");
    if (with_mu_q) {
      cmd->add_option("--mu", cli.prm.mu, "quasilinear strength (> 0)");
      cmd->add_option("--q", cli.prm.q, "gauge coupling (> 0)");
    }
  };
  auto add_out = [&](CLI::App* cmd, bool with_csv) {
    cmd->add_option("--out", cli.out, "write JSON here instead of stdout");
    if (with_csv)
      cmd->add_option("--csv", cli.csv,
                      "profile CSV path (default: sidecar of --out)");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "ground state by constrained minimization (p > 5)");
  add_params(solve, true);
  add_out(solve, true);
  solve->add_option("--alpha", cli.scfg.alpha,
                    "dilation exponent (0: admissible default)");
  solve->add_option("--R", cli.scfg.R, "domain radius (0: 20/sqrt(omega))");
  solve->add_option("--n", cli.scfg.n, "grid nodes")
      ->check(CLI::PositiveNumber);
  solve->add_option("--stretch", cli.scfg.stretch, "grid grading factor");
  solve->add_option("--init-width", cli.scfg.init_width,
                    "initial Gaussian width (0: 1/sqrt(omega))");
  solve->add_option("--max-iters", cli.scfg.max_iters, "iteration cap");
  solve->add_option("--grad-tol", cli.scfg.grad_tol,
                    "reduced-gradient stopping tolerance");
  solve->add_flag("--debug-fd", cli.scfg.debug_fd,
                  "finite-difference check of the descent slope");

  CLI::App* threshold = app.add_subcommand(
      "threshold", "non-existence thresholds omega*/omega_bar (1 < p < 5)");
  add_params(threshold, true);
  add_out(threshold, false);

  CLI::App* sweep =
      app.add_subcommand("sweep", "threshold sweep along q, mu or p");
  add_params(sweep, true);
  add_out(sweep, true);
  sweep->add_option("--axis", cli.axis, "q, mu or p")->required();
  sweep->add_option("--from", cli.from, "first value")->required();
  sweep->add_option("--to", cli.to, "last value")->required();
  sweep->add_option("--steps", cli.steps, "number of points")->required();
  sweep->add_option("--jobs", cli.jobs, "parallel rows (env CSGS_JOBS)");

  CLI::App* verify = app.add_subcommand(
      "verify", "randomized identity and inequality checks");
  add_params(verify, true);
  add_out(verify, false);
  verify->add_option("--seed", cli.spec.seed, "sample stream seed");
  verify->add_option("--count", cli.spec.count, "samples per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--jobs", cli.jobs, "worker threads (env CSGS_JOBS)");
  double bounds_R = 12.0, ident_R = 12.0, ident_tol = 1e-6;
  int bounds_n = 4001, ident_n = 96001;
  verify->add_option("--bounds-R", bounds_R, "grid radius for the bounds");
  verify->add_option("--bounds-n", bounds_n, "grid nodes for the bounds");
  verify->add_option("--identity-R", ident_R, "grid radius for identities");
  verify->add_option("--identity-n", ident_n, "grid nodes for identities");
  verify->add_option("--identity-tol", ident_tol, "identity tolerance");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "semilinear reference profile by shooting (q = mu = 0)");
  add_params(oracle, false);
  add_out(oracle, true);
  oracle->add_option("--R", cli.scfg.R, "domain radius (0: 20/sqrt(omega))");
  oracle->add_option("--n", cli.scfg.n, "grid nodes")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--step", cli.oracle_step, "integrator step")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) return cli.run_solve();
    if (threshold->parsed()) return cli.run_threshold();
    if (sweep->parsed()) return cli.run_sweep();
    if (verify->parsed())
      return cli.run_verify(bounds_R, bounds_n, ident_R, ident_n, ident_tol);
    return cli.run_oracle();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
}
