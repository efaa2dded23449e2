#pragma once

#include <string>
#include <vector>

#include "csgs/energy.hpp"
#include "csgs/fibration.hpp"
#include "csgs/grid.hpp"

namespace csgs {

struct SolveConfig {
  double R = 0.0;        ///< 0: use 20/sqrt(omega)
  int n = 2001;
  double stretch = 1.0;
  double alpha = 0.0;    ///< 0: default_alpha(p)
  double init_width = 0.0;      ///< 0: 1/sqrt(omega); unit-mass Gaussian
  int max_iters = 2000;
  double grad_tol = 1e-6;       ///< relative reduced-gradient stop
  double constraint_tol = 1e-9; ///< relative |Gamma| at accepted iterates
  double nehari_tol = 1e-4;     ///< |N| / (A + omega B)
  double pohozaev_tol = 1e-4;   ///< |P| / (A + omega B)
  double pde_tol = 1e-3;        ///< residual / forcing scale
  double armijo_c = 1e-4;
  double step_floor = 1e-12;
  bool debug_fd = false;  ///< finite-difference check of the reduced slope
                          ///< on the first three iterations
};

struct Residuals {
  double nehari = 0.0;
  double pohozaev = 0.0;
  double gamma = 0.0;
  double pde_l2 = 0.0;
  double reduced_grad = 0.0;
};

struct SolveResult {
  RadialFunction u_star;
  double sigma = 0.0;       ///< I(u_star), the constrained minimum level
  double alpha = 0.0;
  FunctionalBreakdown bd;
  Residuals residuals;
  double decay_slope = 0.0;  ///< log-linear tail slope on [0.6 R, 0.9 R]
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> fd_slope_error;  ///< filled in debug_fd mode
};

/// Constrained minimization of I on M = { Gamma = 0 } by reduced descent:
/// H^1-preconditioned gradient steps with Armijo backtracking, positivity
/// enforced by |u|, reprojection after every step.  Non-convergence is
/// reported in the result, never thrown.
SolveResult minimize_on_M(const Params& prm, const SolveConfig& cfg = {});

/// Strong-form residual field of the Euler-Lagrange equation
///   -Lap u + omega u - mu u Lap(u^2) + q V1 (1+mu u^2) u + q V2 u
///     - lambda |u|^{p-1} u
/// with the difference Laplacian (origin limit 2 u''(0)).
RadialFunction pde_residual_field(const RadialFunction& u, const Params& prm);

/// L^2 norm of the residual field over the plane.
double pde_residual(const RadialFunction& u, const Params& prm);

/// Forcing scale || lambda |u|^p ||_2 used to normalize pde_residual.
double forcing_scale(const RadialFunction& u, const Params& prm);

struct ShootingResult {
  double energy = 0.0;   ///< action of the profile (q = mu = 0 functional)
  double u0 = 0.0;       ///< separatrix height u(0)
  RadialFunction u;      ///< profile resampled on the requested grid
  int bisections = 0;
  bool ok = false;
  std::string message;
};

/// Semilinear reference ground state (-Lap u + omega u = lambda u^p) by
/// shooting on u(0): RK4 integration of the radial ODE, bisection between
/// sign crossing (overshoot) and turnaround (undershoot).  Serves as an
/// independent oracle for the q = mu = 0 limit of the solver.
ShootingResult shooting_oracle(double omega, double lambda, double p,
                               const GridPtr& out_grid, double step = 5e-4);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;                ///< window contained usable positive values
  bool superexponential = false;  ///< slope keeps steepening outward
  double window_lo = 0.0, window_hi = 0.0;
};

/// Least-squares slope of log u on [0.6 R, 0.9 R].  A Gaussian-type tail is
/// flagged superexponential by comparing the slopes of the two half-windows.
DecayFit decay_rate(const RadialFunction& u);

}  // namespace csgs
