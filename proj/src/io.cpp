#include "csgs/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace csgs {

#ifndef CSGS_BUILD_ID
#define CSGS_BUILD_ID "unknown"
#endif

const char* build_id() { return CSGS_BUILD_ID; }

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json params_to_json(const Params& prm) {
  return {{"omega", prm.omega}, {"mu", prm.mu},
          {"q", prm.q},         {"lambda", prm.lambda},
          {"p", prm.p},         {"oracle_limit", prm.oracle_limit}};
}

json artifact_envelope(const std::string& command, const Params& prm) {
  return {{"schema_version", 1},
          {"command", command},
          {"params", params_to_json(prm)},
          {"build_id", build_id()}};
}

json grid_to_json(const Grid& g) {
  return {{"R", g.R}, {"n", g.n}, {"stretch", g.stretch}};
}

json breakdown_to_json(const FunctionalBreakdown& bd) {
  return {{"A", json_number(bd.A)}, {"B", json_number(bd.B)},
          {"C", json_number(bd.C)}, {"D", json_number(bd.D)},
          {"E", json_number(bd.E)}, {"F", json_number(bd.F)},
          {"I", json_number(bd.I)}, {"N", json_number(bd.N)},
          {"P", json_number(bd.P)}};
}

json residuals_to_json(const Residuals& res) {
  return {{"nehari", json_number(res.nehari)},
          {"pohozaev", json_number(res.pohozaev)},
          {"gamma", json_number(res.gamma)},
          {"pde_l2", json_number(res.pde_l2)},
          {"reduced_grad", json_number(res.reduced_grad)}};
}

json solve_to_json(const Params& prm, const SolveResult& sr) {
  json j = artifact_envelope("solve", prm);
  j["grid"] = sr.u_star.grid ? grid_to_json(*sr.u_star.grid) : json(nullptr);
  j["alpha"] = sr.alpha;
  j["sigma"] = json_number(sr.sigma);
  j["breakdown"] = breakdown_to_json(sr.bd);
  j["residuals"] = residuals_to_json(sr.residuals);
  j["decay_slope"] = json_number(sr.decay_slope);
  j["iterations"] = sr.iterations;
  j["converged"] = sr.converged;
  j["message"] = sr.message;
  if (!sr.fd_slope_error.empty()) {
    json arr = json::array();
    for (double e : sr.fd_slope_error) arr.push_back(json_number(e));
    j["fd_slope_error"] = arr;
  }
  return j;
}

json threshold_to_json(const Params& prm, const ThresholdResult& tr) {
  json j = artifact_envelope("threshold", prm);
  j["regime"] = regime_name(tr.regime);
  j["omega_sharp"] = json_number(tr.omega_sharp);
  j["omega_sufficient"] = json_number(tr.omega_sufficient);
  j["sufficient_overflow"] = tr.sufficient_overflow;
  j["sufficient_is_analogy"] = tr.sufficient_is_analogy;
  j["t_star"] = json_number(tr.t_star);
  return j;
}

json sweep_to_json(const Params& prm, const SweepResult& sw) {
  json j = artifact_envelope("sweep", prm);
  j["axis"] = sw.axis;
  json rows = json::array();
  for (const SweepRow& r : sw.rows) {
    rows.push_back({{"value", r.value},
                    {"omega_sharp", json_number(r.omega_sharp)},
                    {"omega_sufficient", json_number(r.omega_sufficient)},
                    {"t_star", json_number(r.t_star)},
                    {"sufficient_overflow", r.sufficient_overflow}});
  }
  j["rows"] = rows;
  j["monotone_ok"] = sw.monotone_ok;
  j["mu_bound_ok"] = sw.mu_bound_ok;
  return j;
}

json report_to_json(const CheckReport& rep) {
  return {{"name", rep.name},
          {"count", rep.count},
          {"skipped", rep.skipped},
          {"violations", rep.violations},
          {"worst_margin", json_number(rep.worst_margin)},
          {"worst_seed_index", rep.worst_seed_index}};
}

json shooting_to_json(const Params& prm, const ShootingResult& sh) {
  json j = artifact_envelope("oracle", prm);
  j["energy"] = json_number(sh.energy);
  j["u0"] = json_number(sh.u0);
  j["bisections"] = sh.bisections;
  j["ok"] = sh.ok;
  j["message"] = sh.message;
  j["grid"] = sh.u.grid ? grid_to_json(*sh.u.grid) : json(nullptr);
  return j;
}

void write_profile_csv(std::ostream& os, const RadialFunction& u) {
  os << "r,value\n";
  const Grid& g = *u.grid;
  for (int i = 0; i < g.n; ++i)
    os << fmt17(g.r[i]) << ',' << fmt17(u.v[i]) << '\n';
}

void write_gauge_csv(std::ostream& os, const GaugeFields& gf) {
  os << "r,h,V1,V2\n";
  const Grid& g = *gf.h.grid;
  for (int i = 0; i < g.n; ++i)
    os << fmt17(g.r[i]) << ',' << fmt17(gf.h.v[i]) << ','
       << fmt17(gf.V1.v[i]) << ',' << fmt17(gf.V2.v[i]) << '\n';
}

void write_solve_csv(std::ostream& os, const RadialFunction& u,
                     const GaugeFields& gf) {
  os << "r,u,h,V1,V2\n";
  const Grid& g = *u.grid;
  for (int i = 0; i < g.n; ++i)
    os << fmt17(g.r[i]) << ',' << fmt17(u.v[i]) << ',' << fmt17(gf.h.v[i])
       << ',' << fmt17(gf.V1.v[i]) << ',' << fmt17(gf.V2.v[i]) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& sw) {
  os << "axis,value,omega_sharp,omega_sufficient,t_star\n";
  for (const SweepRow& r : sw.rows)
    os << sw.axis << ',' << fmt17(r.value) << ',' << fmt17(r.omega_sharp)
       << ',' << fmt17(r.omega_sufficient) << ',' << fmt17(r.t_star) << '\n';
}

}  // namespace csgs
