#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "csgs/energy.hpp"
#include "csgs/gauge.hpp"
#include "csgs/grid.hpp"
#include "csgs/nonexistence.hpp"
#include "csgs/solver.hpp"
#include "csgs/verify.hpp"

namespace csgs {

using nlohmann::json;

/// Build id baked in at configure time (git describe).
const char* build_id();

/// Full-precision decimal form (%.17g) used for CSV cells.
std::string fmt17(double x);

/// Doubles that JSON cannot carry (inf/nan) become null.
json json_number(double x);

/// Envelope shared by every artifact: schema_version, command, params,
/// build_id.  Payload fields are added by the callers.
json artifact_envelope(const std::string& command, const Params& prm);

json grid_to_json(const Grid& g);             // {R, n, stretch}
json params_to_json(const Params& prm);
json breakdown_to_json(const FunctionalBreakdown& bd);
json residuals_to_json(const Residuals& res);
json solve_to_json(const Params& prm, const SolveResult& sr);
json threshold_to_json(const Params& prm, const ThresholdResult& tr);
json sweep_to_json(const Params& prm, const SweepResult& sw);
json report_to_json(const CheckReport& rep);
json shooting_to_json(const Params& prm, const ShootingResult& sh);

/// CSV writers.  Columns: profile "r,value"; gauge "r,h,V1,V2";
/// solve profile "r,u,h,V1,V2"; sweep "axis,value,omega_sharp,
/// omega_sufficient,t_star".  All cells %.17g.
void write_profile_csv(std::ostream& os, const RadialFunction& u);
void write_gauge_csv(std::ostream& os, const GaugeFields& gf);
void write_solve_csv(std::ostream& os, const RadialFunction& u,
                     const GaugeFields& gf);
void write_sweep_csv(std::ostream& os, const SweepResult& sw);

}  // namespace csgs
