#include "critmass/serialize.hpp"

#include <fmt/format.h>

namespace critmass {

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,M1,M2,lm1,lm2,H,F,S,I,linf1,linf2,dt\n";
  for (const Sample& s : traj.samples) {
    const EnergyReport& e = s.energy;
    for (double x : {s.t, e.M1, e.M2, e.lm1, e.lm2, e.H, e.F, e.S, e.I, s.linf1, s.linf2}) {
      out += format_real(x);
      out += ',';
    }
    out += format_real(s.dt);
    out += '\n';
  }
  return out;
}

Json to_json(const EnergyReport& e) {
  Json j{{"M1", e.M1}, {"M2", e.M2}, {"lm1", e.lm1}, {"lm2", e.lm2}, {"H", e.H}, {"F", e.F}};
  j["D"] = e.D ? Json(*e.D) : Json(nullptr);
  j["S"] = e.S;
  j["I"] = e.I;
  return j;
}

Json trajectory_summary(const Trajectory& traj) {
  Json j{{"schema", kSchema},
         {"stop_reason", std::string(to_string(traj.stop_reason))},
         {"blowup_is_proxy", traj.blowup_is_proxy()},
         {"t_final", traj.final_state.t},
         {"steps", traj.steps},
         {"violations", traj.energy_violations},
         {"energy_tolerance", traj.energy_tolerance},
         {"max_energy_increase", traj.max_energy_increase},
         {"free_energy_nonincreasing", traj.free_energy_nonincreasing()},
         {"drifts", {{"mass", traj.mass_drift}, {"clipped_mass", traj.clipped_mass}}},
         {"virial_residual", traj.virial_residual()}};
  if (!traj.samples.empty()) {
    j["initial"] = to_json(traj.samples.front().energy);
    j["final"] = to_json(traj.samples.back().energy);
  }
  return j;
}

Json to_json(const Verdict& v) {
  Json evidence = Json::object();
  for (const auto& [key, value] : v.evidence) evidence[key] = value;
  Json scan = Json::array();
  for (const ThetaSample& t : v.scan)
    scan.push_back({{"theta", t.theta},
                    {"energy_bound", t.energy_bound},
                    {"R", t.R},
                    {"x0", t.x0},
                    {"energy_ok", t.energy_ok},
                    {"outcome", std::string(to_string(t.outcome))}});
  return {{"schema", kSchema},
          {"outcome", std::string(to_string(v.outcome))},
          {"theorem", std::string(to_string(v.theorem))},
          {"evidence", std::move(evidence)},
          {"scan", std::move(scan)}};
}

Json to_json(const MaximizerResult& r, bool with_profiles) {
  Json j{{"constant", r.constant},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"residual", r.residual},
         {"seed_objective", r.seed_objective},
         {"cells", r.grid().size()},
         {"r_max", r.grid().r_max()}};
  if (with_profiles) {
    Json radii = Json::array();
    for (std::size_t k = 0; k < r.h1.size(); ++k) radii.push_back(r.grid().center(k));
    j["r"] = std::move(radii);
    j["h1"] = std::vector<double>(r.h1.values().begin(), r.h1.values().end());
    j["h2"] = std::vector<double>(r.h2.values().begin(), r.h2.values().end());
  }
  return j;
}

Json to_json(const ConstantEstimate& e, bool with_profiles) {
  return {{"schema", kSchema},
          {"constant", e.best.constant},
          {"fine", e.fine},
          {"extrapolated", e.extrapolated},
          {"error_bar", e.error_bar},
          {"seeds", e.seeds},
          {"converged", e.converged},
          {"best", to_json(e.best, with_profiles)}};
}

}  // namespace critmass
