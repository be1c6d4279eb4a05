#pragma once

#include <string>

#include "critmass/criteria.hpp"
#include "critmass/solver.hpp"
#include "critmass/variational.hpp"
#include "json.hpp"

namespace critmass {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "critmass/1";

// Shortest text that reads back to the same double (17 significant digits).
std::string format_real(double x);

// Header t,M1,M2,lm1,lm2,H,F,S,I,linf1,linf2,dt then one row per sample.
std::string trajectory_csv(const Trajectory& traj);
Json trajectory_summary(const Trajectory& traj);

Json to_json(const Verdict& v);
Json to_json(const MaximizerResult& r, bool with_profiles);
Json to_json(const ConstantEstimate& e, bool with_profiles);
Json to_json(const EnergyReport& e);

}  // namespace critmass
