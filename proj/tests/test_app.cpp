#include <random>
#include <sstream>

#include "critmass/app.hpp"
#include "critmass/errors.hpp"
#include "doctest.h"

using namespace critmass;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidSpec;
}

RunConfig config_with(std::initializer_list<const char*> overrides) {
  Json doc = Json::object();
  for (const char* o : overrides) apply_override(doc, o);
  return parse_config(std::move(doc));
}

}  // namespace

TEST_CASE("overrides build nested objects and parse JSON values") {
  Json doc = Json::object();
  apply_override(doc, "model.m1=1.5");
  apply_override(doc, "sweep.M1=[1, 2.5]");
  apply_override(doc, "out=results");
  apply_override(doc, "criteria.alpha_scan=true");
  CHECK(doc["model"]["m1"].get<double>() == 1.5);
  CHECK(doc["sweep"]["M1"].size() == 2);
  CHECK(doc["out"].get<std::string>() == "results");
  CHECK(doc["criteria"]["alpha_scan"].get<bool>());
  apply_override(doc, "model.m1=1.25");
  CHECK(doc["model"]["m1"].get<double>() == 1.25);

  CHECK(kind_of([&] { apply_override(doc, "no-equals-sign"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { apply_override(doc, "=3"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { apply_override(doc, "out.deeper=3"); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("configuration defaults sit at the intersection point in three dimensions") {
  const RunConfig cfg = parse_config(Json::object());
  CHECK(cfg.params.dim == 3);
  CHECK(cfg.params.m1 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(cfg.params.at_intersection());
  CHECK(cfg.solver.grid.size() == 512);
  CHECK(cfg.parallel == 1);
  CHECK(!cfg.datum);
  CHECK(cfg.initial.is_null());
}

TEST_CASE("strict parsing rejects unknown keys, bad types and bad values") {
  CHECK(kind_of([] { config_with({"colour=1"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"model.colour=1"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"model.m1=\"heavy\""}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"model.m1=0.9"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"model.dim=2"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"masses.M1=-1"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"datum.lm1=1"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"solver.cfl=0"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"criteria.theta_lo=0"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"parallel=0"}); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_with({"objective.kind=\"Other\""}); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("library errors map onto the documented exit codes") {
  CHECK(exit_code_for(ErrorKind::ConfigInvalid) == 2);
  CHECK(exit_code_for(ErrorKind::InvalidSpec) == 2);
  CHECK(exit_code_for(ErrorKind::MissingConstants) == 4);
  CHECK(exit_code_for(ErrorKind::NonFiniteState) == 5);
}

TEST_CASE("real numbers are written with enough digits to round-trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0), exponent(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
    CHECK(std::stod(format_real(x)) == x);
  }
}

TEST_CASE("classification at the intersection point agrees with the direct verdict") {
  for (double pi_star : {0.01, 0.5, 3.0}) {
    RunConfig cfg = config_with({"masses.M1=4", "masses.M2=9"});
    cfg.constants.pi_star = pi_star;
    const Classification c = classify(cfg);
    const Verdict direct = theorem13_verdict(4.0, 9.0, pi_star, cfg.params, cfg.criteria.tol);
    CHECK(c.outcome == direct.outcome);
    CHECK(c.json["schema"].get<std::string>() == kSchema);
    CHECK(c.json["theorem"].get<std::string>() == "T13");
    CHECK(c.json["regime"]["label"].get<std::string>() == "Intersection");
    CHECK(c.json["constants"]["pi_star"].get<double>() == pi_star);
  }
}

TEST_CASE("classification needs its constants or permission to compute them") {
  CHECK(kind_of([] { classify(parse_config(Json::object())); }) == ErrorKind::MissingConstants);
  const RunConfig off = config_with({"model.m1=1.3", "model.m2=1.25"});
  CHECK(kind_of([&] { classify(off); }) == ErrorKind::MissingConstants);
  const RunConfig with_datum =
      config_with({"model.m1=1.3", "model.m2=1.25", "datum.lm1=1", "datum.lm2=1", "datum.F0=0"});
  CHECK(kind_of([&] { classify(with_datum); }) == ErrorKind::MissingConstants);
}

TEST_CASE("regimes outside both criteria are reported without a verdict") {
  const RunConfig cfg = config_with({"model.m1=1.1", "model.m2=1.1"});
  const Classification c = classify(cfg);
  CHECK(c.outcome == Outcome::Indeterminate);
  CHECK(c.json["theorem"].is_null());
  CHECK(c.json["regime"]["label"].get<std::string>() != "Intersection");
}

TEST_CASE("classify prints a parseable document that keeps full precision") {
  RunConfig cfg = config_with({"masses.M1=1", "masses.M2=2"});
  cfg.constants.pi_star = 0.1234567890123456789;
  std::ostringstream out;
  CHECK(cmd_classify(cfg, out) == 0);
  const Json doc = Json::parse(out.str());
  CHECK(doc["constants"]["pi_star"].get<double>() == *cfg.constants.pi_star);
}

TEST_CASE("sweeps need exactly one non-empty grid") {
  std::ostringstream out;
  CHECK(kind_of([&] { cmd_sweep(parse_config(Json::object()), out); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { cmd_sweep(config_with({"sweep.M1=[1]"}), out); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { cmd_sweep(config_with({"sweep.M1=[1]", "sweep.M2=[1]", "sweep.m1=[1.2]"}), out); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { config_with({"sweep.mu=0"}); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("simulate writes a summary carrying the schema tag") {
  const RunConfig cfg = config_with({"masses.M1=2", "masses.M2=3", "solver.cells=64", "solver.r_max=4",
                                     "solver.t_end=0.01", R"(initial={"u1": {"family": "Gaussian", "sigma": 0.25},
                                                                       "u2": {"family": "Ball", "radius": 1}})"});
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);
  const Json doc = Json::parse(out.str());
  CHECK(doc["schema"].get<std::string>() == kSchema);
  CHECK(doc["stop_reason"].get<std::string>() == "TimeReached");
  CHECK(doc["drifts"]["mass"].get<double>() <= 1e-10);
  CHECK(doc["free_energy_nonincreasing"].get<bool>());
}
