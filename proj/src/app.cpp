#include "critmass/app.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <spdlog/spdlog.h>
#include <thread>
#include <tuple>

#include "critmass/battery.hpp"
#include "critmass/errors.hpp"
#include "critmass/initdata.hpp"

namespace critmass {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

// Typed access to one JSON object that rejects unknown keys.
class Section {
 public:
  Section(const Json& doc, std::string name, std::set<std::string> allowed) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = &doc.at(name_);
      if (!node_->is_object()) invalid("section '" + name_ + "' must be an object");
      for (const auto& [key, unused] : node_->items())
        if (!allowed.count(key)) invalid("unknown key '" + name_ + "." + key + "'");
    }
  }

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key) && !node_->at(key).is_null(); }

  template <class T>
  std::optional<T> maybe(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    try {
      return node_->at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      invalid("key '" + name_ + "." + key + "' has the wrong type");
    }
  }

  template <class T>
  T get(const std::string& key, T fallback) const {
    return maybe<T>(key).value_or(fallback);
  }

 private:
  std::string name_;
  const Json* node_ = nullptr;
};

void write_file(const RunConfig& cfg, const std::string& name, const std::string& content) {
  if (!cfg.out_dir) return;
  std::filesystem::create_directories(*cfg.out_dir);
  const auto path = *cfg.out_dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) invalid("cannot write " + path.string());
  f << content;
}

ObjectiveSpec default_objective(const RunConfig& cfg) {
  if (cfg.objective) return *cfg.objective;
  if (cfg.params.at_intersection()) return ObjectiveSpec::pi(cfg.params, theta0_of(cfg.M1, cfg.M2, cfg.params));
  return ObjectiveSpec::lambda(cfg.params);
}

ConstantEstimate estimate(const RunConfig& cfg, const ObjectiveSpec& spec) {
  spdlog::info("estimating {} constant at n={}", to_string(spec.kind), cfg.maximizer.cells);
  return estimate_constant(spec, cfg.maximizer, cfg.seeds, cfg.seed);
}

DataFamily parse_family(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("family")) invalid(where + " needs a 'family'");
  const std::string family = j.at("family").get<std::string>();
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) invalid(where + "." + key + " must be a number");
    return j.at(key).get<double>();
  };
  if (family == "Gaussian") return Gaussian{number("sigma")};
  if (family == "Ball") return Ball{number("radius")};
  if (family == "Barenblatt") return Barenblatt{number("m"), number("t0")};
  if (family == "RescaledMaximizer") return RescaledMaximizer{number("mu"), RadialDensity()};
  invalid(where + ": unknown family '" + family + "'");
}

std::pair<RadialDensity, RadialDensity> initial_data(const RunConfig& cfg) {
  const RadialGrid& grid = cfg.solver.grid;
  if (cfg.initial.is_null()) invalid("this command needs an 'initial' section");
  if (cfg.initial.contains("pair")) {
    const Json& pair = cfg.initial.at("pair");
    if (pair.value("family", "") != "NegativeEnergy") invalid("initial.pair.family must be NegativeEnergy");
    const double mu = pair.value("mu", 1.0);
    const MaximizerResult best = maximize(default_objective(cfg), cfg.maximizer);
    const auto data = negative_energy_pair(cfg.M1, cfg.M2, best, mu, grid, cfg.params);
    return {data.u1, data.u2};
  }
  if (!cfg.initial.contains("u1") || !cfg.initial.contains("u2")) invalid("initial needs 'u1' and 'u2' or 'pair'");
  DataFamily f1 = parse_family(cfg.initial.at("u1"), "initial.u1");
  DataFamily f2 = parse_family(cfg.initial.at("u2"), "initial.u2");
  auto* r1 = std::get_if<RescaledMaximizer>(&f1);
  auto* r2 = std::get_if<RescaledMaximizer>(&f2);
  if (r1 || r2) {
    const MaximizerResult best = maximize(default_objective(cfg), cfg.maximizer);
    if (r1) r1->profile = best.h1;
    if (r2) r2->profile = best.h2;
  }
  return {make({f1, cfg.M1}, grid), make({f2, cfg.M2}, grid)};
}

Json regime_json(const Parameters& p) {
  const RegimeLabel label = classify_regime(p);
  return {{"label", std::string(to_string(label.regime))},
          {"p", label.exponents.p},
          {"q", label.exponents.q},
          {"r", label.exponents.r}};
}

InitialDatum datum_of(const RunConfig& cfg) {
  if (cfg.datum) return {cfg.M1, cfg.M2, cfg.datum->lm1, cfg.datum->lm2, cfg.datum->F0};
  if (cfg.initial.is_null())
    throw Error(ErrorKind::MissingConstants, "classification needs 'datum' norms or 'initial' data");
  const auto [u1, u2] = initial_data(cfg);
  const EnergyReport e = free_energy(u1, u2, cfg.params);
  return {e.M1, e.M2, e.lm1, e.lm2, e.F};
}

// Smallest rescaling at or above one half that keeps both profiles inside 45% of the solver domain.
double fitted_mu(const MaximizerResult& best, const RadialGrid& solver_grid) {
  double support = 0.0;
  for (const RadialDensity* h : {&best.h1, &best.h2})
    support = std::max(support, h->grid().face(h->support_end()));
  return std::max(0.5, support / (0.45 * solver_grid.r_max()));
}

std::string outcome_of_run(StopReason reason) {
  switch (reason) {
    case StopReason::TimeReached:
    case StopReason::SteadyState: return "Global";
    case StopReason::BlowUpDetected: return "BlowUp";
    case StopReason::StepUnderflow: return "Indeterminate";
  }
  return "Indeterminate";
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingConstants: return kExitMissingConstants;
    case ErrorKind::NonFiniteState: return kExitOverflow;
    default: return kExitConfig;
  }
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) invalid("override must look like KEY=VALUE: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) invalid("empty key in override " + path);
    if (!node->is_object()) {
      if (!node->is_null()) invalid("override path crosses a non-object: " + path);
      *node = Json::object();
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

Json read_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) invalid("cannot open config " + path.string());
  Json doc = Json::parse(f, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) invalid("config " + path.string() + " is not a JSON object");
  return doc;
}

RunConfig parse_config(Json doc) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  static const std::set<std::string> top{"model",  "masses",   "datum", "initial", "constants", "objective",
                                         "maximizer", "solver", "criteria", "sweep", "verify",   "seed",
                                         "parallel",  "out"};
  for (const auto& [key, unused] : doc.items())
    if (!top.count(key)) invalid("unknown top-level key '" + key + "'");

  RunConfig cfg;
  try {
    const Section model(doc, "model", {"dim", "m1", "m2", "newton_const"});
    const int dim = model.get<int>("dim", 3);
    const double mstar = 2.0 - 2.0 / dim;
    cfg.params = Parameters::create(dim, model.get("m1", mstar), model.get("m2", mstar),
                                    model.maybe<double>("newton_const"));
  } catch (const Error& e) {
    invalid(e.what());
  }

  const Section masses(doc, "masses", {"M1", "M2"});
  cfg.M1 = masses.get("M1", 1.0);
  cfg.M2 = masses.get("M2", 1.0);
  if (!(cfg.M1 > 0.0 && cfg.M2 > 0.0)) invalid("masses must be positive");

  const Section datum(doc, "datum", {"lm1", "lm2", "F0"});
  if (datum.present()) {
    if (!datum.has("lm1") || !datum.has("lm2") || !datum.has("F0")) invalid("datum needs lm1, lm2 and F0");
    cfg.datum = RunConfig::Datum{*datum.maybe<double>("lm1"), *datum.maybe<double>("lm2"), *datum.maybe<double>("F0")};
    if (!(cfg.datum->lm1 > 0.0 && cfg.datum->lm2 > 0.0)) invalid("datum norms must be positive");
  }
  if (doc.contains("initial")) {
    cfg.initial = doc.at("initial");
    if (!cfg.initial.is_object()) invalid("initial must be an object");
  }

  const Section constants(doc, "constants", {"lambda_star", "pi_star", "c_star", "alpha", "beta", "compute"});
  cfg.constants.lambda_star = constants.maybe<double>("lambda_star");
  cfg.constants.pi_star = constants.maybe<double>("pi_star");
  cfg.constants.c_star = constants.maybe<double>("c_star");
  cfg.constants.alpha = constants.maybe<double>("alpha");
  cfg.constants.beta = constants.maybe<double>("beta");
  cfg.constants.compute = constants.get("compute", false);

  const Section objective(doc, "objective", {"kind", "alpha", "beta", "theta0"});
  if (objective.present()) {
    const std::string kind = objective.get<std::string>("kind", "CStar");
    try {
      if (kind == "CStar") {
        cfg.objective = ObjectiveSpec::cstar(cfg.params);
      } else if (kind == "Pi") {
        cfg.objective = ObjectiveSpec::pi(cfg.params, objective.get("theta0", 0.5));
      } else if (kind == "Lambda") {
        if (objective.has("alpha")) {
          const double a = *objective.maybe<double>("alpha");
          cfg.objective = ObjectiveSpec::lambda(cfg.params, a, objective.get("beta", beta_for_alpha(cfg.params, a)));
        } else {
          cfg.objective = ObjectiveSpec::lambda(cfg.params);
        }
      } else {
        invalid("objective.kind must be Lambda, Pi or CStar");
      }
      cfg.objective->validate();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigInvalid) throw;
      invalid(e.what());
    }
  }

  const Section maximizer(doc, "maximizer", {"cells", "r_max", "max_iter", "tol", "seeds"});
  cfg.maximizer.cells = maximizer.get<std::size_t>("cells", 512);
  cfg.maximizer.r_max = maximizer.get("r_max", 10.0);
  cfg.maximizer.max_iter = maximizer.get<std::size_t>("max_iter", 10000);
  cfg.maximizer.tol = maximizer.get("tol", 1e-8);
  cfg.seeds = maximizer.get<std::size_t>("seeds", 4);
  if (cfg.maximizer.cells < 8 || !(cfg.maximizer.r_max > 0.0) || cfg.seeds < 1 || !(cfg.maximizer.tol > 0.0))
    invalid("maximizer needs cells >= 8, r_max > 0, tol > 0 and seeds >= 1");

  const Section solver(doc, "solver", {"cells", "r_max", "epsilon", "dt_init", "dt_min", "t_end", "cfl",
                                       "blowup_linf_factor", "diag_every"});
  const auto cells = solver.get<std::size_t>("cells", 512);
  const double r_max = solver.get("r_max", 6.0);
  if (cells < 8 || !(r_max > 0.0)) invalid("solver needs cells >= 8 and r_max > 0");
  cfg.solver = SolverConfig{cfg.params, RadialGrid(cfg.params.dim, cells, r_max)};
  cfg.solver.epsilon = solver.get("epsilon", 0.0);
  cfg.solver.dt_init = solver.get("dt_init", 1e-2);
  cfg.solver.dt_min = solver.get("dt_min", 1e-12);
  cfg.solver.t_end = solver.get("t_end", 1.0);
  cfg.solver.cfl = solver.get("cfl", 0.4);
  cfg.solver.blowup_linf_factor = solver.get("blowup_linf_factor", 1e4);
  cfg.solver.diag_every = solver.get<std::size_t>("diag_every", 10);
  cfg.solver.validate();

  const Section criteria(doc, "criteria", {"theta_scan", "theta_lo", "theta_hi", "tol", "alpha_scan"});
  cfg.criteria.theta_scan = criteria.get<std::size_t>("theta_scan", 101);
  cfg.criteria.theta_lo = criteria.get("theta_lo", 0.005);
  cfg.criteria.theta_hi = criteria.get("theta_hi", 0.995);
  cfg.criteria.tol = criteria.get("tol", 1e-6);
  cfg.alpha_scan = criteria.get("alpha_scan", false);
  if (cfg.criteria.theta_scan < 1 || !(cfg.criteria.theta_lo > 0.0 && cfg.criteria.theta_hi < 1.0 &&
                                       cfg.criteria.theta_lo <= cfg.criteria.theta_hi))
    invalid("criteria theta scan must lie inside (0, 1)");

  const Section sweep(doc, "sweep", {"M1", "M2", "m1", "m2", "mu"});
  cfg.sweep.mu = sweep.maybe<double>("mu");
  if (cfg.sweep.mu && !(*cfg.sweep.mu > 0.0)) invalid("sweep.mu must be positive");
  cfg.sweep.M1 = sweep.get<std::vector<double>>("M1", {});
  cfg.sweep.M2 = sweep.get<std::vector<double>>("M2", {});
  cfg.sweep.m1 = sweep.get<std::vector<double>>("m1", {});
  cfg.sweep.m2 = sweep.get<std::vector<double>>("m2", {});

  const Section verify(doc, "verify", {"cells", "seeds", "sections", "verbose"});
  if (verify.has("cells")) cfg.maximizer.cells = *verify.maybe<std::size_t>("cells");
  if (verify.has("seeds")) cfg.seeds = *verify.maybe<std::size_t>("seeds");
  cfg.sections = verify.get<std::vector<std::string>>("sections", {});
  cfg.verbose = verify.get("verbose", false);

  try {
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("parallel")) cfg.parallel = doc.at("parallel").get<std::size_t>();
    if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    invalid("seed, parallel and out must be a count, a count and a path");
  }
  if (cfg.parallel < 1) invalid("parallel must be at least 1");
  cfg.source = std::move(doc);
  return cfg;
}

Classification classify(const RunConfig& cfg) {
  const Parameters& p = cfg.params;
  const RegimeLabel label = classify_regime(p);
  Classification out;
  Json constants = Json::object();

  if (label.regime == Regime::Intersection) {
    double pi_star = 0.0;
    if (cfg.constants.pi_star) {
      pi_star = *cfg.constants.pi_star;
      constants["pi_star_source"] = "given";
    } else if (cfg.constants.compute) {
      const ConstantEstimate e = estimate(cfg, ObjectiveSpec::pi(p, theta0_of(cfg.M1, cfg.M2, p)));
      pi_star = e.extrapolated;
      constants["pi_star_source"] = "computed";
      constants["pi_star_error_bar"] = e.error_bar;
      constants["converged"] = e.converged;
    } else {
      throw Error(ErrorKind::MissingConstants, "pi_star is required at the intersection point (or constants.compute)");
    }
    constants["pi_star"] = pi_star;
    const Verdict v = theorem13_verdict(cfg.M1, cfg.M2, pi_star, p, cfg.criteria.tol);
    out.outcome = v.outcome;
    out.json = to_json(v);
  } else if (label.regime == Regime::RegionOneSix) {
    const InitialDatum u = datum_of(cfg);
    Verdict v;
    if (cfg.alpha_scan) {
      if (!cfg.constants.compute)
        throw Error(ErrorKind::MissingConstants, "the alpha scan needs constants.compute");
      v = theorem12_alpha_scan(
          u, p, [&](double a, double b) { return estimate(cfg, ObjectiveSpec::lambda(p, a, b)).extrapolated; }, 11,
          cfg.criteria);
      constants["lambda_star_source"] = "computed per alpha";
    } else {
      const double alpha = cfg.constants.alpha.value_or(default_alpha(p));
      const double beta = cfg.constants.beta.value_or(beta_for_alpha(p, alpha));
      try {
        check_alpha_beta(p, alpha, beta);
      } catch (const Error& e) {
        invalid(e.what());
      }
      double lambda_star = 0.0;
      if (cfg.constants.lambda_star) {
        lambda_star = *cfg.constants.lambda_star;
        constants["lambda_star_source"] = "given";
      } else if (cfg.constants.compute) {
        const ConstantEstimate e = estimate(cfg, ObjectiveSpec::lambda(p, alpha, beta));
        lambda_star = e.extrapolated;
        constants["lambda_star_source"] = "computed";
        constants["lambda_star_error_bar"] = e.error_bar;
        constants["converged"] = e.converged;
      } else {
        throw Error(ErrorKind::MissingConstants, "lambda_star is required in region (p>=1, q>=1, r>1)");
      }
      constants["lambda_star"] = lambda_star;
      v = theorem12_verdict(u, p, alpha, beta, lambda_star, cfg.criteria);
    }
    out.outcome = v.outcome;
    out.json = to_json(v);
  } else {
    out.json = {{"schema", kSchema}, {"outcome", "Indeterminate"}, {"theorem", nullptr}};
  }
  out.json["regime"] = regime_json(p);
  out.json["constants"] = std::move(constants);
  return out;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Classification c = classify(cfg);
  const std::string text = c.json.dump(2) + "\n";
  out << text;
  write_file(cfg, "verdict.json", text);
  return kExitOk;
}

int cmd_constant(const RunConfig& cfg, std::ostream& out) {
  const ObjectiveSpec spec = cfg.objective.value_or(
      cfg.params.at_intersection() ? ObjectiveSpec::cstar(cfg.params) : ObjectiveSpec::lambda(cfg.params));
  const ConstantEstimate e = estimate(cfg, spec);
  Json j = to_json(e, false);
  j["objective"] = {{"kind", std::string(to_string(spec.kind))},
                    {"alpha", spec.alpha},
                    {"beta", spec.beta},
                    {"theta0", spec.theta0}};
  out << j.dump(2) << "\n";
  if (cfg.out_dir) {
    Json full = to_json(e, true);
    full["objective"] = j["objective"];
    write_file(cfg, "constant.json", full.dump(2) + "\n");
  }
  if (!e.converged) {
    spdlog::warn("maximizer did not converge; the estimate is still reported");
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto [u1, u2] = initial_data(cfg);
  const Trajectory traj = run(u1, u2, cfg.solver);
  const std::string summary = trajectory_summary(traj).dump(2) + "\n";
  out << summary;
  write_file(cfg, "summary.json", summary);
  write_file(cfg, "trajectory.csv", trajectory_csv(traj));
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const bool by_mass = !cfg.sweep.M1.empty() || !cfg.sweep.M2.empty();
  const bool by_exponent = !cfg.sweep.m1.empty() || !cfg.sweep.m2.empty();
  if (by_mass == by_exponent) invalid("sweep needs exactly one of the (M1, M2) or (m1, m2) grids");
  const auto& xs = by_mass ? cfg.sweep.M1 : cfg.sweep.m1;
  const auto& ys = by_mass ? cfg.sweep.M2 : cfg.sweep.m2;
  if (xs.empty() || ys.empty()) invalid("sweep grid is empty");

  std::vector<RunConfig> points;
  for (double x : xs)
    for (double y : ys) {
      RunConfig c = cfg;
      try {
        if (by_mass) {
          if (!(x > 0.0 && y > 0.0)) invalid("sweep masses must be positive");
          c.M1 = x;
          c.M2 = y;
        } else {
          c.params = Parameters::create(cfg.params.dim, x, y, cfg.source.contains("model") &&
                                                                      cfg.source["model"].contains("newton_const")
                                                                  ? std::optional<double>(cfg.params.newton_const)
                                                                  : std::nullopt);
          c.solver.params = c.params;
        }
      } catch (const Error& e) {
        invalid(e.what());
      }
      c.constants.compute = true;
      c.out_dir.reset();
      points.push_back(std::move(c));
    }
  std::sort(points.begin(), points.end(), [](const RunConfig& a, const RunConfig& b) {
    return std::tie(a.M1, a.M2, a.params.m1, a.params.m2) < std::tie(b.M1, b.M2, b.params.m1, b.params.m2);
  });

  std::vector<std::string> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const RunConfig& c = points[i];
        const Classification predicted = classify(c);
        std::pair<RadialDensity, RadialDensity> data;
        if (!c.initial.is_null()) {
          data = initial_data(c);
        } else if (c.params.at_intersection()) {
          // the same rescaled maximizer pair on both sides of Sigma = 1
          const MaximizerResult best = maximize(default_objective(c), c.maximizer);
          const double mu = c.sweep.mu.value_or(fitted_mu(best, c.solver.grid));
          if (predicted.outcome == Outcome::BlowUp) {
            const auto d = negative_energy_pair(c.M1, c.M2, best, mu, c.solver.grid, c.params);
            data = {d.u1, d.u2};
          } else {
            data = {make({RescaledMaximizer{mu, best.h1}, c.M1}, c.solver.grid),
                    make({RescaledMaximizer{mu, best.h2}, c.M2}, c.solver.grid)};
          }
        } else {
          invalid("an exponent sweep needs an 'initial' section");
        }
        const Trajectory traj = run(data.first, data.second, c.solver);
        const std::string want = std::string(to_string(predicted.outcome));
        const std::string seen = outcome_of_run(traj.stop_reason);
        std::string agree;
        if (predicted.outcome == Outcome::Global || predicted.outcome == Outcome::BlowUp)
          agree = want == seen ? "true" : "false";
        const Json& ev = predicted.json["evidence"];
        const double sigma = ev.contains("Sigma") ? ev["Sigma"].get<double>()
                             : ev.contains("identity_residual") ? ev["identity_residual"].get<double>()
                                                                : 0.0;
        rows[i] = fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_real(c.M1), format_real(c.M2),
                              format_real(c.params.m1), format_real(c.params.m2),
                              predicted.json["regime"]["label"].get<std::string>(), format_real(sigma), want,
                              to_string(traj.stop_reason), seen, format_real(traj.final_state.t), agree);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(cfg.parallel, points.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::string csv = "M1,M2,m1,m2,regime,criterion_value,predicted,stop_reason,observed,t_final,agree\n";
  for (const auto& r : rows) csv += r;
  out << csv;
  write_file(cfg, "sweep.csv", csv);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  BatteryConfig bc;
  if (cfg.source.contains("model") && cfg.source["model"].contains("newton_const") &&
      !cfg.source["model"]["newton_const"].is_null())
    bc.newton_const = cfg.params.newton_const;
  bc.cells = cfg.maximizer.cells;
  bc.seeds = cfg.seeds;
  bc.rng_seed = cfg.seed;
  Battery battery(bc);
  const std::vector<std::string> sections = cfg.sections.empty() ? Battery::section_names() : cfg.sections;
  std::size_t failed = 0, total = 0;
  std::string report;
  for (const auto& name : sections) {
    const auto checks = battery.section(name);
    std::size_t ok = 0;
    std::string lines;
    for (const Check& c : checks) {
      ok += c.passed;
      if (cfg.verbose || !c.passed)
        lines += fmt::format("{:4}  {:16} {}  [{}]\n", c.passed ? "PASS" : "FAIL", c.section, c.name, c.detail);
    }
    if (!cfg.verbose)
      lines += fmt::format("{:4}  {:16} {}/{} checks passed\n", ok == checks.size() ? "PASS" : "FAIL", name, ok,
                           checks.size());
    failed += checks.size() - ok;
    total += checks.size();
    out << lines << std::flush;
    report += lines;
  }
  const std::string tail = fmt::format("{}: {} of {} checks passed\n", failed ? "FAILED" : "OK", total - failed, total);
  out << tail;
  write_file(cfg, "verify.txt", report + tail);
  return failed ? kExitVerifyFailed : kExitOk;
}

}  // namespace critmass
