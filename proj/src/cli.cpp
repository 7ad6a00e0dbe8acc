#include "dsg/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dsg/belief.hpp"
#include "dsg/errors.hpp"
#include "dsg/io.hpp"
#include "dsg/solver.hpp"

namespace dsg {

namespace {

Json config_to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["epsilon"] = c.epsilon;
  if (c.eta_override) j["eta_override"] = *c.eta_override;
  j["horizon"] = c.horizon;
  j["eta"] = c.eta;
  j["m_eps"] = c.m_eps;
  j["episodes"] = c.episodes;
  j["blocks"] = c.blocks;
  j["tol"] = c.tol;
  j["state_cap"] = c.state_cap;
  j["enum_cap"] = c.enum_cap;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

void emit(const RunConfig& c, Json report) {
  report["config"] = config_to_json(c);
  if (!c.output.empty()) atomic_write_text(c.output, report.dump(2) + "\n");
  if (c.verbosity > 0 || c.output.empty()) std::cout << report.dump(2) << std::endl;
}

int cmd_validate(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  const ValidationReport report = validate_game(spec);
  emit(c, validation_to_json(report));
  return report.ok() ? 0 : 1;
}

int cmd_coefficients(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  Json rows = Json::array();
  for (int i = 0; i < spec.i_count(); ++i) {
    for (int j = 0; j < spec.j_count(); ++j) {
      for (int s = 0; s < spec.s_count(); ++s) {
        const TransitionMatrix tm = transition_matrix(spec, i, j, s);
        Json row;
        row["a1"] = spec.actions1[i];
        row["a2"] = spec.actions2[j];
        row["signal"] = spec.signals[s];
        row["tau_p"] = birkhoff_coefficient(tm.entries);
        if (spec.is_blind()) row["tau_e"] = ergodicity_coefficient(tm.entries);
        rows.push_back(std::move(row));
      }
    }
  }
  Json report;
  report["coefficients"] = std::move(rows);
  emit(c, std::move(report));
  return 0;
}

int cmd_check(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  const PatternKind kind = c.kind == "ergodic" ? PatternKind::Scrambling : PatternKind::Positive;
  const auto mstar = minimal_uniform_length(spec, kind);
  Json report;
  report["kind"] = c.kind;
  report["holds"] = mstar.has_value();
  if (mstar) report["m_star"] = *mstar;
  emit(c, std::move(report));
  return mstar ? 0 : 1;
}

int cmd_certificate(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  DoeblinCertificate cert;
  if (c.kind == "ergodic") {
    cert = ergodic_certificate(spec, c.epsilon, c.enum_cap);
  } else if (c.kind == "primitive") {
    cert = primitive_certificate(spec, c.epsilon, c.enum_cap);
  } else {
    try {
      cert = primitive_certificate(spec, c.epsilon, c.enum_cap);
    } catch (const NotPrimitive&) {
      if (!spec.is_blind()) throw;
      cert = ergodic_certificate(spec, c.epsilon, c.enum_cap);
    }
  }
  emit(c, certificate_to_json(cert));
  return 0;
}

int cmd_build_abstract(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  const AbstractGame ag = build_abstract(spec, spec.initial_belief, static_cast<int>(c.eta), c.state_cap);
  const AbstractGame::Stats stats = ag.stats();
  Json report;
  report["eta"] = c.eta;
  report["state_count"] = stats.state_count;
  report["edge_count"] = stats.edge_count;
  Json hist = Json::object();
  for (const auto& [len, count] : stats.trail_length_histogram) hist[std::to_string(len)] = count;
  report["trail_length_histogram"] = std::move(hist);
  report["game"] = abstract_game_to_json(ag);
  emit(c, std::move(report));
  return 0;
}

int cmd_solve_nstage(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  Json report;
  report["n"] = c.horizon;
  bool revealing = true;
  try {
    const FiniteGame fg = to_finite_game(spec);
    const ValueFunction vf = shapley_nstage(fg, c.horizon);
    Json values = Json::object();
    for (int x = 0; x < fg.x_count(); ++x) values[fg.states[x]] = vf.values[x];
    report["values"] = std::move(values);
    report["value_at_initial"] = vf.values[fg.initial_state];
  } catch (const LookupError&) {
    revealing = false;
  }
  if (!revealing) {
    report["value_at_initial"] =
        exact_nstage_value(spec, spec.initial_belief, static_cast<int>(c.horizon), c.enum_cap);
    report["method"] = "belief-tree";
  } else {
    report["method"] = "finite-game";
  }
  emit(c, std::move(report));
  return 0;
}

int cmd_solve_uniform(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  const FiniteGame fg = to_finite_game(spec);
  const UniformEstimate est = uniform_value_estimate(fg, c.tol);
  Json report;
  report["value"] = est.value;
  report["converged"] = est.converged;
  Json trace = Json::array();
  for (const auto& step : est.trace)
    trace.push_back({{"n", step.n},
                     {"value_n", step.value_n},
                     {"lambda", step.lambda},
                     {"value_lambda", step.value_lambda}});
  report["diagnostics"] = std::move(trace);
  if (!c.trace_csv.empty()) {
    std::string csv = "iteration,n_or_lambda,value\n";
    int iter = 0;
    for (const auto& step : est.trace) {
      csv += std::to_string(iter) + ",n=" + std::to_string(step.n) + "," + std::to_string(step.value_n) + "\n";
      csv += std::to_string(iter) + ",lambda=" + std::to_string(step.lambda) + "," +
             std::to_string(step.value_lambda) + "\n";
      ++iter;
    }
    atomic_write_text(c.trace_csv, csv);
  }
  emit(c, std::move(report));
  return est.converged ? 0 : 2;
}

int cmd_pipeline(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  PipelineConfig pc;
  pc.eps = c.epsilon;
  pc.eta_override = c.eta_override;
  pc.state_cap = c.state_cap;
  pc.enum_cap = c.enum_cap;
  pc.tol = c.tol;
  if (!c.certificate_path.empty()) pc.certificate = load_certificate(c.certificate_path);
  const PipelineReport report = approximate_uniform_value(spec, pc);
  Json j = pipeline_report_to_json(report);
  j["seed"] = c.seed;
  emit(c, std::move(j));
  return (report.caps_hit || !report.estimate.converged) ? 2 : 0;
}

int cmd_simulate_coupling(const RunConfig& c) {
  const GameSpec spec = load_game(c.input);
  CouplingOptions opt;
  opt.episodes = c.episodes;
  opt.blocks = c.blocks;
  opt.seed = c.seed;
  opt.threads = c.threads > 0 ? c.threads : static_cast<int>(std::thread::hardware_concurrency());
  opt.trace_csv = c.trace_csv;
  const Strategy sigma = Strategy::uniform(spec.i_count());
  const Strategy tau = Strategy::uniform(spec.j_count());
  const CouplingReport report = simulate_coupling(spec, spec.initial_belief, static_cast<int>(c.eta),
                                                  c.m_eps, c.epsilon, sigma, tau, opt);
  emit(c, coupling_report_to_json(report));
  return 0;
}

int cmd_fixtures(const RunConfig& c) {
  GameSpec spec;
  if (c.fixture_name == "counterexample") {
    spec = build_counterexample();
  } else if (c.fixture_name == "revealing-pennies") {
    FiniteGame fg;
    fg.states = {"s0"};
    fg.actions1 = {"h", "t"};
    fg.actions2 = {"h", "t"};
    fg.rows.assign(4, {{0, 1.0}});
    fg.reward = {1.0, 0.0, 0.0, 1.0};
    fg.initial_state = 0;
    spec = build_revealing(fg);
  } else if (c.fixture_name == "revealing-chain") {
    FiniteGame fg;
    fg.states = {"s0", "s1"};
    fg.actions1 = {"a"};
    fg.actions2 = {"b"};
    fg.rows = {{{0, 0.7}, {1, 0.3}}, {{0, 0.4}, {1, 0.6}}};
    fg.reward = {0.0, 1.0};
    fg.initial_state = 0;
    spec = build_revealing(fg);
  } else if (c.fixture_name == "revealing-cycle") {
    FiniteGame fg;
    fg.states = {"s0", "s1"};
    fg.actions1 = {"a"};
    fg.actions2 = {"b"};
    fg.rows = {{{1, 1.0}}, {{0, 1.0}}};
    fg.reward = {0.0, 1.0};
    fg.initial_state = 0;
    spec = build_revealing(fg);
  } else if (c.fixture_name == "blind-primitive") {
    spec = GameSpec::empty({"s0", "s1"}, {"a0", "a1"}, {"b0", "b1"}, {"o"});
    const double rows[4][2][2] = {{{0.8, 0.2}, {0.3, 0.7}},
                                  {{0.6, 0.4}, {0.4, 0.6}},
                                  {{0.7, 0.3}, {0.2, 0.8}},
                                  {{0.5, 0.5}, {0.5, 0.5}}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int k2 = 0; k2 < 2; ++k2) spec.p_ref(k, i, j, k2, 0) = rows[i * 2 + j][k][k2];
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) spec.g_ref(k, i, j) = (k == 1) ? (i == j ? 1.0 : 0.5) : 0.0;
    spec.initial_belief = Belief(std::vector<double>{1.0, 0.0});
  } else {
    throw ParseError("unknown fixture '" + c.fixture_name +
                     "'; available: counterexample, revealing-pennies, revealing-chain, "
                     "revealing-cycle, blind-primitive");
  }
  const Json j = game_to_json(spec);
  if (c.output.empty()) {
    std::cout << j.dump(2) << std::endl;
  } else {
    atomic_write_text(c.output, j.dump(2) + "\n");
    if (c.verbosity > 0) std::cout << "wrote " << c.output << std::endl;
  }
  return 0;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.command == "validate") return cmd_validate(config);
    if (config.command == "coefficients") return cmd_coefficients(config);
    if (config.command == "check") return cmd_check(config);
    if (config.command == "certificate") return cmd_certificate(config);
    if (config.command == "build-abstract") return cmd_build_abstract(config);
    if (config.command == "solve-nstage") return cmd_solve_nstage(config);
    if (config.command == "solve-uniform") return cmd_solve_uniform(config);
    if (config.command == "pipeline") return cmd_pipeline(config);
    if (config.command == "simulate-coupling") return cmd_simulate_coupling(config);
    if (config.command == "fixtures") return cmd_fixtures(config);
    std::cerr << "unknown command '" << config.command << "'" << std::endl;
    return 1;
  } catch (const CapExceeded& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << std::endl;
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  RunConfig c;
  if (const char* env = std::getenv("DSG_STATE_CAP")) c.state_cap = std::atoll(env);
  if (const char* env = std::getenv("DSG_ENUM_CAP")) c.enum_cap = std::atoll(env);

  CLI::App app{"Solver toolkit for zero-sum hidden stochastic games with belief resets"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("-i,--input", c.input, "game JSON file")->required();
    sub->add_option("-o,--output", c.output, "report output path (atomic write)");
    sub->add_option("--state-cap", c.state_cap, "abstract state cap");
    sub->add_option("--enum-cap", c.enum_cap, "enumeration cap");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--threads", c.threads, "worker threads (0 = hardware)");
    sub->add_option("-v,--verbosity", c.verbosity, "0 = quiet");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the game file invariants");
  add_common(validate, true);

  CLI::App* coefficients = app.add_subcommand("coefficients", "per-(i,j,s) contraction coefficients");
  add_common(coefficients, true);

  CLI::App* check = app.add_subcommand("check", "verify ergodicity or primitivity");
  add_common(check, true);
  check->add_option("--kind", c.kind, "ergodic | primitive")->required()
      ->check(CLI::IsMember({"ergodic", "primitive"}));

  CLI::App* certificate = app.add_subcommand("certificate", "derive a reset certificate");
  add_common(certificate, true);
  certificate->add_option("--epsilon", c.epsilon, "target epsilon")->required();
  certificate->add_option("--kind", c.kind, "auto | ergodic | primitive")
      ->check(CLI::IsMember({"auto", "ergodic", "primitive"}));

  CLI::App* build = app.add_subcommand("build-abstract", "materialize the abstract game");
  add_common(build, true);
  build->add_option("--eta", c.eta, "recall length")->required();

  CLI::App* nstage = app.add_subcommand("solve-nstage", "n-stage Cesaro value");
  add_common(nstage, true);
  nstage->add_option("--n", c.horizon, "horizon")->required();

  CLI::App* uniform = app.add_subcommand("solve-uniform", "long-run value estimate (revealing-form input)");
  add_common(uniform, true);
  uniform->add_option("--tol", c.tol, "agreement tolerance");
  uniform->add_option("--trace-csv", c.trace_csv, "write the refinement trace as CSV");

  CLI::App* pipeline = app.add_subcommand("pipeline", "certificate -> abstract game -> value");
  add_common(pipeline, true);
  pipeline->add_option("--epsilon", c.epsilon, "target accuracy")->required();
  pipeline->add_option("--eta-override", c.eta_override, "desk-scale eta (downgrades the guarantee)");
  pipeline->add_option("--certificate", c.certificate_path, "user-supplied certificate JSON");
  pipeline->add_option("--tol", c.tol, "solver agreement tolerance");

  CLI::App* coupling = app.add_subcommand("simulate-coupling", "paired simulation of both games");
  add_common(coupling, true);
  coupling->add_option("--eta", c.eta, "block length")->required();
  coupling->add_option("--m-eps", c.m_eps, "sub-block length")->required();
  coupling->add_option("--epsilon", c.epsilon, "case-split epsilon")->required();
  coupling->add_option("--episodes", c.episodes, "episode count");
  coupling->add_option("--blocks", c.blocks, "blocks per episode");
  coupling->add_option("--trace-csv", c.trace_csv, "per-stage trace CSV");

  CLI::App* fixtures = app.add_subcommand("fixtures", "write a built-in game file");
  add_common(fixtures, false);
  fixtures->add_option("--name", c.fixture_name, "fixture name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.kind.empty() && c.command == "certificate") c.kind = "auto";
  return run(c);
}

}  // namespace dsg
