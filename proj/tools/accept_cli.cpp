// Copyright 2026 The accept Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// accept: command line front end.
//
// Exit codes: 0 success, 1 a check failed or synthesis is incomplete,
// 2 bad input (arguments, game file).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "accept/accept.hpp"

#ifndef ACCEPT_DATA_DIR
#define ACCEPT_DATA_DIR "data"
#endif

namespace {

using accept::json;

struct Config {
  std::string game;
  double epsilon = 0.05;
  std::string grid_text;
  std::uint64_t seed = 0;
  std::string out;  // directory; empty means stdout
  std::string command;
  double tol_v = 1e-4;
  double eq_tol = 1e-9;
  // simulate
  double lambda = 0.99;
  int replications = 2000;
  std::string state;
  // verify
  bool every_memory_state = false;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return accept::default_lambda_grid();
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("--lambda-grid: cannot parse '" + item + "'");
    }
  }
  try {
    accept::require_grid(grid);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--lambda-grid: ") + e.what());
  }
  return grid;
}

// Parallelism cap; every stage here runs on one thread, so the cap is only
// validated and echoed.
int thread_cap() {
  const char* env = std::getenv("AP_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError("AP_THREADS must be a positive integer");
  return 1;
}

accept::PipelineOptions options(const Config& c) {
  if (!(c.epsilon > 0.0)) throw InputError("--epsilon must be positive");
  if (!(c.tol_v > 0.0)) throw InputError("--tol-v must be positive");
  if (!(c.eq_tol > 0.0)) throw InputError("--eq-tol must be positive");
  accept::PipelineOptions o;
  o.build.epsilon = c.epsilon;
  o.tol_v = c.tol_v;
  o.equilibria.eps_exact = c.eq_tol;
  o.equilibria.seed = c.seed;
  return o;
}

accept::StochasticGame load(const Config& c) {
  if (c.game.empty()) throw InputError("--game is required");
  return accept::load_game(c.game);
}

json config_json(const Config& c, const std::string& command, const std::vector<double>& grid) {
  return {{"command", command},
          {"game", c.game},
          {"epsilon", c.epsilon},
          {"lambda_grid", grid},
          {"seed", c.seed},
          {"tol_v", c.tol_v},
          {"eq_tol", c.eq_tol},
          {"threads", thread_cap()}};
}

void emit(const Config& c, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  const auto path = std::filesystem::path(c.out) / (c.command + ".json");
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

int cmd_validate(const Config& c) {
  if (c.game.empty()) throw InputError("--game is required");
  try {
    const auto g = accept::load_game(c.game);
    emit(c, {{"valid", true},
             {"players", g.num_players},
             {"states", g.num_states()},
             {"profiles", g.num_profiles()}});
    return 0;
  } catch (const accept::GameFormatError& e) {
    emit(c, {{"valid", false}, {"error", e.what()}});
    return 2;
  }
}

int cmd_solve(const Config& c) {
  const auto g = load(c);
  const auto o = options(c);
  const auto r = accept::solve_minmax(g, o.schedule, o.minmax_tol);
  json out = {{"config", config_json(c, "solve", {})}, {"minmax", accept::to_json(g, r)}};
  emit(c, out);
  return 0;
}

int cmd_decompose(const Config& c) {
  const auto g = load(c);
  const auto s = accept::analyze(g, options(c));
  emit(c, {{"config", config_json(c, "decompose", {})},
           {"uniform_values", accept::report::value_table(g, s.v1)},
           {"equilibria", accept::to_json(g, s.equilibria)},
           {"decomposition", accept::to_json(g, s.decomposition)}});
  return s.decomposition.warnings.empty() ? 0 : 1;
}

int cmd_build(const Config& c) {
  const auto g = load(c);
  const auto s = accept::synthesize(g, options(c));
  json out = accept::to_json(g, s);
  out["config"] = config_json(c, "build", {});
  out["automaton"] = accept::to_json(g, s.profile.automaton);
  out["size"] = accept::to_json(accept::automaton_size_audit(g, s.profile.automaton));
  emit(c, out);
  return s.profile.complete ? 0 : 1;
}

int cmd_build_correlated(const Config& c) {
  const auto g = load(c);
  const auto o = options(c);
  const auto s = accept::synthesize(g, o);
  const auto cb = accept::synthesize_correlated(g, s, o);
  json out = accept::to_json(g, s);
  out["config"] = config_json(c, "build-correlated", {});
  out["strategy"] = accept::to_json(g, cb.tau);
  out["tuning"] = cb.delta;
  out["complete"] = cb.complete && s.profile.complete;
  out["errors"] = cb.errors;
  emit(c, out);
  return cb.complete ? 0 : 1;
}

json verify_json(const accept::StochasticGame& g, const accept::Synthesis& s, const accept::CorrelatedBuild& cb,
                 const Config& c, const std::vector<double>& grid, bool* ok) {
  const auto& m = s.profile.automaton;
  const auto acc = accept::check_minmax_acceptable(g, m, s.v1, c.epsilon, grid, c.every_memory_state);
  const auto avg = accept::check_average_limit_acceptable(g, m, accept::shift_values(s.v1, c.epsilon));
  const auto ir = accept::check_individual_rationality(g, m, s.v1, c.epsilon);
  const auto sub = accept::check_submartingale(g, s.profile, s.v1);
  const auto size = accept::automaton_size_audit(g, m);
  const auto cacc = accept::check_minmax_acceptable(g, cb.tau, s.v1, c.epsilon, grid);
  const auto cm = accept::stationary_automaton(g, cb.tau);
  const auto cir = accept::check_individual_rationality(g, cm, s.v1, c.epsilon);
  *ok = s.profile.complete && acc.pass && avg.average_pass && avg.limit_pass && sub.pass && size.within &&
        cb.complete && cacc.pass;
  json synthesis = accept::to_json(g, s);
  return {{"synthesis", synthesis},
          {"profile",
           {{"acceptability", accept::to_json(g, acc)},
            {"average_limit", accept::to_json(g, avg)},
            {"individual_rationality", accept::to_json(g, m, ir)},
            {"submartingale", accept::to_json(g, m, sub)},
            {"size", accept::to_json(size)},
            {"public_coin", m.public_coin}}},
          {"correlated",
           {{"strategy", accept::to_json(g, cb.tau)},
            {"acceptability", accept::to_json(g, cacc)},
            {"individual_rationality", accept::to_json(g, cm, cir)},
            {"size", accept::to_json(accept::automaton_size_audit(g, cm))},
            {"complete", cb.complete},
            {"errors", cb.errors}}},
          {"pass", *ok}};
}

int cmd_verify(const Config& c) {
  const auto grid = parse_grid(c.grid_text);
  const auto g = load(c);
  const auto o = options(c);
  const auto s = accept::synthesize(g, o);
  const auto cb = accept::synthesize_correlated(g, s, o);
  bool ok = false;
  json out = verify_json(g, s, cb, c, grid, &ok);
  out["config"] = config_json(c, "verify", grid);
  emit(c, out);
  return ok ? 0 : 1;
}

int cmd_simulate(const Config& c) {
  const auto g = load(c);
  const auto o = options(c);
  int s1 = 0;
  if (!c.state.empty()) {
    s1 = -1;
    for (int s = 0; s < g.num_states(); ++s) {
      if (g.state_names[s] == c.state) s1 = s;
    }
    if (s1 < 0) throw InputError("--state: unknown state '" + c.state + "'");
  }
  if (!(c.lambda >= 0.0 && c.lambda < 1.0)) throw InputError("--lambda must lie in [0, 1)");
  if (c.replications < 2) throw InputError("--replications must be at least 2");
  const auto s = accept::synthesize(g, o);
  const auto& m = s.profile.automaton;
  const auto est = accept::simulate_discounted(g, m, s1, c.lambda, c.replications, c.seed);
  const auto exact = accept::exact_discounted_payoff_automaton(g, m, s1, c.lambda);
  json out = {{"config", config_json(c, "simulate", {c.lambda})},
              {"state", g.state_names[s1]},
              {"lambda", c.lambda},
              {"estimate", accept::to_json(est)},
              {"exact", exact},
              {"public_coin", m.public_coin}};
  emit(c, out);
  return s.profile.complete ? 0 : 1;
}

// Sorin's game: synthesized profile versus the profile that is a discounted
// equilibrium for every discount factor, (T, [2/3 L, 1/3 R]).
int cmd_demo_sorin(Config c) {
  if (c.game.empty()) c.game = std::string(ACCEPT_DATA_DIR) + "/sorin.json";
  const auto grid = parse_grid(c.grid_text);
  const auto g = load(c);
  const auto o = options(c);
  const auto s = accept::synthesize(g, o);
  const auto cb = accept::synthesize_correlated(g, s, o);
  bool ok = false;
  json out = verify_json(g, s, cb, c, grid, &ok);
  accept::StationaryProfile fixed;
  for (int st = 0; st < g.num_states(); ++st) fixed.mixed.push_back({{1.0, 0.0}, {2.0 / 3.0, 1.0 / 3.0}});
  const auto fixed_report = accept::check_minmax_acceptable(g, accept::to_correlated(g, fixed), s.v1, c.epsilon, grid);
  out["discounted_equilibrium_profile"] = {{"profile", "T, [2/3 L, 1/3 R]"},
                                           {"acceptability", accept::to_json(g, fixed_report)}};
  out["config"] = config_json(c, "demo-sorin", grid);
  emit(c, out);
  return ok && !fixed_report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and verification of min-max epsilon-acceptable profiles in stochastic games"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* sub, bool game_required) {
    auto* opt = sub->add_option("--game", c.game, "game JSON file");
    if (game_required) opt->required();
    sub->add_option("--epsilon", c.epsilon, "epsilon (default 0.05)");
    sub->add_option("--lambda-grid", c.grid_text, "comma-separated discount factors");
    sub->add_option("--seed", c.seed, "random seed (default 0)");
    sub->add_option("--out", c.out, "output directory; writes <command>.json there instead of stdout");
    sub->add_option("--tol-v", c.tol_v, "value tolerance for communicating sets (default 1e-4)");
    sub->add_option("--eq-tol", c.eq_tol, "equilibrium regret tolerance (default 1e-9)");
  };
  auto* validate = app.add_subcommand("validate", "check a game file");
  common(validate, true);
  auto* solve = app.add_subcommand("solve", "uniform min-max values");
  common(solve, true);
  auto* decompose = app.add_subcommand("decompose", "equilibria and maximal communicating sets");
  common(decompose, true);
  auto* build = app.add_subcommand("build", "synthesize the automaton profile");
  common(build, true);
  auto* build_corr = app.add_subcommand("build-correlated", "synthesize the stationary correlated strategy");
  common(build_corr, true);
  auto* verify = app.add_subcommand("verify", "synthesize and run every check");
  common(verify, true);
  verify->add_flag("--every-memory-state", c.every_memory_state, "check acceptability after every history");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo payoff of the synthesized profile");
  common(simulate, true);
  simulate->add_option("--lambda", c.lambda, "discount factor (default 0.99)");
  simulate->add_option("--replications", c.replications, "number of plays (default 2000)");
  simulate->add_option("--state", c.state, "initial state name (default: first state)");
  auto* demo = app.add_subcommand("demo-sorin", "Sorin's game walkthrough");
  common(demo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  try {
    thread_cap();
    if (*validate) return cmd_validate(c);
    if (*solve) return cmd_solve(c);
    if (*decompose) return cmd_decompose(c);
    if (*build) return cmd_build(c);
    if (*build_corr) return cmd_build_correlated(c);
    if (*verify) return cmd_verify(c);
    if (*simulate) return cmd_simulate(c);
    if (*demo) return cmd_demo_sorin(c);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const accept::GameFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
