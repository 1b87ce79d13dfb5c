#include "mirrorsim/cli.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mirrorsim/engine.hpp"
#include "mirrorsim/io.hpp"

namespace mirrorsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double_strict(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size() || value.empty()) {
    throw std::invalid_argument("invalid numeric value for '" + key + "': " + value);
  }
  return v;
}

std::uint64_t parse_u64_strict(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size() || value.empty() || value[0] == '-') {
    throw std::invalid_argument("invalid count value for '" + key + "': " + value);
  }
  return v;
}

int parse_int_strict(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size() || value.empty()) {
    throw std::invalid_argument("invalid integer value for '" + key + "': " + value);
  }
  return v;
}

struct Options {
  ScenarioConfig scenario;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  double alpha = 0.01;
  std::string format_text = "human";
  std::string output_path;
};

void apply_config(const std::map<std::string, std::string>& kv, Options& opts) {
  for (const auto& [key, value] : kv) {
    if (key == "variant") {
      opts.scenario.variant = parse_variant(value);
    } else if (key == "attack") {
      opts.scenario.attack = parse_attack(value);
    } else if (key == "epsilon") {
      opts.scenario.epsilon = parse_double_strict(key, value);
    } else if (key == "cap") {
      opts.scenario.cap = parse_int_strict(key, value);
    } else if (key == "hadamard_probability") {
      opts.scenario.hadamard_probability = parse_double_strict(key, value);
    } else if (key == "p_ctrl") {
      opts.scenario.op_weights[AliceOp::Ctrl] = parse_double_strict(key, value);
    } else if (key == "p_swap10") {
      opts.scenario.op_weights[AliceOp::Swap10] = parse_double_strict(key, value);
    } else if (key == "p_swap01") {
      opts.scenario.op_weights[AliceOp::Swap01] = parse_double_strict(key, value);
    } else if (key == "p_swapall") {
      opts.scenario.op_weights[AliceOp::SwapAll] = parse_double_strict(key, value);
    } else if (key == "rounds") {
      opts.rounds = parse_u64_strict(key, value);
    } else if (key == "seed") {
      opts.seed = parse_u64_strict(key, value);
    } else if (key == "workers") {
      opts.workers = parse_int_strict(key, value);
    } else if (key == "alpha") {
      opts.alpha = parse_double_strict(key, value);
    } else if (key == "format") {
      opts.format_text = value;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " has no '=': " + stripped);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " has an empty key");
    }
    kv[key] = value;
  }
  return kv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    Options opts;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        apply_config(parse_config_file(args[i + 1]), opts);
      } else if (args[i].rfind("--config=", 0) == 0) {
        apply_config(parse_config_file(args[i].substr(9)), opts);
      }
    }

    CLI::App app{
        "exact simulator and analysis toolkit for the mirror semiquantum "
        "key distribution protocol and its three-operation variant"};
    app.name("mirrorsim");
    app.fallthrough(true);
    app.require_subcommand(1);

    std::string config_path;
    std::string variant_text = to_string(opts.scenario.variant);
    std::string attack_text = to_string(opts.scenario.attack);
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--variant", variant_text, "protocol variant: mirror|simplified");
    app.add_option("--attack", attack_text, "eavesdropping attack: none|full|weaker");
    app.add_option("--epsilon", opts.scenario.epsilon,
                   "weaker attack parameter in [0,1]");
    app.add_option("--cap", opts.scenario.cap, "total photon cap of the register");
    app.add_option("--hadamard-probability", opts.scenario.hadamard_probability,
                   "probability bob measures in the hadamard basis");
    app.add_option("--format", opts.format_text, "output format: json|csv|human");
    app.add_option("--output", opts.output_path, "write output to this file");

    auto* exact_cmd = app.add_subcommand(
        "exact", "enumerate the exact joint outcome distribution of a scenario");

    auto* simulate_cmd = app.add_subcommand(
        "simulate", "run monte carlo rounds with per-round deterministic seeding");
    simulate_cmd->add_option("--rounds", opts.rounds, "number of rounds");
    simulate_cmd->add_option("--seed", opts.seed, "master seed");
    simulate_cmd->add_option("--workers", opts.workers,
                             "worker threads (results are identical for any count)");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "weaker-attack rates over an epsilon range, closed form "
                 "against enumeration");
    double sweep_from = 0.0, sweep_to = 1.0;
    int sweep_steps = 11;
    sweep_cmd->add_option("--from", sweep_from, "first epsilon");
    sweep_cmd->add_option("--to", sweep_to, "last epsilon");
    sweep_cmd->add_option("--steps", sweep_steps, "number of grid points");

    auto* verify_cmd = app.add_subcommand(
        "verify", "check that the attack unitaries are orthonormal and complete "
                  "to a unitary");
    double verify_epsilon = epsilon_star();
    int verify_grid = 0;
    double verify_tolerance = 1e-12;
    verify_cmd->add_option("--epsilon", verify_epsilon,
                           "weaker attack parameter to check");
    verify_cmd->add_option("--grid", verify_grid,
                           "additionally check this many evenly spaced epsilons");
    verify_cmd->add_option("--tolerance", verify_tolerance, "defect tolerance");

    auto* detect_cmd = app.add_subcommand(
        "detect", "simulate rounds and test for public signatures of tampering");
    detect_cmd->add_option("--rounds", opts.rounds, "number of rounds");
    detect_cmd->add_option("--seed", opts.seed, "master seed");
    detect_cmd->add_option("--workers", opts.workers, "worker threads");
    detect_cmd->add_option("--alpha", opts.alpha,
                           "significance level of the loss-rate comparison");

    auto* tables_cmd = app.add_subcommand(
        "tables", "reference states and the rounded loss/information grid");
    double tables_epsilon = epsilon_star();
    tables_cmd->add_option("--epsilon", tables_epsilon,
                           "weaker attack parameter for the returned states");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("mirrorsim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    opts.scenario.variant = parse_variant(variant_text);
    opts.scenario.attack = parse_attack(attack_text);
    const OutputFormat format = parse_format(opts.format_text);

    auto emit = [&](const std::string& text) {
      if (opts.output_path.empty()) {
        out << text;
        return;
      }
      std::ofstream file(opts.output_path, std::ios::binary);
      if (!file) {
        throw std::invalid_argument("cannot open output file: " + opts.output_path);
      }
      file << text;
      if (!file) {
        throw std::invalid_argument("failed writing output file: " +
                                    opts.output_path);
      }
    };

    if (exact_cmd->parsed()) {
      emit(render_distribution(exact_distribution(opts.scenario), format));
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      emit(render_simulation(
          simulate(opts.scenario, opts.rounds, opts.seed, opts.workers), format));
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      if (sweep_steps < 1) throw std::invalid_argument("steps must be positive");
      std::vector<double> epsilons;
      epsilons.reserve(sweep_steps);
      if (sweep_steps == 1) {
        epsilons.push_back(sweep_from);
      } else {
        for (int i = 0; i < sweep_steps; ++i) {
          epsilons.push_back(sweep_from +
                             (sweep_to - sweep_from) * double(i) /
                                 double(sweep_steps - 1));
        }
      }
      emit(render_sweep(sweep_epsilon(epsilons, opts.scenario.cap), format));
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      std::vector<std::pair<std::string, UnitaryReport>> reports;
      reports.emplace_back("full", verify_unitary(build_full_attack(opts.scenario.cap),
                                                  verify_tolerance));
      auto check_weaker = [&](double eps) {
        char label[48];
        std::snprintf(label, sizeof(label), "weaker(epsilon=%.17g)", eps);
        reports.emplace_back(
            label, verify_unitary(build_weaker_attack(eps, opts.scenario.cap),
                                  verify_tolerance));
      };
      check_weaker(verify_epsilon);
      for (int i = 0; i < verify_grid; ++i) {
        check_weaker(verify_grid == 1 ? 0.0 : double(i) / double(verify_grid - 1));
      }
      emit(render_verification(reports, format));
      for (const auto& [label, rep] : reports) {
        if (!rep.ok) return kExitContract;
      }
      return kExitOk;
    }

    if (detect_cmd->parsed()) {
      emit(render_detection(detection_test(opts.scenario, opts.rounds, opts.seed,
                                           opts.workers, opts.alpha),
                            format));
      return kExitOk;
    }

    if (tables_cmd->parsed()) {
      emit(render_tables(tables_epsilon, opts.scenario.cap));
      return kExitOk;
    }

    err << "error: no subcommand selected\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitContract;
  }
}

}  // namespace mirrorsim
