#include "mirrorsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "json.hpp"

namespace mirrorsim {

namespace {

using Json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fixed(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

Json opt_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string opt_text(const std::optional<double>& v) {
  return v ? fixed(*v, 6) : "undefined";
}

Json scenario_json(const ScenarioConfig& config) {
  Json ops = Json::object();
  for (const auto& [op, p] : config.op_probabilities()) ops[to_string(op)] = p;
  Json j = Json::object();
  j["variant"] = to_string(config.variant);
  j["attack"] = to_string(config.attack);
  j["epsilon"] = config.epsilon;
  j["cap"] = config.cap;
  j["hadamard_probability"] = config.hadamard_probability;
  j["op_probabilities"] = std::move(ops);
  return j;
}

std::string scenario_line(const ScenarioConfig& config) {
  std::string s = "scenario: variant=" + to_string(config.variant) +
                  " attack=" + to_string(config.attack);
  if (config.attack == Attack::Weaker) s += " epsilon=" + g17(config.epsilon);
  s += " cap=" + std::to_string(config.cap);
  return s;
}

Json rates_json(const RateReport& rates) {
  Json j = Json::object();
  j["ctrl_loss_rate"] = opt_json(rates.ctrl_loss_rate);
  j["swap10_loss_rate"] = opt_json(rates.swap10_loss_rate);
  j["swap01_loss_rate"] = opt_json(rates.swap01_loss_rate);
  j["swap_loss_rate"] = opt_json(rates.swap_loss_rate);
  j["ctrl_error_rate"] = opt_json(rates.ctrl_error_rate);
  j["swap_error_rate"] = opt_json(rates.swap_error_rate);
  j["key_rate"] = rates.key_rate;
  j["forbidden_rate"] = rates.forbidden_rate;
  j["eve_key_agreement"] = opt_json(rates.eve_key_agreement);
  return j;
}

std::string rates_text(const RateReport& rates) {
  std::string s;
  s += "  ctrl_loss_rate     " + opt_text(rates.ctrl_loss_rate) + "\n";
  s += "  swap10_loss_rate   " + opt_text(rates.swap10_loss_rate) + "\n";
  s += "  swap01_loss_rate   " + opt_text(rates.swap01_loss_rate) + "\n";
  s += "  swap_loss_rate     " + opt_text(rates.swap_loss_rate) + "\n";
  s += "  ctrl_error_rate    " + opt_text(rates.ctrl_error_rate) + "\n";
  s += "  swap_error_rate    " + opt_text(rates.swap_error_rate) + "\n";
  s += "  key_rate           " + fixed(rates.key_rate, 6) + "\n";
  s += "  forbidden_rate     " + fixed(rates.forbidden_rate, 6) + "\n";
  s += "  eve_key_agreement  " + opt_text(rates.eve_key_agreement) + "\n";
  return s;
}

/// Closed forms applicable to the configured attack, if any. The full
/// attack is the weaker one pinned at epsilon 0.
std::optional<ClosedFormRates> applicable_closed_form(const ScenarioConfig& config) {
  if (config.attack == Attack::None) return std::nullopt;
  return closed_form_rates(config.attack == Attack::Full ? 0.0 : config.epsilon);
}

double closed_form_gap(const ClosedFormRates& cf, const RateReport& rates) {
  double gap = 0.0;
  if (rates.ctrl_loss_rate) {
    gap = std::max(gap, std::fabs(cf.ctrl_loss - *rates.ctrl_loss_rate));
  }
  if (rates.swap_loss_rate) {
    gap = std::max(gap, std::fabs(cf.swap_loss - *rates.swap_loss_rate));
  }
  if (rates.eve_key_agreement) {
    gap = std::max(gap, std::fabs(cf.eve_accuracy - *rates.eve_key_agreement));
  }
  return gap;
}

std::string counts_csv(const std::vector<int>& counts) {
  std::string s;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(counts[i]);
  }
  return s;
}

std::string counts_text(const std::vector<int>& counts) {
  std::string s = "(";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(counts[i]);
  }
  return s + ")";
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "human") return OutputFormat::Human;
  throw std::invalid_argument("unknown format: " + text);
}

std::string render_distribution(const JointDistribution& dist, OutputFormat format) {
  const RateReport rates = derive_rates(dist);
  const auto cf = applicable_closed_form(dist.config);

  if (format == OutputFormat::Csv) {
    std::string out = "op,alice1,alice0,basis,bob_first,bob_second,eve,probability,sift\n";
    for (const auto& e : dist.entries) {
      out += to_string(e.op) + ',' + counts_csv(e.alice_counts) + ',' +
             to_string(e.basis) + ',' + counts_csv(e.bob_counts) + ',' +
             std::to_string(e.eve_outcome) + ',' + g17(e.probability) + ',' +
             e.sift.to_string() + '\n';
    }
    return out;
  }

  if (format == OutputFormat::Json) {
    Json j = Json::object();
    j["scenario"] = scenario_json(dist.config);
    j["total_probability"] = dist.total_probability();
    Json entries = Json::array();
    for (const auto& e : dist.entries) {
      Json row = Json::object();
      row["op"] = to_string(e.op);
      row["alice"] = e.alice_counts;
      row["basis"] = to_string(e.basis);
      row["bob"] = e.bob_counts;
      row["eve"] = e.eve_outcome;
      row["probability"] = e.probability;
      row["sift"] = e.sift.to_string();
      entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    j["rates"] = rates_json(rates);
    if (cf) {
      Json c = Json::object();
      c["eve_accuracy"] = cf->eve_accuracy;
      c["ctrl_loss"] = cf->ctrl_loss;
      c["swap_loss"] = cf->swap_loss;
      j["closed_form"] = std::move(c);
      j["closed_form_gap"] = closed_form_gap(*cf, rates);
    }
    return j.dump(2) + "\n";
  }

  std::string out = scenario_line(dist.config) + "\n";
  out += "entries: " + std::to_string(dist.entries.size()) +
         " (total probability " + g17(dist.total_probability()) + ")\n";
  for (const auto& e : dist.entries) {
    out += "  " + to_string(e.op) + " alice=" + counts_text(e.alice_counts) +
           " basis=" + to_string(e.basis) + " bob=" + counts_text(e.bob_counts) +
           " eve=" + std::to_string(e.eve_outcome) + "  p=" + fixed(e.probability, 9) +
           "  " + e.sift.to_string() + "\n";
  }
  out += "rates:\n" + rates_text(rates);
  if (cf) {
    out += "closed form: eve_accuracy=" + fixed(cf->eve_accuracy, 6) +
           " ctrl_loss=" + fixed(cf->ctrl_loss, 6) +
           " swap_loss=" + fixed(cf->swap_loss, 6) +
           " (max gap " + g17(closed_form_gap(*cf, rates)) + ")\n";
  }
  return out;
}

std::string render_simulation(const SimResult& sim, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "op,outcome,eve_guess,count\n";
    for (const auto& [key, count] : sim.tally.counts) {
      const auto& [op, outcome, guess] = key;
      out += to_string(op) + ',' + outcome.to_string() + ',' +
             (guess ? std::to_string(*guess) : std::string{}) + ',' +
             std::to_string(count) + '\n';
    }
    return out;
  }

  if (format == OutputFormat::Json) {
    Json j = Json::object();
    j["scenario"] = scenario_json(sim.config);
    j["rounds"] = sim.rounds;
    j["seed"] = sim.seed;
    j["workers"] = sim.workers;
    Json tally = Json::array();
    for (const auto& [key, count] : sim.tally.counts) {
      const auto& [op, outcome, guess] = key;
      Json row = Json::object();
      row["op"] = to_string(op);
      row["outcome"] = outcome.to_string();
      row["eve_guess"] = guess ? Json(*guess) : Json(nullptr);
      row["count"] = count;
      tally.push_back(std::move(row));
    }
    j["tally"] = std::move(tally);
    j["rates"] = rates_json(sim.rates);
    return j.dump(2) + "\n";
  }

  std::string out = scenario_line(sim.config) + "\n";
  out += "rounds: " + std::to_string(sim.rounds) + "  seed: " +
         std::to_string(sim.seed) + "  workers: " + std::to_string(sim.workers) +
         "\n";
  out += "tally:\n";
  for (const auto& [key, count] : sim.tally.counts) {
    const auto& [op, outcome, guess] = key;
    out += "  " + to_string(op) + " " + outcome.to_string() +
           (guess ? " eve=" + std::to_string(*guess) : std::string{}) + "  " +
           std::to_string(count) + "\n";
  }
  out += "rates:\n" + rates_text(sim.rates);
  return out;
}

std::string render_sweep(const std::vector<SweepRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row = Json::object();
      row["epsilon"] = r.epsilon;
      row["kappa"] = r.kappa;
      row["eve_accuracy"] = r.closed.eve_accuracy;
      row["ctrl_loss"] = r.closed.ctrl_loss;
      row["swap_loss"] = r.closed.swap_loss;
      row["exact_eve_accuracy"] = r.exact_eve_accuracy;
      row["exact_ctrl_loss"] = r.exact_ctrl_loss;
      row["exact_swap_loss"] = r.exact_swap_loss;
      row["max_gap"] = r.max_gap;
      arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
  }

  if (format == OutputFormat::Human) {
    std::string out =
        "epsilon  eve_accuracy  ctrl_loss  swap_loss  enumeration_gap\n";
    for (const auto& r : rows) {
      out += fixed(r.epsilon, 4) + "   " + fixed(r.closed.eve_accuracy, 6) +
             "      " + fixed(r.closed.ctrl_loss, 6) + "   " +
             fixed(r.closed.swap_loss, 6) + "   " + g17(r.max_gap) + "\n";
    }
    return out;
  }

  std::string out =
      "epsilon,kappa,eve_accuracy,ctrl_loss,swap_loss,"
      "exact_eve_accuracy,exact_ctrl_loss,exact_swap_loss,max_gap\n";
  for (const auto& r : rows) {
    out += g17(r.epsilon) + ',' + g17(r.kappa) + ',' + g17(r.closed.eve_accuracy) +
           ',' + g17(r.closed.ctrl_loss) + ',' + g17(r.closed.swap_loss) + ',' +
           g17(r.exact_eve_accuracy) + ',' + g17(r.exact_ctrl_loss) + ',' +
           g17(r.exact_swap_loss) + ',' + g17(r.max_gap) + '\n';
  }
  return out;
}

std::string render_detection(const DetectionReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    Json j = Json::object();
    j["scenario"] = scenario_json(report.config);
    j["rounds"] = report.rounds;
    j["seed"] = report.seed;
    j["alpha"] = report.alpha;
    j["ctrl_losses"] = report.ctrl_losses;
    j["ctrl_trials"] = report.ctrl_trials;
    j["swap_losses"] = report.swap_losses;
    j["swap_trials"] = report.swap_trials;
    j["ctrl_loss_interval"] = {report.ctrl_interval.low, report.ctrl_interval.high};
    j["swap_loss_interval"] = {report.swap_interval.low, report.swap_interval.high};
    j["z"] = report.loss_test.z;
    j["p_value"] = report.loss_test.p_value;
    j["loss_mismatch"] = report.loss_mismatch;
    j["error_events"] = report.error_events;
    j["forbidden_events"] = report.forbidden_events;
    j["detected"] = report.detected;
    return j.dump(2) + "\n";
  }

  if (format == OutputFormat::Csv) {
    std::string out = "metric,value\n";
    out += "rounds," + std::to_string(report.rounds) + "\n";
    out += "seed," + std::to_string(report.seed) + "\n";
    out += "alpha," + g17(report.alpha) + "\n";
    out += "ctrl_losses," + std::to_string(report.ctrl_losses) + "\n";
    out += "ctrl_trials," + std::to_string(report.ctrl_trials) + "\n";
    out += "swap_losses," + std::to_string(report.swap_losses) + "\n";
    out += "swap_trials," + std::to_string(report.swap_trials) + "\n";
    out += "z," + g17(report.loss_test.z) + "\n";
    out += "p_value," + g17(report.loss_test.p_value) + "\n";
    out += "loss_mismatch," + std::string(report.loss_mismatch ? "1" : "0") + "\n";
    out += "error_events," + std::to_string(report.error_events) + "\n";
    out += "forbidden_events," + std::to_string(report.forbidden_events) + "\n";
    out += "detected," + std::string(report.detected ? "1" : "0") + "\n";
    return out;
  }

  std::string out = scenario_line(report.config) + "\n";
  out += "rounds: " + std::to_string(report.rounds) + "  seed: " +
         std::to_string(report.seed) + "  alpha: " + g17(report.alpha) + "\n";
  out += "ctrl losses: " + std::to_string(report.ctrl_losses) + "/" +
         std::to_string(report.ctrl_trials) + "  interval [" +
         fixed(report.ctrl_interval.low, 6) + ", " +
         fixed(report.ctrl_interval.high, 6) + "]\n";
  out += "swap losses: " + std::to_string(report.swap_losses) + "/" +
         std::to_string(report.swap_trials) + "  interval [" +
         fixed(report.swap_interval.low, 6) + ", " +
         fixed(report.swap_interval.high, 6) + "]\n";
  out += "loss z: " + fixed(report.loss_test.z, 4) + "  p: " +
         g17(report.loss_test.p_value) + "  mismatch: " +
         (report.loss_mismatch ? "yes" : "no") + "\n";
  out += "error events: " + std::to_string(report.error_events) +
         "  forbidden events: " + std::to_string(report.forbidden_events) + "\n";
  out += std::string("verdict: ") + (report.detected ? "detected" : "not detected") +
         "\n";
  return out;
}

std::string render_verification(
    const std::vector<std::pair<std::string, UnitaryReport>>& reports,
    OutputFormat format) {
  if (format == OutputFormat::Json) {
    Json arr = Json::array();
    for (const auto& [label, rep] : reports) {
      Json row = Json::object();
      row["unitary"] = label;
      row["dimension"] = rep.dimension;
      row["specified_columns"] = rep.specified;
      row["gram_defect"] = rep.gram_defect;
      row["completion_defect"] = rep.completion_defect;
      row["tolerance"] = rep.tolerance;
      row["ok"] = rep.ok;
      arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
  }

  if (format == OutputFormat::Csv) {
    std::string out =
        "unitary,dimension,specified_columns,gram_defect,completion_defect,"
        "tolerance,ok\n";
    for (const auto& [label, rep] : reports) {
      out += label + ',' + std::to_string(rep.dimension) + ',' +
             std::to_string(rep.specified) + ',' + g17(rep.gram_defect) + ',' +
             g17(rep.completion_defect) + ',' + g17(rep.tolerance) + ',' +
             (rep.ok ? "1" : "0") + '\n';
    }
    return out;
  }

  std::string out;
  for (const auto& [label, rep] : reports) {
    out += label + ": " + (rep.ok ? "ok" : "FAILED") + "  (dimension " +
           std::to_string(rep.dimension) + ", " + std::to_string(rep.specified) +
           " specified columns, gram defect " + g17(rep.gram_defect) +
           ", completion defect " + g17(rep.completion_defect) + ")\n";
  }
  return out;
}

std::string render_tables(double epsilon, int cap) {
  std::string out = "# mirror protocol reference states and rates\n\n";
  out += "photon cap: " + std::to_string(cap) + "\n";
  out += "weaker attack epsilon: " + g17(epsilon) + "\n";

  const StateVector injected = stage1_state(cap);
  out += "\n## injected channel state\n" + injected.serialize();

  const auto ops = allowed_ops(ProtocolVariant::Mirror);

  auto branch_section = [&](const UnitarySpec* stage2) {
    std::string s;
    for (AliceOp op : ops) {
      const StateVector after_op = alice_apply(op, injected);
      for (const Branch& ab : measure_enumerate(after_op, Subsystem::Alice)) {
        const StateVector state =
            stage2 ? apply_attack_stage(*stage2, ab.post_state) : ab.post_state;
        s += "operation " + to_string(op) + " alice=" + counts_text(ab.outcome) +
             " p=" + g17(ab.probability) + "\n";
        s += state.serialize();
      }
    }
    return s;
  };

  out += "\n## channel after alice's operation and measurement\n";
  out += branch_section(nullptr);

  const UnitarySpec full = build_full_attack(cap);
  out += "\n## returned state, full attack\n";
  out += branch_section(&full);

  const UnitarySpec weaker = build_weaker_attack(epsilon, cap);
  out += "\n## returned state, weaker attack\n";
  out += branch_section(&weaker);

  out += "\n## loss and information grid, weaker attack\n";
  out += "epsilon,eve_accuracy,ctrl_loss,swap_loss\n";
  for (int k = 0; k <= 10; ++k) {
    const double eps = double(k) / 10.0;
    const ClosedFormRates cf = closed_form_rates(eps);
    out += fixed(eps, 1) + ',' + fixed(round2(cf.eve_accuracy), 2) + ',' +
           fixed(round2(cf.ctrl_loss), 2) + ',' + fixed(round2(cf.swap_loss), 2) +
           '\n';
  }
  return out;
}

}  // namespace mirrorsim
