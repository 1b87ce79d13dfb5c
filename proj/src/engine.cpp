#include "mirrorsim/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mirrorsim {

namespace {

constexpr double kBranchCutoff = 1e-30;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-round generator: each round owns an independent stream derived
/// from (seed, round index), so splitting rounds across workers cannot
/// change what any single round draws.
struct RoundRng {
  std::uint64_t state;

  explicit RoundRng(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
  }

  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t round_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x9E3779B97F4A7C15ULL));
}

struct EveNode {
  double p = 0.0;
  int outcome = 0;
};

struct BobNode {
  double p = 0.0;
  std::vector<int> counts;
  SiftOutcome sift;
  std::vector<EveNode> eves;
};

struct AliceNode {
  double p = 0.0;
  std::vector<int> counts;
  std::array<std::vector<BobNode>, 2> bobs;  ///< [0] computational, [1] hadamard
};

struct OpNode {
  double p = 0.0;
  AliceOp op = AliceOp::Ctrl;
  std::vector<AliceNode> alices;
};

struct BranchTree {
  ScenarioConfig config;
  double p_hadamard = 0.5;
  std::vector<OpNode> ops;
};

Basis basis_at(int index) {
  return index == 0 ? Basis::Computational : Basis::Hadamard;
}

double basis_probability(const BranchTree& tree, int index) {
  return index == 0 ? 1.0 - tree.p_hadamard : tree.p_hadamard;
}

/// Resolve every conditional probability of a round once. Simulation and
/// exact enumeration both read from this tree, so the two paths cannot
/// drift apart.
BranchTree build_tree(const ScenarioConfig& config) {
  config.validate();
  BranchTree tree;
  tree.config = config;
  tree.p_hadamard = config.hadamard_probability;

  const StateVector initial = config.attack == Attack::None
                                  ? bob_prepare(config.cap)
                                  : stage1_state(config.cap);
  std::optional<UnitarySpec> stage2;
  if (config.attack == Attack::Full) stage2 = build_full_attack(config.cap);
  if (config.attack == Attack::Weaker) {
    stage2 = build_weaker_attack(config.epsilon, config.cap);
  }

  const auto probs = config.op_probabilities();
  for (AliceOp op : allowed_ops(config.variant)) {
    const double p_op = probs.at(op);
    if (p_op <= 0.0) continue;
    OpNode op_node;
    op_node.p = p_op;
    op_node.op = op;

    const StateVector after_op = alice_apply(op, initial);
    for (const Branch& ab : measure_enumerate(after_op, Subsystem::Alice)) {
      AliceNode alice_node;
      alice_node.p = ab.probability;
      alice_node.counts = ab.outcome;
      const StateVector returned =
          stage2 ? apply_attack_stage(*stage2, ab.post_state) : ab.post_state;

      for (int bi = 0; bi < 2; ++bi) {
        if (basis_probability(tree, bi) <= 0.0) continue;
        const Basis basis = basis_at(bi);
        for (const Branch& bb : measure_enumerate(returned, Subsystem::Bob, basis)) {
          RoundRecord record;
          record.op = op;
          record.alice_clicks = to_click_pattern(ab.outcome);
          record.bob_basis = basis;
          record.bob_clicks = to_click_pattern(bb.outcome);

          BobNode bob_node;
          bob_node.p = bb.probability;
          bob_node.counts = bb.outcome;
          bob_node.sift = sift_round(config.variant, record);
          for (const Branch& eb : measure_enumerate(bb.post_state, Subsystem::Eve)) {
            bob_node.eves.push_back({eb.probability, eb.outcome[0]});
          }
          alice_node.bobs[bi].push_back(std::move(bob_node));
        }
      }
      op_node.alices.push_back(std::move(alice_node));
    }
    tree.ops.push_back(std::move(op_node));
  }
  return tree;
}

template <typename T, typename ProbOf>
const T& pick(const std::vector<T>& arms, double r, ProbOf prob_of) {
  double acc = 0.0;
  for (const auto& arm : arms) {
    acc += prob_of(arm);
    if (r < acc) return arm;
  }
  return arms.back();
}

std::optional<int> guess_of(const ScenarioConfig& config, const SiftOutcome& sift,
                            int eve_outcome) {
  if (config.attack == Attack::None || sift.kind != SiftKind::KeyBit) {
    return std::nullopt;
  }
  return eve_outcome;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (cap < 1) throw std::invalid_argument("photon cap must be at least 1");
  if (attack == Attack::Weaker && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(hadamard_probability >= 0.0 && hadamard_probability <= 1.0)) {
    throw std::invalid_argument("hadamard probability must lie in [0, 1]");
  }
  double sum = 0.0;
  for (const auto& [op, w] : op_weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("operation weights must be finite and non-negative");
    }
    if (w > 0.0 && !op_allowed(variant, op)) {
      throw std::invalid_argument("operation " + to_string(op) +
                                  " has weight but is not allowed in the " +
                                  to_string(variant) + " variant");
    }
    sum += w;
  }
  if (!op_weights.empty() && sum <= 0.0) {
    throw std::invalid_argument("operation weights must not all be zero");
  }
}

std::map<AliceOp, double> ScenarioConfig::op_probabilities() const {
  const auto ops = allowed_ops(variant);
  std::map<AliceOp, double> out;
  if (op_weights.empty()) {
    for (AliceOp op : ops) out[op] = 1.0 / double(ops.size());
    return out;
  }
  double sum = 0.0;
  for (AliceOp op : ops) {
    auto it = op_weights.find(op);
    if (it != op_weights.end()) sum += it->second;
  }
  if (sum <= 0.0) throw std::invalid_argument("operation weights must not all be zero");
  for (AliceOp op : ops) {
    auto it = op_weights.find(op);
    out[op] = it == op_weights.end() ? 0.0 : it->second / sum;
  }
  return out;
}

double JointDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.probability;
  return s;
}

JointDistribution exact_distribution(const ScenarioConfig& config) {
  const BranchTree tree = build_tree(config);
  JointDistribution dist;
  dist.config = config;
  for (const OpNode& on : tree.ops) {
    for (const AliceNode& an : on.alices) {
      for (int bi = 0; bi < 2; ++bi) {
        const double p_basis = basis_probability(tree, bi);
        for (const BobNode& bn : an.bobs[bi]) {
          for (const EveNode& en : bn.eves) {
            const double p = on.p * an.p * p_basis * bn.p * en.p;
            if (p < kBranchCutoff) continue;
            JointOutcome entry;
            entry.op = on.op;
            entry.alice_counts = an.counts;
            entry.basis = basis_at(bi);
            entry.bob_counts = bn.counts;
            entry.eve_outcome = en.outcome;
            entry.probability = p;
            entry.sift = bn.sift;
            dist.entries.push_back(std::move(entry));
          }
        }
      }
    }
  }
  return dist;
}

RateReport derive_rates(const JointDistribution& dist) {
  std::vector<WeightedRound> rows;
  rows.reserve(dist.entries.size());
  for (const auto& e : dist.entries) {
    rows.push_back({e.op, e.sift, guess_of(dist.config, e.sift, e.eve_outcome),
                    e.probability});
  }
  return aggregate_weighted(rows);
}

void Tally::merge(const Tally& other) {
  for (const auto& [key, count] : other.counts) counts[key] += count;
  rounds += other.rounds;
}

std::uint64_t Tally::count_of(AliceOp op, SiftKind kind) const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts) {
    if (std::get<0>(key) == op && std::get<1>(key).kind == kind) total += count;
  }
  return total;
}

std::uint64_t Tally::count_outcome(const SiftOutcome& outcome) const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts) {
    if (std::get<1>(key) == outcome) total += count;
  }
  return total;
}

SimResult simulate(const ScenarioConfig& config, std::uint64_t rounds,
                   std::uint64_t seed, int workers) {
  if (rounds == 0) throw std::invalid_argument("rounds must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  const BranchTree tree = build_tree(config);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end, Tally& out) {
    for (std::uint64_t i = begin; i < end; ++i) {
      RoundRng rng(round_seed(seed, i));
      const OpNode& on =
          pick(tree.ops, rng.uniform(), [](const OpNode& n) { return n.p; });
      const AliceNode& an =
          pick(on.alices, rng.uniform(), [](const AliceNode& n) { return n.p; });
      const int bi = rng.uniform() < tree.p_hadamard ? 1 : 0;
      const BobNode& bn =
          pick(an.bobs[bi], rng.uniform(), [](const BobNode& n) { return n.p; });
      const EveNode& en =
          pick(bn.eves, rng.uniform(), [](const EveNode& n) { return n.p; });
      out.counts[{on.op, bn.sift, guess_of(config, bn.sift, en.outcome)}]++;
      out.rounds++;
    }
  };

  SimResult result;
  result.config = config;
  result.rounds = rounds;
  result.seed = seed;
  result.workers = workers;

  if (workers == 1) {
    run_range(0, rounds, result.tally);
  } else {
    std::vector<Tally> parts(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = rounds * std::uint64_t(w) / std::uint64_t(workers);
      const std::uint64_t end =
          rounds * std::uint64_t(w + 1) / std::uint64_t(workers);
      threads.emplace_back(run_range, begin, end, std::ref(parts[w]));
    }
    for (auto& t : threads) t.join();
    for (const Tally& part : parts) result.tally.merge(part);
  }

  std::vector<WeightedRound> rows;
  rows.reserve(result.tally.counts.size());
  for (const auto& [key, count] : result.tally.counts) {
    rows.push_back(
        {std::get<0>(key), std::get<1>(key), std::get<2>(key), double(count)});
  }
  result.rates = aggregate_weighted(rows);
  return result;
}

std::vector<SweepRow> sweep_epsilon(const std::vector<double>& epsilons, int cap) {
  std::vector<SweepRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    SweepRow row;
    row.epsilon = eps;
    row.kappa = kappa_of(eps);
    row.closed = closed_form_rates(eps);

    ScenarioConfig config;
    config.variant = ProtocolVariant::Simplified;
    config.attack = Attack::Weaker;
    config.epsilon = eps;
    config.cap = cap;
    const RateReport rates = derive_rates(exact_distribution(config));
    row.exact_eve_accuracy = rates.eve_key_agreement.value();
    row.exact_ctrl_loss = rates.ctrl_loss_rate.value();
    row.exact_swap_loss = rates.swap_loss_rate.value();
    row.max_gap = std::max(
        {std::fabs(row.closed.eve_accuracy - row.exact_eve_accuracy),
         std::fabs(row.closed.ctrl_loss - row.exact_ctrl_loss),
         std::fabs(row.closed.swap_loss - row.exact_swap_loss)});
    rows.push_back(row);
  }
  return rows;
}

DetectionReport detection_test(const ScenarioConfig& config, std::uint64_t rounds,
                               std::uint64_t seed, int workers, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const SimResult sim = simulate(config, rounds, seed, workers);
  const Tally& tally = sim.tally;

  DetectionReport rep;
  rep.config = config;
  rep.rounds = rounds;
  rep.seed = seed;
  rep.alpha = alpha;

  rep.ctrl_losses = tally.count_of(AliceOp::Ctrl, SiftKind::Loss);
  rep.ctrl_trials =
      rep.ctrl_losses + tally.count_of(AliceOp::Ctrl, SiftKind::CtrlTest);

  const std::uint64_t swap_err = tally.count_outcome(SiftOutcome::swap_test(true));
  rep.swap_losses = tally.count_of(AliceOp::Swap10, SiftKind::Loss) +
                    tally.count_of(AliceOp::Swap01, SiftKind::Loss);
  rep.swap_trials = rep.swap_losses + swap_err +
                    tally.count_of(AliceOp::Swap10, SiftKind::KeyBit) +
                    tally.count_of(AliceOp::Swap01, SiftKind::KeyBit);

  rep.ctrl_interval = wilson_interval(rep.ctrl_losses, rep.ctrl_trials);
  rep.swap_interval = wilson_interval(rep.swap_losses, rep.swap_trials);
  rep.loss_test = two_proportion_test(rep.ctrl_losses, rep.ctrl_trials,
                                      rep.swap_losses, rep.swap_trials);
  rep.loss_mismatch = rep.loss_test.p_value < alpha;

  rep.error_events = tally.count_outcome(SiftOutcome::ctrl_test(true)) + swap_err;
  rep.forbidden_events =
      tally.count_outcome(SiftOutcome::forbidden(ForbiddenReason::SwapAllClick)) +
      tally.count_outcome(SiftOutcome::forbidden(ForbiddenReason::BothDetect));
  rep.detected = rep.loss_mismatch || rep.error_events > 0 || rep.forbidden_events > 0;
  return rep;
}

double mirror_detectability(const ScenarioConfig& config) {
  ScenarioConfig mirror = config;
  mirror.variant = ProtocolVariant::Mirror;
  const JointDistribution dist = exact_distribution(mirror);

  double swapall = 0.0;
  double clicked = 0.0;
  for (const auto& e : dist.entries) {
    if (e.op != AliceOp::SwapAll) continue;
    swapall += e.probability;
    const bool any_click = std::any_of(e.bob_counts.begin(), e.bob_counts.end(),
                                       [](int c) { return c >= 1; });
    if (any_click) clicked += e.probability;
  }
  if (swapall <= 0.0) {
    throw std::invalid_argument("swapall rounds have zero probability under these weights");
  }
  return clicked / swapall;
}

}  // namespace mirrorsim
