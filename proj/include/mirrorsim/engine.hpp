#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "mirrorsim/adversary.hpp"
#include "mirrorsim/fock.hpp"
#include "mirrorsim/protocol.hpp"
#include "mirrorsim/stats.hpp"

namespace mirrorsim {

struct ScenarioConfig {
  ProtocolVariant variant = ProtocolVariant::Simplified;
  Attack attack = Attack::None;
  double epsilon = 0.0;  ///< weaker attack parameter, ignored otherwise
  int cap = kDefaultPhotonCap;
  double hadamard_probability = 0.5;

  /// Relative weights for Alice's operation draw. Empty means uniform over
  /// the variant's allowed operations.
  std::map<AliceOp, double> op_weights;

  /// Throws std::invalid_argument on out-of-range parameters or weights
  /// for operations the variant does not allow.
  void validate() const;

  std::map<AliceOp, double> op_probabilities() const;
};

/// One fully resolved round history with its exact probability. Bob's
/// occupation is recorded in the basis he measured in.
struct JointOutcome {
  AliceOp op = AliceOp::Ctrl;
  std::vector<int> alice_counts;
  Basis basis = Basis::Computational;
  std::vector<int> bob_counts;
  int eve_outcome = 0;
  double probability = 0.0;
  SiftOutcome sift;
};

struct JointDistribution {
  ScenarioConfig config;
  std::vector<JointOutcome> entries;

  double total_probability() const;
};

/// Enumerate every measurement history of one round: Alice's ancilla
/// readout, Bob's basis choice and readout after Eve's return-path
/// unitary, then Eve's probe readout. Branches below 1e-30 probability
/// are dropped.
JointDistribution exact_distribution(const ScenarioConfig& config);

/// Probability-weighted analogue of the empirical estimators. Eve's probe
/// readout counts as her guess only when an attack is active.
RateReport derive_rates(const JointDistribution& dist);

struct Tally {
  using Key = std::tuple<AliceOp, SiftOutcome, std::optional<int>>;
  std::map<Key, std::uint64_t> counts;
  std::uint64_t rounds = 0;

  void merge(const Tally& other);
  std::uint64_t count_of(AliceOp op, SiftKind kind) const;
  std::uint64_t count_outcome(const SiftOutcome& outcome) const;
};

struct SimResult {
  ScenarioConfig config;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  Tally tally;
  RateReport rates;
};

/// Monte Carlo over the exact branch tree. Every round derives its own
/// generator from (seed, round index), so results are identical for any
/// worker count and any future run with the same seed.
SimResult simulate(const ScenarioConfig& config, std::uint64_t rounds,
                   std::uint64_t seed, int workers = 1);

/// One epsilon of the weaker-attack sweep: closed forms next to the rates
/// recovered from full enumeration, and the largest disagreement.
struct SweepRow {
  double epsilon = 0.0;
  double kappa = 0.0;
  ClosedFormRates closed;
  double exact_eve_accuracy = 0.0;
  double exact_ctrl_loss = 0.0;
  double exact_swap_loss = 0.0;
  double max_gap = 0.0;
};

std::vector<SweepRow> sweep_epsilon(const std::vector<double>& epsilons,
                                    int cap = kDefaultPhotonCap);

struct DetectionReport {
  ScenarioConfig config;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  double alpha = 0.01;

  std::uint64_t ctrl_trials = 0;
  std::uint64_t ctrl_losses = 0;
  std::uint64_t swap_trials = 0;
  std::uint64_t swap_losses = 0;
  Interval ctrl_interval;
  Interval swap_interval;
  ZTestResult loss_test;
  bool loss_mismatch = false;

  std::uint64_t error_events = 0;
  std::uint64_t forbidden_events = 0;
  bool detected = false;
};

/// Simulate, then look for the three public signatures of tampering:
/// ctrl-vs-swap loss-rate mismatch (pooled z-test at level alpha), any
/// test error, any forbidden event.
DetectionReport detection_test(const ScenarioConfig& config, std::uint64_t rounds,
                               std::uint64_t seed, int workers = 1,
                               double alpha = 0.01);

/// P(Bob sees any click | SwapAll round) in the Mirror variant: the
/// per-round chance a SwapAll check trips on the configured attack.
double mirror_detectability(const ScenarioConfig& config);

}  // namespace mirrorsim
