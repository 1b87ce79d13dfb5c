#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirrorsim/fock.hpp"

namespace mirrorsim {

enum class ProtocolVariant { Mirror, Simplified };

/// Alice's classical choice for a round. SwapAll exists only in the full
/// Mirror protocol; the simplified variant drops it.
enum class AliceOp { Ctrl, Swap10, Swap01, SwapAll };

bool op_allowed(ProtocolVariant variant, AliceOp op);
std::vector<AliceOp> allowed_ops(ProtocolVariant variant);

std::string to_string(ProtocolVariant variant);
std::string to_string(AliceOp op);
std::string to_string(Basis basis);
ProtocolVariant parse_variant(const std::string& text);
AliceOp parse_op(const std::string& text);
Basis parse_basis(const std::string& text);

/// Classification of a round after the public sifting discussion.
enum class SiftKind { KeyBit, CtrlTest, SwapTest, Loss, Discard, Forbidden };

enum class DiscardReason { MismatchedBasis, SwapAllClear };

/// Events with zero probability under honest execution; any occurrence is
/// direct evidence of tampering.
enum class ForbiddenReason { SwapAllClick, BothDetect };

struct SiftOutcome {
  SiftKind kind = SiftKind::Loss;
  int key_bit = -1;                                         ///< KeyBit only
  bool error = false;                                       ///< CtrlTest/SwapTest only
  DiscardReason discard_reason = DiscardReason::MismatchedBasis;
  ForbiddenReason forbidden_reason = ForbiddenReason::SwapAllClick;

  auto operator<=>(const SiftOutcome&) const = default;

  static SiftOutcome key(int bit);
  static SiftOutcome ctrl_test(bool error);
  static SiftOutcome swap_test(bool error);
  static SiftOutcome loss();
  static SiftOutcome discard(DiscardReason reason);
  static SiftOutcome forbidden(ForbiddenReason reason);

  std::string to_string() const;
};

/// Everything publicly announced about one round.
struct RoundRecord {
  AliceOp op = AliceOp::Ctrl;
  ClickPattern alice_clicks;
  Basis bob_basis = Basis::Computational;
  ClickPattern bob_clicks;
};

/// Bob's fresh channel state: a single photon in the |+> mode.
StateVector bob_prepare(int cap = kDefaultPhotonCap);

/// Alice's operation as a mode permutation: Ctrl returns the channel
/// untouched, Swap10 exchanges the |1>-mode slots, Swap01 the |0>-mode
/// slots, SwapAll both. Bijective on labels, so norm is preserved.
StateVector alice_apply(AliceOp op, const StateVector& state);

/// Classify one announced round. Rules, first match wins:
///  - Swap10/Swap01 with a hadamard-basis measurement, or Ctrl with a
///    computational one, is discarded as a basis mismatch.
///  - SwapAll rounds only check that Bob saw nothing; a click is forbidden.
///  - Ctrl: no click is a loss, any |->-detector click is a test error,
///    otherwise the test passes.
///  - Swap10/Swap01 with an Alice click: a simultaneous Bob click is
///    forbidden, silence confirms the swap.
///  - Swap10/Swap01 without an Alice click: no click is a loss, a click in
///    the swapped-out mode is a test error, otherwise the surviving mode
///    fixes the key bit (0 for Swap10, 1 for Swap01).
SiftOutcome sift_round(ProtocolVariant variant, const RoundRecord& record);

/// One round reduced to what the rate estimators need. Eve's guess is her
/// probe readout: 0 and 1 claim the key bit, 2 concedes the round.
struct SiftedRound {
  AliceOp op = AliceOp::Ctrl;
  SiftOutcome outcome;
  std::optional<int> eve_guess;
};

/// Same payload with a weight, so exact distributions (probability
/// weights) and tallies (counts) feed one estimator.
struct WeightedRound {
  AliceOp op = AliceOp::Ctrl;
  SiftOutcome outcome;
  std::optional<int> eve_guess;
  double weight = 0.0;
};

/// Rates are left unset when their population is empty; they are never
/// coerced to zero.
struct RateReport {
  std::optional<double> ctrl_loss_rate;
  std::optional<double> swap10_loss_rate;
  std::optional<double> swap01_loss_rate;
  std::optional<double> swap_loss_rate;  ///< both swap ops pooled
  std::optional<double> ctrl_error_rate;
  std::optional<double> swap_error_rate;

  double key_rate = 0.0;
  double forbidden_rate = 0.0;

  /// Fraction of key rounds where Eve's record matches the key bit.
  std::optional<double> eve_key_agreement;
};

/// Estimators over announced rounds:
///  - loss rates condition on the rounds eligible to produce a click
///    (Ctrl: loss + test outcomes; Swap-x: Alice-silent matched-basis
///    rounds, i.e. loss + key + swap-test errors),
///  - error rates condition on the corresponding test populations,
///  - key and forbidden rates divide by all rounds.
/// Throws ContractViolation when the total weight is zero.
RateReport aggregate_rates(const std::vector<SiftedRound>& rounds);
RateReport aggregate_weighted(const std::vector<WeightedRound>& rounds);

}  // namespace mirrorsim
