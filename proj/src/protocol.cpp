#include "mirrorsim/protocol.hpp"

#include <cmath>

namespace mirrorsim {

bool op_allowed(ProtocolVariant variant, AliceOp op) {
  return op != AliceOp::SwapAll || variant == ProtocolVariant::Mirror;
}

std::vector<AliceOp> allowed_ops(ProtocolVariant variant) {
  std::vector<AliceOp> ops{AliceOp::Ctrl, AliceOp::Swap10, AliceOp::Swap01};
  if (variant == ProtocolVariant::Mirror) ops.push_back(AliceOp::SwapAll);
  return ops;
}

std::string to_string(ProtocolVariant variant) {
  return variant == ProtocolVariant::Mirror ? "mirror" : "simplified";
}

std::string to_string(AliceOp op) {
  switch (op) {
    case AliceOp::Ctrl: return "ctrl";
    case AliceOp::Swap10: return "swap10";
    case AliceOp::Swap01: return "swap01";
    case AliceOp::SwapAll: return "swapall";
  }
  throw ContractViolation("unreachable op");
}

std::string to_string(Basis basis) {
  return basis == Basis::Computational ? "computational" : "hadamard";
}

ProtocolVariant parse_variant(const std::string& text) {
  if (text == "mirror") return ProtocolVariant::Mirror;
  if (text == "simplified") return ProtocolVariant::Simplified;
  throw std::invalid_argument("unknown protocol variant: " + text);
}

AliceOp parse_op(const std::string& text) {
  if (text == "ctrl") return AliceOp::Ctrl;
  if (text == "swap10") return AliceOp::Swap10;
  if (text == "swap01") return AliceOp::Swap01;
  if (text == "swapall") return AliceOp::SwapAll;
  throw std::invalid_argument("unknown operation: " + text);
}

Basis parse_basis(const std::string& text) {
  if (text == "computational") return Basis::Computational;
  if (text == "hadamard") return Basis::Hadamard;
  throw std::invalid_argument("unknown basis: " + text);
}

SiftOutcome SiftOutcome::key(int bit) {
  if (bit != 0 && bit != 1) throw ContractViolation("key bit must be 0 or 1");
  SiftOutcome o;
  o.kind = SiftKind::KeyBit;
  o.key_bit = bit;
  return o;
}

SiftOutcome SiftOutcome::ctrl_test(bool error) {
  SiftOutcome o;
  o.kind = SiftKind::CtrlTest;
  o.error = error;
  return o;
}

SiftOutcome SiftOutcome::swap_test(bool error) {
  SiftOutcome o;
  o.kind = SiftKind::SwapTest;
  o.error = error;
  return o;
}

SiftOutcome SiftOutcome::loss() { return SiftOutcome{}; }

SiftOutcome SiftOutcome::discard(DiscardReason reason) {
  SiftOutcome o;
  o.kind = SiftKind::Discard;
  o.discard_reason = reason;
  return o;
}

SiftOutcome SiftOutcome::forbidden(ForbiddenReason reason) {
  SiftOutcome o;
  o.kind = SiftKind::Forbidden;
  o.forbidden_reason = reason;
  return o;
}

std::string SiftOutcome::to_string() const {
  switch (kind) {
    case SiftKind::KeyBit:
      return key_bit == 0 ? "key_bit_0" : "key_bit_1";
    case SiftKind::CtrlTest:
      return error ? "ctrl_test_error" : "ctrl_test_pass";
    case SiftKind::SwapTest:
      return error ? "swap_test_error" : "swap_test_pass";
    case SiftKind::Loss:
      return "loss";
    case SiftKind::Discard:
      return discard_reason == DiscardReason::MismatchedBasis
                 ? "discard_mismatched_basis"
                 : "discard_swapall_clear";
    case SiftKind::Forbidden:
      return forbidden_reason == ForbiddenReason::SwapAllClick
                 ? "forbidden_swapall_click"
                 : "forbidden_both_detect";
  }
  throw ContractViolation("unreachable outcome kind");
}

StateVector bob_prepare(int cap) {
  const double r = 1.0 / std::sqrt(2.0);
  return build_state({{r, bob_label(0, 1)}, {r, bob_label(1, 0)}}, cap);
}

StateVector alice_apply(AliceOp op, const StateVector& state) {
  if (op == AliceOp::Ctrl) return state;
  StateVector out;
  out.cap = state.cap;
  for (const auto& [label, amp] : state.amps) {
    BasisLabel target = label;
    if (op == AliceOp::Swap10 || op == AliceOp::SwapAll) std::swap(target.a1, target.b1);
    if (op == AliceOp::Swap01 || op == AliceOp::SwapAll) std::swap(target.a0, target.b0);
    out.amps.emplace(target, amp);
  }
  return out;
}

SiftOutcome sift_round(ProtocolVariant variant, const RoundRecord& record) {
  if (!op_allowed(variant, record.op)) {
    throw ContractViolation("operation " + to_string(record.op) +
                            " is not part of the " + to_string(variant) +
                            " variant");
  }

  const bool swap_single = record.op == AliceOp::Swap10 || record.op == AliceOp::Swap01;
  if (swap_single && record.bob_basis == Basis::Hadamard) {
    return SiftOutcome::discard(DiscardReason::MismatchedBasis);
  }
  if (record.op == AliceOp::Ctrl && record.bob_basis == Basis::Computational) {
    return SiftOutcome::discard(DiscardReason::MismatchedBasis);
  }

  if (record.op == AliceOp::SwapAll) {
    return record.bob_clicks.any()
               ? SiftOutcome::forbidden(ForbiddenReason::SwapAllClick)
               : SiftOutcome::discard(DiscardReason::SwapAllClear);
  }

  if (record.op == AliceOp::Ctrl) {
    if (!record.bob_clicks.any()) return SiftOutcome::loss();
    return SiftOutcome::ctrl_test(record.bob_clicks.first);
  }

  if (record.alice_clicks.any()) {
    return record.bob_clicks.any()
               ? SiftOutcome::forbidden(ForbiddenReason::BothDetect)
               : SiftOutcome::swap_test(false);
  }

  if (!record.bob_clicks.any()) return SiftOutcome::loss();
  const bool wrong_mode = record.op == AliceOp::Swap10 ? record.bob_clicks.first
                                                       : record.bob_clicks.second;
  if (wrong_mode) return SiftOutcome::swap_test(true);
  return SiftOutcome::key(record.op == AliceOp::Swap10 ? 0 : 1);
}

namespace {

std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

RateReport aggregate_weighted(const std::vector<WeightedRound>& rounds) {
  double total = 0.0;
  double ctrl_loss = 0, ctrl_pass = 0, ctrl_err = 0;
  double s10_loss = 0, s10_click = 0;
  double s01_loss = 0, s01_click = 0;
  double swap_err = 0, key_total = 0;
  double forbidden = 0;
  double eve_hits = 0, eve_total = 0;

  for (const auto& row : rounds) {
    const double w = row.weight;
    if (w < 0.0) throw ContractViolation("round weights must be non-negative");
    total += w;
    const SiftOutcome& oc = row.outcome;
    switch (oc.kind) {
      case SiftKind::Loss:
        if (row.op == AliceOp::Ctrl) ctrl_loss += w;
        if (row.op == AliceOp::Swap10) s10_loss += w;
        if (row.op == AliceOp::Swap01) s01_loss += w;
        break;
      case SiftKind::CtrlTest:
        (oc.error ? ctrl_err : ctrl_pass) += w;
        break;
      case SiftKind::SwapTest:
        if (oc.error) {
          swap_err += w;
          if (row.op == AliceOp::Swap10) s10_click += w;
          if (row.op == AliceOp::Swap01) s01_click += w;
        }
        break;
      case SiftKind::KeyBit:
        key_total += w;
        if (row.op == AliceOp::Swap10) s10_click += w;
        if (row.op == AliceOp::Swap01) s01_click += w;
        if (row.eve_guess) {
          eve_total += w;
          if (*row.eve_guess == oc.key_bit) eve_hits += w;
        }
        break;
      case SiftKind::Forbidden:
        forbidden += w;
        break;
      case SiftKind::Discard:
        break;
    }
  }
  if (total <= 0.0) throw ContractViolation("cannot aggregate zero weight");

  RateReport rep;
  rep.ctrl_loss_rate = ratio(ctrl_loss, ctrl_loss + ctrl_pass + ctrl_err);
  rep.swap10_loss_rate = ratio(s10_loss, s10_loss + s10_click);
  rep.swap01_loss_rate = ratio(s01_loss, s01_loss + s01_click);
  rep.swap_loss_rate =
      ratio(s10_loss + s01_loss, s10_loss + s01_loss + s10_click + s01_click);
  rep.ctrl_error_rate = ratio(ctrl_err, ctrl_pass + ctrl_err);
  rep.swap_error_rate = ratio(swap_err, swap_err + key_total);
  rep.key_rate = key_total / total;
  rep.forbidden_rate = forbidden / total;
  rep.eve_key_agreement = ratio(eve_hits, eve_total);
  return rep;
}

RateReport aggregate_rates(const std::vector<SiftedRound>& rounds) {
  std::vector<WeightedRound> weighted;
  weighted.reserve(rounds.size());
  for (const auto& row : rounds) {
    weighted.push_back({row.op, row.outcome, row.eve_guess, 1.0});
  }
  return aggregate_weighted(weighted);
}

}  // namespace mirrorsim
