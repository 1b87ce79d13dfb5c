#include <cmath>
#include <vector>

#include "doctest.h"
#include "mirrorsim/protocol.hpp"

using namespace mirrorsim;

namespace {

const ClickPattern kClear{false, false};
const ClickPattern kFirst{true, false};
const ClickPattern kSecond{false, true};
const ClickPattern kBoth{true, true};

SiftOutcome sift(ProtocolVariant variant, AliceOp op, ClickPattern alice, Basis basis,
                 ClickPattern bob) {
  RoundRecord r;
  r.op = op;
  r.alice_clicks = alice;
  r.bob_basis = basis;
  r.bob_clicks = bob;
  return sift_round(variant, r);
}

}  // namespace

TEST_CASE("operation sets per variant") {
  CHECK(allowed_ops(ProtocolVariant::Simplified) ==
        std::vector<AliceOp>{AliceOp::Ctrl, AliceOp::Swap10, AliceOp::Swap01});
  CHECK(allowed_ops(ProtocolVariant::Mirror) ==
        std::vector<AliceOp>{AliceOp::Ctrl, AliceOp::Swap10, AliceOp::Swap01,
                             AliceOp::SwapAll});
  CHECK(op_allowed(ProtocolVariant::Mirror, AliceOp::SwapAll));
  CHECK_FALSE(op_allowed(ProtocolVariant::Simplified, AliceOp::SwapAll));
  CHECK(op_allowed(ProtocolVariant::Simplified, AliceOp::Ctrl));
}

TEST_CASE("names round-trip through their parsers") {
  for (AliceOp op : allowed_ops(ProtocolVariant::Mirror)) {
    CHECK(parse_op(to_string(op)) == op);
  }
  for (ProtocolVariant v : {ProtocolVariant::Mirror, ProtocolVariant::Simplified}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  for (Basis b : {Basis::Computational, Basis::Hadamard}) {
    CHECK(parse_basis(to_string(b)) == b);
  }
  CHECK_THROWS_AS(parse_op("swap11"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("original"), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis("diagonal"), std::invalid_argument);
}

TEST_CASE("bob prepares one photon in the plus mode") {
  const StateVector s = bob_prepare();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(s.amps.size() == 2);
  CHECK(std::abs(s.amplitude(bob_label(0, 1)) - Complex{r, 0.0}) <= 1e-15);
  CHECK(std::abs(s.amplitude(bob_label(1, 0)) - Complex{r, 0.0}) <= 1e-15);
  CHECK(std::fabs(s.norm() - 1.0) <= 1e-15);

  // In the Hadamard mode picture that is exactly one |+>-mode photon.
  const StateVector x = hadamard_transform(s);
  CHECK(x.amps.size() == 1);
  CHECK(std::abs(x.amplitude(bob_label(0, 1)) - Complex{1.0, 0.0}) <= 1e-15);
}

TEST_CASE("alice operations permute the advertised mode pairs") {
  BasisLabel l;
  l.a1 = 0, l.a0 = 0, l.b1 = 1, l.b0 = 1, l.e = 2;
  const StateVector s = build_state({{1.0, l}});

  const StateVector ctrl = alice_apply(AliceOp::Ctrl, s);
  CHECK(std::abs(ctrl.amplitude(l) - Complex{1.0, 0.0}) == 0.0);

  BasisLabel swapped10 = l;
  swapped10.a1 = 1, swapped10.b1 = 0;
  CHECK(std::abs(alice_apply(AliceOp::Swap10, s).amplitude(swapped10) -
                 Complex{1.0, 0.0}) == 0.0);

  BasisLabel swapped01 = l;
  swapped01.a0 = 1, swapped01.b0 = 0;
  CHECK(std::abs(alice_apply(AliceOp::Swap01, s).amplitude(swapped01) -
                 Complex{1.0, 0.0}) == 0.0);

  BasisLabel swappedall = l;
  swappedall.a1 = 1, swappedall.a0 = 1, swappedall.b1 = 0, swappedall.b0 = 0;
  CHECK(std::abs(alice_apply(AliceOp::SwapAll, s).amplitude(swappedall) -
                 Complex{1.0, 0.0}) == 0.0);
}

TEST_CASE("alice operations are involutive and norm-preserving") {
  const StateVector s = build_state({{0.6, bob_label(0, 1, 1)},
                                     {Complex{0.0, 0.48}, bob_label(1, 0, 2)},
                                     {-0.64, bob_label(1, 1, 0)}});
  for (AliceOp op : allowed_ops(ProtocolVariant::Mirror)) {
    const StateVector once = alice_apply(op, s);
    CHECK(std::fabs(once.norm_sq() - s.norm_sq()) <= 1e-15);
    const StateVector twice = alice_apply(op, once);
    for (const auto& [l, amp] : s.amps) {
      CHECK(std::abs(twice.amplitude(l) - amp) == 0.0);
    }
    CHECK(twice.amps.size() == s.amps.size());
  }
}

TEST_CASE("sifting discards mismatched bases first") {
  for (ClickPattern alice : {kClear, kFirst, kSecond, kBoth}) {
    for (ClickPattern bob : {kClear, kFirst, kSecond, kBoth}) {
      CHECK(sift(ProtocolVariant::Mirror, AliceOp::Swap10, alice, Basis::Hadamard, bob) ==
            SiftOutcome::discard(DiscardReason::MismatchedBasis));
      CHECK(sift(ProtocolVariant::Mirror, AliceOp::Swap01, alice, Basis::Hadamard, bob) ==
            SiftOutcome::discard(DiscardReason::MismatchedBasis));
      CHECK(sift(ProtocolVariant::Mirror, AliceOp::Ctrl, alice, Basis::Computational,
                 bob) == SiftOutcome::discard(DiscardReason::MismatchedBasis));
    }
  }
}

TEST_CASE("swapall rounds only watch for bob's detector") {
  for (Basis basis : {Basis::Computational, Basis::Hadamard}) {
    for (ClickPattern alice : {kClear, kFirst, kSecond, kBoth}) {
      CHECK(sift(ProtocolVariant::Mirror, AliceOp::SwapAll, alice, basis, kClear) ==
            SiftOutcome::discard(DiscardReason::SwapAllClear));
      for (ClickPattern bob : {kFirst, kSecond, kBoth}) {
        CHECK(sift(ProtocolVariant::Mirror, AliceOp::SwapAll, alice, basis, bob) ==
              SiftOutcome::forbidden(ForbiddenReason::SwapAllClick));
      }
    }
  }
}

TEST_CASE("ctrl rounds test the minus detector") {
  const auto ctrl = [](ClickPattern bob) {
    return sift(ProtocolVariant::Simplified, AliceOp::Ctrl, kClear, Basis::Hadamard, bob);
  };
  CHECK(ctrl(kClear) == SiftOutcome::loss());
  CHECK(ctrl(kSecond) == SiftOutcome::ctrl_test(false));
  CHECK(ctrl(kFirst) == SiftOutcome::ctrl_test(true));
  CHECK(ctrl(kBoth) == SiftOutcome::ctrl_test(true));
  // Alice cannot detect photons she reflected; her record is ignored.
  CHECK(sift(ProtocolVariant::Mirror, AliceOp::Ctrl, kBoth, Basis::Hadamard, kSecond) ==
        SiftOutcome::ctrl_test(false));
}

TEST_CASE("swap rounds where alice detected expect bob to stay silent") {
  for (AliceOp op : {AliceOp::Swap10, AliceOp::Swap01}) {
    for (ClickPattern alice : {kFirst, kSecond, kBoth}) {
      CHECK(sift(ProtocolVariant::Simplified, op, alice, Basis::Computational, kClear) ==
            SiftOutcome::swap_test(false));
      for (ClickPattern bob : {kFirst, kSecond, kBoth}) {
        CHECK(sift(ProtocolVariant::Simplified, op, alice, Basis::Computational, bob) ==
              SiftOutcome::forbidden(ForbiddenReason::BothDetect));
      }
    }
  }
}

TEST_CASE("swap rounds where alice stayed silent yield key bits") {
  const auto s10 = [](ClickPattern bob) {
    return sift(ProtocolVariant::Simplified, AliceOp::Swap10, kClear,
                Basis::Computational, bob);
  };
  CHECK(s10(kClear) == SiftOutcome::loss());
  CHECK(s10(kSecond) == SiftOutcome::key(0));  // surviving |0>-mode photon
  CHECK(s10(kFirst) == SiftOutcome::swap_test(true));
  CHECK(s10(kBoth) == SiftOutcome::swap_test(true));

  const auto s01 = [](ClickPattern bob) {
    return sift(ProtocolVariant::Simplified, AliceOp::Swap01, kClear,
                Basis::Computational, bob);
  };
  CHECK(s01(kClear) == SiftOutcome::loss());
  CHECK(s01(kFirst) == SiftOutcome::key(1));  // surviving |1>-mode photon
  CHECK(s01(kSecond) == SiftOutcome::swap_test(true));
  CHECK(s01(kBoth) == SiftOutcome::swap_test(true));
}

TEST_CASE("the simplified variant rejects swapall records outright") {
  RoundRecord r;
  r.op = AliceOp::SwapAll;
  CHECK_THROWS_AS(sift_round(ProtocolVariant::Simplified, r), ContractViolation);
}

TEST_CASE("sift outcomes validate and describe themselves") {
  CHECK_THROWS_AS(SiftOutcome::key(2), ContractViolation);
  CHECK(SiftOutcome::key(0).to_string() == "key_bit_0");
  CHECK(SiftOutcome::key(1).to_string() == "key_bit_1");
  CHECK(SiftOutcome::ctrl_test(true).to_string() == "ctrl_test_error");
  CHECK(SiftOutcome::swap_test(false).to_string() == "swap_test_pass");
  CHECK(SiftOutcome::loss().to_string() == "loss");
  CHECK(SiftOutcome::discard(DiscardReason::MismatchedBasis).to_string() ==
        "discard_mismatched_basis");
  CHECK(SiftOutcome::forbidden(ForbiddenReason::BothDetect).to_string() ==
        "forbidden_both_detect");
}

TEST_CASE("rate aggregation matches a hand-counted example") {
  std::vector<SiftedRound> rounds;
  // Ctrl: 2 losses, 1 passing test, 1 failing test.
  rounds.push_back({AliceOp::Ctrl, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Ctrl, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Ctrl, SiftOutcome::ctrl_test(false), std::nullopt});
  rounds.push_back({AliceOp::Ctrl, SiftOutcome::ctrl_test(true), std::nullopt});
  // Swap10, alice silent: 3 losses, 2 key bits, 1 wrong-mode click.
  rounds.push_back({AliceOp::Swap10, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::key(0), 0});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::key(0), 2});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::swap_test(true), std::nullopt});
  // Swap10, alice clicked: a passing test, outside every loss population.
  rounds.push_back({AliceOp::Swap10, SiftOutcome::swap_test(false), std::nullopt});
  // Swap01, alice silent: 1 loss, 1 key bit.
  rounds.push_back({AliceOp::Swap01, SiftOutcome::loss(), std::nullopt});
  rounds.push_back({AliceOp::Swap01, SiftOutcome::key(1), 1});
  // Bookkeeping rows.
  rounds.push_back({AliceOp::SwapAll, SiftOutcome::forbidden(ForbiddenReason::SwapAllClick),
                    std::nullopt});
  rounds.push_back({AliceOp::Swap10, SiftOutcome::discard(DiscardReason::MismatchedBasis),
                    std::nullopt});
  rounds.push_back({AliceOp::SwapAll, SiftOutcome::discard(DiscardReason::SwapAllClear),
                    std::nullopt});

  const RateReport rep = aggregate_rates(rounds);
  // 16 rounds total.
  CHECK(rep.ctrl_loss_rate.value() == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
  CHECK(rep.ctrl_error_rate.value() == doctest::Approx(1.0 / 2.0).epsilon(1e-15));
  CHECK(rep.swap10_loss_rate.value() == doctest::Approx(3.0 / 6.0).epsilon(1e-15));
  CHECK(rep.swap01_loss_rate.value() == doctest::Approx(1.0 / 2.0).epsilon(1e-15));
  CHECK(rep.swap_loss_rate.value() == doctest::Approx(4.0 / 8.0).epsilon(1e-15));
  CHECK(rep.swap_error_rate.value() == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  CHECK(rep.key_rate == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
  CHECK(rep.forbidden_rate == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  // Guesses 0 and 1 hit their key bits, the probe's third level concedes.
  CHECK(rep.eve_key_agreement.value() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("empty populations stay undefined instead of becoming zero") {
  std::vector<SiftedRound> rounds;
  rounds.push_back({AliceOp::Swap10, SiftOutcome::discard(DiscardReason::MismatchedBasis),
                    std::nullopt});
  const RateReport rep = aggregate_rates(rounds);
  CHECK_FALSE(rep.ctrl_loss_rate.has_value());
  CHECK_FALSE(rep.swap10_loss_rate.has_value());
  CHECK_FALSE(rep.swap01_loss_rate.has_value());
  CHECK_FALSE(rep.swap_loss_rate.has_value());
  CHECK_FALSE(rep.ctrl_error_rate.has_value());
  CHECK_FALSE(rep.swap_error_rate.has_value());
  CHECK_FALSE(rep.eve_key_agreement.has_value());
  CHECK(rep.key_rate == 0.0);
  CHECK(rep.forbidden_rate == 0.0);

  CHECK_THROWS_AS(aggregate_rates({}), ContractViolation);
}

TEST_CASE("weighted aggregation agrees with unit-weight counting") {
  std::vector<SiftedRound> counted;
  std::vector<WeightedRound> weighted;
  const auto add = [&](AliceOp op, SiftOutcome oc, std::optional<int> guess, int copies) {
    for (int i = 0; i < copies; ++i) counted.push_back({op, oc, guess});
    weighted.push_back({op, oc, guess, double(copies)});
  };
  add(AliceOp::Ctrl, SiftOutcome::loss(), std::nullopt, 5);
  add(AliceOp::Ctrl, SiftOutcome::ctrl_test(false), std::nullopt, 3);
  add(AliceOp::Swap10, SiftOutcome::key(0), 0, 4);
  add(AliceOp::Swap10, SiftOutcome::loss(), std::nullopt, 2);
  add(AliceOp::Swap01, SiftOutcome::key(1), 2, 2);

  const RateReport a = aggregate_rates(counted);
  const RateReport b = aggregate_weighted(weighted);
  CHECK(a.ctrl_loss_rate.value() == doctest::Approx(b.ctrl_loss_rate.value()).epsilon(1e-15));
  CHECK(a.swap_loss_rate.value() == doctest::Approx(b.swap_loss_rate.value()).epsilon(1e-15));
  CHECK(a.key_rate == doctest::Approx(b.key_rate).epsilon(1e-15));
  CHECK(a.eve_key_agreement.value() ==
        doctest::Approx(b.eve_key_agreement.value()).epsilon(1e-15));

  CHECK_THROWS_AS(aggregate_weighted({{AliceOp::Ctrl, SiftOutcome::loss(), std::nullopt,
                                       -0.5}}),
                  ContractViolation);
  CHECK_THROWS_AS(aggregate_weighted({{AliceOp::Ctrl, SiftOutcome::loss(), std::nullopt,
                                       0.0}}),
                  ContractViolation);
}
