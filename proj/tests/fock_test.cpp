#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "mirrorsim/fock.hpp"

using namespace mirrorsim;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kRoot3 = std::sqrt(3.0);

void check_amp(const StateVector& s, const BasisLabel& l, double re, double im = 0.0,
               double tol = 1e-12) {
  INFO("label ", l.to_string());
  const Complex a = s.amplitude(l);
  CHECK(std::fabs(a.real() - re) <= tol);
  CHECK(std::fabs(a.imag() - im) <= tol);
}

BasisLabel label(int a1, int a0, int b1, int b0, int e) {
  BasisLabel l;
  l.a1 = std::uint8_t(a1);
  l.a0 = std::uint8_t(a0);
  l.b1 = std::uint8_t(b1);
  l.b0 = std::uint8_t(b0);
  l.e = std::uint8_t(e);
  return l;
}

std::vector<BasisLabel> all_labels(int cap) {
  std::vector<BasisLabel> out;
  for (int a1 = 0; a1 <= cap; ++a1)
    for (int a0 = 0; a1 + a0 <= cap; ++a0)
      for (int b1 = 0; a1 + a0 + b1 <= cap; ++b1)
        for (int b0 = 0; a1 + a0 + b1 + b0 <= cap; ++b0)
          for (int e = 0; e < kEveLevels; ++e) out.push_back(label(a1, a0, b1, b0, e));
  return out;
}

StateVector random_state(std::mt19937_64& rng, int cap) {
  std::normal_distribution<double> gauss;
  std::vector<std::pair<Complex, BasisLabel>> terms;
  for (const BasisLabel& l : all_labels(cap)) {
    terms.emplace_back(Complex{gauss(rng), gauss(rng)}, l);
  }
  return build_state(terms, cap).normalized();
}

}  // namespace

TEST_CASE("labels order lexicographically and know their photon budget") {
  CHECK(label(0, 0, 0, 1, 0) < label(0, 0, 1, 0, 0));
  CHECK(label(0, 0, 0, 0, 1) < label(0, 0, 0, 1, 0));
  CHECK(label(1, 0, 0, 0, 0) > label(0, 2, 0, 0, 2));

  CHECK(label(1, 0, 0, 1, 2).total_photons() == 2);
  CHECK(label(1, 0, 0, 1, 2).fits(2));
  CHECK_FALSE(label(1, 1, 1, 0, 0).fits(2));
  CHECK_FALSE(label(0, 0, 0, 0, 3).fits(2));
  CHECK(label(0, 0, 0, 0, 0).fits(0));

  CHECK(label(2, 0, 0, 0, 1).to_string() == "(2,0,0,0,1)");
  CHECK(all_labels(2).size() == 45);
}

TEST_CASE("build_state sums duplicate terms and rejects oversize labels") {
  const StateVector s = build_state(
      {{0.5, bob_label(0, 1)}, {0.25, bob_label(0, 1)}, {-0.5, bob_label(1, 0)}});
  check_amp(s, bob_label(0, 1), 0.75);
  check_amp(s, bob_label(1, 0), -0.5);
  CHECK(s.amps.size() == 2);

  CHECK_THROWS_AS(build_state({{1.0, label(1, 1, 1, 0, 0)}}, 2), TruncationError);
  CHECK_THROWS_AS(build_state({{1.0, label(0, 0, 0, 0, 3)}}, 2), TruncationError);
  CHECK_THROWS_AS(build_state({}, -1), TruncationError);
  CHECK_NOTHROW(build_state({{1.0, label(2, 0, 0, 0, 2)}}, 2));
}

TEST_CASE("canonical prunes numerical dust, normalized rescales") {
  const StateVector s =
      build_state({{1.0, bob_label(0, 1)}, {1e-9, bob_label(1, 0)}, {5e-8, eve_label(1)}});
  const StateVector c = s.canonical();
  CHECK(c.amps.size() == 2);  // 1e-9 squared sits below the prune threshold
  CHECK(c.amplitude(bob_label(1, 0)) == Complex{0.0, 0.0});
  check_amp(c, eve_label(1), 5e-8, 0.0, 0.0);

  const StateVector n =
      build_state({{3.0, bob_label(0, 1)}, {4.0, bob_label(1, 0)}}).normalized();
  CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
  check_amp(n, bob_label(0, 1), 0.6);
  check_amp(n, bob_label(1, 0), 0.8);

  CHECK_THROWS_AS(StateVector{}.normalized(), ContractViolation);
}

TEST_CASE("single-photon mode change matches the beamsplitter convention") {
  // |0>-mode photon maps to (|+> + |->)/sqrt(2): both Hadamard labels positive.
  const StateVector zero = build_state({{1.0, bob_label(0, 1)}});
  const StateVector zero_x = hadamard_transform(zero);
  check_amp(zero_x, bob_label(0, 1), 1.0 / kRoot2);
  check_amp(zero_x, bob_label(1, 0), 1.0 / kRoot2);

  // |1>-mode photon maps to (|+> - |->)/sqrt(2): the |->-mode label is negative.
  const StateVector one = build_state({{1.0, bob_label(1, 0)}});
  const StateVector one_x = hadamard_transform(one);
  check_amp(one_x, bob_label(0, 1), 1.0 / kRoot2);
  check_amp(one_x, bob_label(1, 0), -1.0 / kRoot2);

  // The photon in the |+> mode is a single Hadamard label.
  const StateVector plus = build_state(
      {{1.0 / kRoot2, bob_label(0, 1)}, {1.0 / kRoot2, bob_label(1, 0)}});
  const StateVector plus_x = hadamard_transform(plus);
  CHECK(plus_x.amps.size() == 1);
  check_amp(plus_x, bob_label(0, 1), 1.0);
}

TEST_CASE("two-photon mode change reproduces hand expansions") {
  // 2 photons in the |1> mode: (a_+^dag - a_-^dag)^2 / 2 on vacuum.
  const StateVector two_one = hadamard_transform(build_state({{1.0, bob_label(2, 0)}}));
  check_amp(two_one, bob_label(2, 0), 0.5);
  check_amp(two_one, bob_label(1, 1), -1.0 / kRoot2);
  check_amp(two_one, bob_label(0, 2), 0.5);

  // One photon in each mode: bunching leaves nothing in the (1,1) outcome.
  const StateVector split = hadamard_transform(build_state({{1.0, bob_label(1, 1)}}));
  check_amp(split, bob_label(2, 0), -1.0 / kRoot2);
  check_amp(split, bob_label(1, 1), 0.0);
  check_amp(split, bob_label(0, 2), 1.0 / kRoot2);
  CHECK(split.amps.size() == 2);

  const StateVector two_zero = hadamard_transform(build_state({{1.0, bob_label(0, 2)}}));
  check_amp(two_zero, bob_label(2, 0), 0.5);
  check_amp(two_zero, bob_label(1, 1), 1.0 / kRoot2);
  check_amp(two_zero, bob_label(0, 2), 0.5);
}

TEST_CASE("mode change is involutive and norm-preserving on random states") {
  std::mt19937_64 rng(20240913);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector s = random_state(rng, 2);
    const StateVector once = hadamard_transform(s);
    CHECK(std::fabs(once.norm() - 1.0) <= 1e-12);
    const StateVector twice = hadamard_transform(once);
    for (const BasisLabel& l : all_labels(2)) {
      const Complex diff = twice.amplitude(l) - s.amplitude(l);
      CHECK(std::abs(diff) <= 1e-12);
    }
  }
}

TEST_CASE("mode change leaves alice and probe slots alone") {
  const StateVector s = build_state({{1.0, label(1, 0, 0, 1, 2)}});
  const StateVector x = hadamard_transform(s);
  check_amp(x, label(1, 0, 0, 1, 2), 1.0 / kRoot2);
  check_amp(x, label(1, 0, 1, 0, 2), 1.0 / kRoot2);
}

TEST_CASE("computational measurement splits an equal superposition") {
  const StateVector plus = build_state(
      {{1.0 / kRoot2, bob_label(0, 1)}, {1.0 / kRoot2, bob_label(1, 0)}});
  const std::vector<Branch> branches = measure_enumerate(plus, Subsystem::Bob);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].outcome == std::vector<int>{0, 1});
  CHECK(branches[1].outcome == std::vector<int>{1, 0});
  for (const Branch& b : branches) {
    CHECK(b.probability == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::fabs(b.post_state.norm() - 1.0) <= 1e-14);
  }
  check_amp(branches[0].post_state, bob_label(0, 1), 1.0);
  check_amp(branches[1].post_state, bob_label(1, 0), 1.0);
}

TEST_CASE("probabilities are relative to the input norm") {
  const StateVector doubled =
      build_state({{kRoot2, bob_label(0, 1)}, {kRoot2, bob_label(1, 0)}});
  const std::vector<Branch> branches = measure_enumerate(doubled, Subsystem::Bob);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("hadamard measurement reports mode counts but returns computational posts") {
  // The |+>-mode photon is a deterministic Hadamard outcome.
  const StateVector plus = build_state(
      {{1.0 / kRoot2, bob_label(0, 1)}, {1.0 / kRoot2, bob_label(1, 0)}});
  const std::vector<Branch> sure = measure_enumerate(plus, Subsystem::Bob, Basis::Hadamard);
  REQUIRE(sure.size() == 1);
  CHECK(sure[0].outcome == std::vector<int>{0, 1});
  CHECK(sure[0].probability == doctest::Approx(1.0).epsilon(1e-14));
  check_amp(sure[0].post_state, bob_label(0, 1), 1.0 / kRoot2);
  check_amp(sure[0].post_state, bob_label(1, 0), 1.0 / kRoot2);

  // A |0>-mode photon splits evenly; each post state is the matching
  // Hadamard mode written back in computational labels.
  const StateVector zero = build_state({{1.0, bob_label(0, 1)}});
  const std::vector<Branch> split = measure_enumerate(zero, Subsystem::Bob, Basis::Hadamard);
  REQUIRE(split.size() == 2);
  CHECK(split[0].outcome == std::vector<int>{0, 1});
  CHECK(split[0].probability == doctest::Approx(0.5).epsilon(1e-14));
  check_amp(split[0].post_state, bob_label(0, 1), 1.0 / kRoot2);
  check_amp(split[0].post_state, bob_label(1, 0), 1.0 / kRoot2);
  CHECK(split[1].outcome == std::vector<int>{1, 0});
  check_amp(split[1].post_state, bob_label(0, 1), 1.0 / kRoot2);
  check_amp(split[1].post_state, bob_label(1, 0), -1.0 / kRoot2);
}

TEST_CASE("hadamard basis is bob-only and null states cannot be measured") {
  const StateVector s = build_state({{1.0, bob_label(0, 1)}});
  CHECK_THROWS_AS(measure_enumerate(s, Subsystem::Alice, Basis::Hadamard),
                  ContractViolation);
  CHECK_THROWS_AS(measure_enumerate(s, Subsystem::Eve, Basis::Hadamard),
                  ContractViolation);
  CHECK_THROWS_AS(measure_enumerate(StateVector{}, Subsystem::Bob), ContractViolation);
}

TEST_CASE("probe measurement separates probe levels") {
  const double r = 1.0 / kRoot3;
  const StateVector s = build_state(
      {{r, bob_label(0, 1, 1)}, {r, bob_label(1, 0, 1)}, {r, bob_label(0, 0, 0)}});
  const std::vector<Branch> branches = measure_enumerate(s, Subsystem::Eve);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].outcome == std::vector<int>{0});
  CHECK(branches[0].probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  check_amp(branches[0].post_state, bob_label(0, 0, 0), 1.0);
  CHECK(branches[1].outcome == std::vector<int>{1});
  CHECK(branches[1].probability == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  check_amp(branches[1].post_state, bob_label(0, 1, 1), 1.0 / kRoot2);
  check_amp(branches[1].post_state, bob_label(1, 0, 1), 1.0 / kRoot2);
}

TEST_CASE("branch probabilities always sum to one with unit-norm posts") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const StateVector s = random_state(rng, 2);
    for (Subsystem sub : {Subsystem::Alice, Subsystem::Bob, Subsystem::Eve}) {
      double total = 0.0;
      for (const Branch& b : measure_enumerate(s, sub)) {
        total += b.probability;
        CHECK(std::fabs(b.post_state.norm() - 1.0) <= 1e-12);
      }
      CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
    double total = 0.0;
    for (const Branch& b : measure_enumerate(s, Subsystem::Bob, Basis::Hadamard)) {
      total += b.probability;
      CHECK(std::fabs(b.post_state.norm() - 1.0) <= 1e-12);
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("click patterns collapse counts to threshold detections") {
  CHECK(to_click_pattern({0, 0}) == ClickPattern{false, false});
  CHECK(to_click_pattern({0, 2}) == ClickPattern{false, true});
  CHECK(to_click_pattern({1, 0}) == ClickPattern{true, false});
  CHECK(to_click_pattern({2, 1}) == ClickPattern{true, true});
  CHECK_FALSE(ClickPattern{false, false}.any());
  CHECK(ClickPattern{false, true}.any());
  CHECK_THROWS_AS(to_click_pattern({1}), ContractViolation);
  CHECK_THROWS_AS(to_click_pattern({1, 0, 0}), ContractViolation);
}

TEST_CASE("inner product is conjugate-linear in its first argument") {
  const StateVector s1 =
      build_state({{Complex{0.0, 1.0}, bob_label(0, 1)}, {0.5, bob_label(1, 0)}});
  const StateVector s2 =
      build_state({{0.5, bob_label(0, 1)}, {Complex{0.0, -0.25}, eve_label(2)}});
  const Complex forward = inner_product(s1, s2);
  const Complex backward = inner_product(s2, s1);
  CHECK(std::abs(forward - std::conj(backward)) <= 1e-15);
  CHECK(forward.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(forward.imag() == doctest::Approx(-0.5).epsilon(1e-15));

  CHECK(std::abs(inner_product(build_state({{1.0, bob_label(0, 1)}}),
                               build_state({{1.0, bob_label(1, 0)}}))) == 0.0);
  const double self = inner_product(s1, s1).real();
  CHECK(self == doctest::Approx(s1.norm_sq()).epsilon(1e-15));
}

TEST_CASE("serialization lists labels in order with 17 significant digits") {
  const StateVector s = build_state(
      {{1.0 / kRoot2, bob_label(1, 0)}, {-1.0 / kRoot2, bob_label(0, 1)}});
  char amp[40];
  std::snprintf(amp, sizeof(amp), "%.17g", 1.0 / kRoot2);
  const std::string expected = "(0,0,0,1,0) -" + std::string(amp) + " 0\n" +
                               "(0,0,1,0,0) " + std::string(amp) + " 0\n";
  CHECK(s.serialize() == expected);
  CHECK(StateVector{}.serialize().empty());
}
