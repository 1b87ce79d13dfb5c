#pragma once

#include <array>
#include <compare>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mirrorsim {

using Complex = std::complex<double>;

/// Thrown when an operation is handed a state or argument that violates
/// its contract (rather than a recoverable input-validation failure).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown by state constructors when a label does not fit the photon cap.
class TruncationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Subsystem { Alice, Bob, Eve };
enum class Basis { Computational, Hadamard };

inline constexpr int kEveLevels = 3;
inline constexpr int kDefaultPhotonCap = 2;

/// Amplitudes with squared magnitude below this are dropped when a state
/// is canonicalized. Never applied mid-computation.
inline constexpr double kPruneThresholdSq = 1e-15;

/// Occupation label for the full register: Alice's ancilla pair, Bob's
/// channel pair, and Eve's three-level probe. Slot order within a pair is
/// (|1>-mode count, |0>-mode count); in the Hadamard mode basis the same
/// slots read (|->-mode count, |+>-mode count).
///
/// The photon cap bounds the total photon number over the four photonic
/// slots, so the label set is closed under both the mode swaps used by
/// Alice's operations and the Hadamard mode transform (each preserves the
/// total photon number).
struct BasisLabel {
  std::uint8_t a1 = 0;
  std::uint8_t a0 = 0;
  std::uint8_t b1 = 0;
  std::uint8_t b0 = 0;
  std::uint8_t e = 0;

  auto operator<=>(const BasisLabel&) const = default;

  int total_photons() const { return a1 + a0 + b1 + b0; }
  bool fits(int cap) const { return total_photons() <= cap && e < kEveLevels; }

  std::array<int, 2> alice_counts() const { return {a1, a0}; }
  std::array<int, 2> bob_counts() const { return {b1, b0}; }

  std::string to_string() const;
};

/// Convenience constructors for the common "everything else is idle" kets.
BasisLabel bob_label(int b1, int b0, int e = 0);
BasisLabel eve_label(int e);

/// Complex amplitudes over the truncated occupation basis. Values are
/// immutable once built; every operation returns a fresh state.
struct StateVector {
  std::map<BasisLabel, Complex> amps;
  int cap = kDefaultPhotonCap;

  double norm_sq() const;
  double norm() const;

  Complex amplitude(const BasisLabel& label) const;

  /// Copy with near-zero amplitudes pruned (see kPruneThresholdSq).
  StateVector canonical() const;

  /// Copy scaled to unit norm. Throws ContractViolation on a null state.
  StateVector normalized() const;

  bool empty() const { return amps.empty(); }

  /// Canonical textual form: one "(a1,a0,b1,b0,e) re im" line per label,
  /// labels in lexicographic order. Used by the CLI and golden tests.
  std::string serialize() const;
};

/// Threshold-detector view of a two-mode occupation outcome: a detector
/// only reports whether its mode holds one photon or more.
struct ClickPattern {
  bool first = false;   ///< |1>-mode detector (|->-mode under Hadamard)
  bool second = false;  ///< |0>-mode detector (|+>-mode under Hadamard)

  auto operator<=>(const ClickPattern&) const = default;

  bool any() const { return first || second; }
};

/// One number-resolved measurement branch: the observed occupation of the
/// measured subsystem, its probability, and the normalized post-state.
struct Branch {
  std::vector<int> outcome;
  double probability = 0.0;
  StateVector post_state;
};

/// Superposition from (amplitude, label) terms. Duplicate labels have
/// their amplitudes summed. Does not renormalize.
StateVector build_state(const std::vector<std::pair<Complex, BasisLabel>>& terms,
                        int cap = kDefaultPhotonCap);

/// Re-express Bob's channel pair between the computational and Hadamard
/// mode bases (the substitution is its own inverse, so one function serves
/// both directions). Total photon number is preserved, so the cap is never
/// exceeded.
StateVector hadamard_transform(const StateVector& state);

/// Enumerate every number-resolved outcome of measuring one subsystem.
/// Branch probabilities sum to 1 and post-states are unit-norm (Hadamard
/// post-states are mapped back to computational labels). The Hadamard
/// basis is only defined for the Bob channel.
std::vector<Branch> measure_enumerate(const StateVector& state, Subsystem subsystem,
                                      Basis basis = Basis::Computational);

/// Collapse a two-mode occupation outcome to its click pattern.
ClickPattern to_click_pattern(const std::vector<int>& outcome);

/// <s1|s2>, conjugate-linear in the first argument.
Complex inner_product(const StateVector& s1, const StateVector& s2);

}  // namespace mirrorsim
