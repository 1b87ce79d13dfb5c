#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mirrorsim/fock.hpp"

namespace mirrorsim {

enum class Attack { None, Full, Weaker };

std::string to_string(Attack attack);
Attack parse_attack(const std::string& text);

/// The weaker attack's free parameter epsilon fixes every other constant:
///   kappa^2 = (1 - eps^2) / (3 - 2 eps^2)
///   s^2     = 1 - kappa^2 - eps^2
///   t^2     = 1 - 2 kappa^2
///   a       = s + t/sqrt(2),  b = t/sqrt(2)
/// All are real for eps in [0, 1]; s*t/sqrt(2) == kappa^2 keeps the attack
/// columns orthonormal.
struct WeakerParams {
  double epsilon = 0.0;
  double kappa = 0.0;
  double s = 0.0;
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
};

double kappa_of(double epsilon);
WeakerParams weaker_params(double epsilon);

/// Loss and information rates implied by the attack parameter:
///   eve_accuracy = kappa^2 / (eps^2 + kappa^2)
///   ctrl_loss    = 1 - 2 eps^2 / 3
///   swap_loss    = 1 - (eps^2 + kappa^2) / 2
struct ClosedFormRates {
  double eve_accuracy = 0.0;
  double ctrl_loss = 0.0;
  double swap_loss = 0.0;
};

ClosedFormRates closed_form_rates(double epsilon);

/// The unique epsilon in [0,1] where ctrl and swap losses coincide:
/// sqrt((3 - sqrt(3)) / 2).
double epsilon_star();

/// What Eve injects toward Alice in place of Bob's photon: an equal
/// superposition of "photon in either mode, probe |1>" and "vacuum,
/// probe |0>".
StateVector stage1_state(int cap = kDefaultPhotonCap);

/// A unitary on the Bob+probe subsystem given by its action on a few
/// domain labels (Alice's slots must be idle in both keys and columns).
/// Runtime application rejects inputs with weight outside the specified
/// domain; completion to the full space happens only inside
/// verify_unitary.
struct UnitarySpec {
  std::string name;
  int cap = kDefaultPhotonCap;
  std::map<BasisLabel, StateVector> columns;
};

/// The interception unitary giving Eve the key bit of every kept round
/// at the price of making every retained-photon round lossy.
UnitarySpec build_full_attack(int cap = kDefaultPhotonCap);

/// The tunable variant: epsilon trades information for stealth. At
/// epsilon 0 it coincides with the full attack column by column.
UnitarySpec build_weaker_attack(double epsilon, int cap = kDefaultPhotonCap);

/// Apply the unitary to the full register, acting as identity on Alice's
/// slots. Throws ContractViolation if the input carries more than
/// numerical dust outside the specified domain, TruncationError if an
/// output label would exceed the cap.
StateVector apply_attack_stage(const UnitarySpec& spec, const StateVector& state);

struct UnitaryReport {
  bool ok = false;
  std::size_t dimension = 0;       ///< Bob+probe label count at this cap
  std::size_t specified = 0;       ///< columns given explicitly
  double gram_defect = 0.0;        ///< specified columns vs orthonormality
  double completion_defect = 0.0;  ///< completed matrix U*U vs identity
  double tolerance = 0.0;
};

/// Check the specified columns are orthonormal and extendable to a full
/// unitary: completes them deterministically against the canonical basis
/// and measures how far U*U sits from the identity.
UnitaryReport verify_unitary(const UnitarySpec& spec, double tolerance = 1e-12);

}  // namespace mirrorsim
