#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "mirrorsim/adversary.hpp"
#include "mirrorsim/engine.hpp"
#include "mirrorsim/fock.hpp"
#include "mirrorsim/protocol.hpp"
#include "mirrorsim/stats.hpp"

namespace py = pybind11;
using namespace mirrorsim;

namespace {

std::size_t label_hash(const BasisLabel& l) {
  return (std::size_t(l.a1) << 16) ^ (std::size_t(l.a0) << 12) ^
         (std::size_t(l.b1) << 8) ^ (std::size_t(l.b0) << 4) ^ std::size_t(l.e);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact-amplitude simulator for the mirror semiquantum key distribution "
      "protocol, its simplified variant, and two photon-swap attacks on it";

  py::register_exception<ContractViolation>(m, "ContractViolation");
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);

  py::enum_<ProtocolVariant>(m, "ProtocolVariant")
      .value("Mirror", ProtocolVariant::Mirror)
      .value("Simplified", ProtocolVariant::Simplified);

  py::enum_<AliceOp>(m, "AliceOp")
      .value("Ctrl", AliceOp::Ctrl)
      .value("Swap10", AliceOp::Swap10)
      .value("Swap01", AliceOp::Swap01)
      .value("SwapAll", AliceOp::SwapAll);

  py::enum_<Basis>(m, "Basis")
      .value("Computational", Basis::Computational)
      .value("Hadamard", Basis::Hadamard);

  py::enum_<Subsystem>(m, "Subsystem")
      .value("Alice", Subsystem::Alice)
      .value("Bob", Subsystem::Bob)
      .value("Eve", Subsystem::Eve);

  py::enum_<Attack>(m, "Attack")
      .value("None_", Attack::None)
      .value("Full", Attack::Full)
      .value("Weaker", Attack::Weaker);

  py::enum_<SiftKind>(m, "SiftKind")
      .value("KeyBit", SiftKind::KeyBit)
      .value("CtrlTest", SiftKind::CtrlTest)
      .value("SwapTest", SiftKind::SwapTest)
      .value("Loss", SiftKind::Loss)
      .value("Discard", SiftKind::Discard)
      .value("Forbidden", SiftKind::Forbidden);

  py::enum_<DiscardReason>(m, "DiscardReason")
      .value("MismatchedBasis", DiscardReason::MismatchedBasis)
      .value("SwapAllClear", DiscardReason::SwapAllClear);

  py::enum_<ForbiddenReason>(m, "ForbiddenReason")
      .value("SwapAllClick", ForbiddenReason::SwapAllClick)
      .value("BothDetect", ForbiddenReason::BothDetect);

  py::class_<BasisLabel>(m, "BasisLabel")
      .def(py::init([](int a1, int a0, int b1, int b0, int e) {
             return BasisLabel{static_cast<std::uint8_t>(a1),
                               static_cast<std::uint8_t>(a0),
                               static_cast<std::uint8_t>(b1),
                               static_cast<std::uint8_t>(b0),
                               static_cast<std::uint8_t>(e)};
           }),
           py::arg("a1"), py::arg("a0"), py::arg("b1"), py::arg("b0"),
           py::arg("e") = 0)
      .def_readonly("a1", &BasisLabel::a1)
      .def_readonly("a0", &BasisLabel::a0)
      .def_readonly("b1", &BasisLabel::b1)
      .def_readonly("b0", &BasisLabel::b0)
      .def_readonly("e", &BasisLabel::e)
      .def("total_photons", &BasisLabel::total_photons)
      .def("__eq__",
           [](const BasisLabel& a, const BasisLabel& b) { return a == b; })
      .def("__lt__",
           [](const BasisLabel& a, const BasisLabel& b) { return a < b; })
      .def("__hash__", &label_hash)
      .def("__repr__", &BasisLabel::to_string);

  m.def("bob_label", &bob_label, py::arg("b1"), py::arg("b0"), py::arg("e") = 0);
  m.def("eve_label", &eve_label, py::arg("e"));

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<>())
      .def_readonly("cap", &StateVector::cap)
      .def("norm", &StateVector::norm)
      .def("norm_sq", &StateVector::norm_sq)
      .def("amplitude", &StateVector::amplitude, py::arg("label"))
      .def("canonical", &StateVector::canonical)
      .def("normalized", &StateVector::normalized)
      .def("empty", &StateVector::empty)
      .def("serialize", &StateVector::serialize)
      .def("items",
           [](const StateVector& s) {
             return std::vector<std::pair<BasisLabel, Complex>>(s.amps.begin(),
                                                                s.amps.end());
           })
      .def("__len__", [](const StateVector& s) { return s.amps.size(); })
      .def("__repr__", [](const StateVector& s) {
        return "<StateVector: " + std::to_string(s.amps.size()) +
               " terms, cap " + std::to_string(s.cap) + ">";
      });

  m.def("build_state", &build_state, py::arg("terms"),
        py::arg("cap") = kDefaultPhotonCap,
        "Superposition from (amplitude, label) terms.");

  py::class_<ClickPattern>(m, "ClickPattern")
      .def(py::init<>())
      .def_readwrite("first", &ClickPattern::first)
      .def_readwrite("second", &ClickPattern::second)
      .def("any", &ClickPattern::any)
      .def("__eq__",
           [](const ClickPattern& a, const ClickPattern& b) { return a == b; })
      .def("__repr__", [](const ClickPattern& p) {
        return std::string("<ClickPattern first=") + (p.first ? "True" : "False") +
               " second=" + (p.second ? "True" : "False") + ">";
      });

  py::class_<Branch>(m, "Branch")
      .def_readonly("outcome", &Branch::outcome)
      .def_readonly("probability", &Branch::probability)
      .def_readonly("post_state", &Branch::post_state);

  m.def("hadamard_transform", &hadamard_transform, py::arg("state"),
        "Rewrite Bob's two modes in the other basis. Involutive.");
  m.def("measure_enumerate", &measure_enumerate, py::arg("state"),
        py::arg("subsystem"), py::arg("basis") = Basis::Computational,
        "All occupation outcomes of a projective readout with their "
        "probabilities and post states.");
  m.def("to_click_pattern", &to_click_pattern, py::arg("outcome"));
  m.def("inner_product", &inner_product, py::arg("s1"), py::arg("s2"));

  py::class_<SiftOutcome>(m, "SiftOutcome")
      .def_readonly("kind", &SiftOutcome::kind)
      .def_readonly("key_bit", &SiftOutcome::key_bit)
      .def_readonly("error", &SiftOutcome::error)
      .def_readonly("discard_reason", &SiftOutcome::discard_reason)
      .def_readonly("forbidden_reason", &SiftOutcome::forbidden_reason)
      .def_static("key", &SiftOutcome::key, py::arg("bit"))
      .def_static("ctrl_test", &SiftOutcome::ctrl_test, py::arg("error"))
      .def_static("swap_test", &SiftOutcome::swap_test, py::arg("error"))
      .def_static("loss", &SiftOutcome::loss)
      .def_static("discard", &SiftOutcome::discard, py::arg("reason"))
      .def_static("forbidden", &SiftOutcome::forbidden, py::arg("reason"))
      .def("__eq__",
           [](const SiftOutcome& a, const SiftOutcome& b) { return a == b; })
      .def("__hash__",
           [](const SiftOutcome& o) {
             return (std::size_t(o.kind) << 8) ^ (std::size_t(o.key_bit + 1) << 5) ^
                    (std::size_t(o.error) << 4) ^
                    (std::size_t(o.discard_reason) << 1) ^
                    std::size_t(o.forbidden_reason);
           })
      .def("__repr__", &SiftOutcome::to_string);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def(py::init<>())
      .def_readwrite("op", &RoundRecord::op)
      .def_readwrite("alice_clicks", &RoundRecord::alice_clicks)
      .def_readwrite("bob_basis", &RoundRecord::bob_basis)
      .def_readwrite("bob_clicks", &RoundRecord::bob_clicks);

  m.def("bob_prepare", &bob_prepare, py::arg("cap") = kDefaultPhotonCap,
        "Bob's fresh channel state: a single photon in the |+> mode.");
  m.def("alice_apply", &alice_apply, py::arg("op"), py::arg("state"),
        "Alice's operation as a mode permutation.");
  m.def("sift_round", &sift_round, py::arg("variant"), py::arg("record"),
        "Classify one announced round.");

  py::class_<WeakerParams>(m, "WeakerParams")
      .def_readonly("epsilon", &WeakerParams::epsilon)
      .def_readonly("kappa", &WeakerParams::kappa)
      .def_readonly("s", &WeakerParams::s)
      .def_readonly("t", &WeakerParams::t)
      .def_readonly("a", &WeakerParams::a)
      .def_readonly("b", &WeakerParams::b);

  py::class_<ClosedFormRates>(m, "ClosedFormRates")
      .def_readonly("eve_accuracy", &ClosedFormRates::eve_accuracy)
      .def_readonly("ctrl_loss", &ClosedFormRates::ctrl_loss)
      .def_readonly("swap_loss", &ClosedFormRates::swap_loss);

  m.def("kappa_of", &kappa_of, py::arg("epsilon"));
  m.def("weaker_params", &weaker_params, py::arg("epsilon"));
  m.def("closed_form_rates", &closed_form_rates, py::arg("epsilon"));
  m.def("epsilon_star", &epsilon_star,
        "The unique parameter in [0,1] where ctrl and swap losses coincide.");
  m.def("stage1_state", &stage1_state, py::arg("cap") = kDefaultPhotonCap,
        "What Eve injects toward Alice in place of Bob's photon.");

  py::class_<UnitarySpec>(m, "UnitarySpec")
      .def_readonly("name", &UnitarySpec::name)
      .def_readonly("cap", &UnitarySpec::cap);

  py::class_<UnitaryReport>(m, "UnitaryReport")
      .def_readonly("ok", &UnitaryReport::ok)
      .def_readonly("dimension", &UnitaryReport::dimension)
      .def_readonly("specified", &UnitaryReport::specified)
      .def_readonly("gram_defect", &UnitaryReport::gram_defect)
      .def_readonly("completion_defect", &UnitaryReport::completion_defect)
      .def_readonly("tolerance", &UnitaryReport::tolerance);

  m.def("build_full_attack", &build_full_attack,
        py::arg("cap") = kDefaultPhotonCap);
  m.def("build_weaker_attack", &build_weaker_attack, py::arg("epsilon"),
        py::arg("cap") = kDefaultPhotonCap);
  m.def("apply_attack_stage", &apply_attack_stage, py::arg("spec"),
        py::arg("state"), "Eve's return-path unitary on the Bob+probe slots.");
  m.def("verify_unitary", &verify_unitary, py::arg("spec"),
        py::arg("tolerance") = 1e-12,
        "Check the specified columns extend to a unitary on the truncated "
        "space.");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("variant", &ScenarioConfig::variant)
      .def_readwrite("attack", &ScenarioConfig::attack)
      .def_readwrite("epsilon", &ScenarioConfig::epsilon)
      .def_readwrite("cap", &ScenarioConfig::cap)
      .def_readwrite("hadamard_probability", &ScenarioConfig::hadamard_probability)
      .def_readwrite("op_weights", &ScenarioConfig::op_weights)
      .def("validate", &ScenarioConfig::validate)
      .def("op_probabilities", &ScenarioConfig::op_probabilities);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("ctrl_loss_rate", &RateReport::ctrl_loss_rate)
      .def_readonly("swap10_loss_rate", &RateReport::swap10_loss_rate)
      .def_readonly("swap01_loss_rate", &RateReport::swap01_loss_rate)
      .def_readonly("swap_loss_rate", &RateReport::swap_loss_rate)
      .def_readonly("ctrl_error_rate", &RateReport::ctrl_error_rate)
      .def_readonly("swap_error_rate", &RateReport::swap_error_rate)
      .def_readonly("key_rate", &RateReport::key_rate)
      .def_readonly("forbidden_rate", &RateReport::forbidden_rate)
      .def_readonly("eve_key_agreement", &RateReport::eve_key_agreement);

  py::class_<JointOutcome>(m, "JointOutcome")
      .def_readonly("op", &JointOutcome::op)
      .def_readonly("alice_counts", &JointOutcome::alice_counts)
      .def_readonly("basis", &JointOutcome::basis)
      .def_readonly("bob_counts", &JointOutcome::bob_counts)
      .def_readonly("eve_outcome", &JointOutcome::eve_outcome)
      .def_readonly("probability", &JointOutcome::probability)
      .def_readonly("sift", &JointOutcome::sift);

  py::class_<JointDistribution>(m, "JointDistribution")
      .def_readonly("config", &JointDistribution::config)
      .def_readonly("entries", &JointDistribution::entries)
      .def("total_probability", &JointDistribution::total_probability);

  m.def("exact_distribution", &exact_distribution, py::arg("config"),
        "Enumerate every measurement history of one round with its exact "
        "probability.");
  m.def("derive_rates", &derive_rates, py::arg("distribution"));

  py::class_<Tally>(m, "Tally")
      .def_readonly("rounds", &Tally::rounds)
      .def("count_of", &Tally::count_of, py::arg("op"), py::arg("kind"))
      .def("count_outcome", &Tally::count_outcome, py::arg("outcome"))
      .def("rows", [](const Tally& t) {
        std::vector<std::tuple<AliceOp, SiftOutcome, std::optional<int>,
                               std::uint64_t>>
            rows;
        rows.reserve(t.counts.size());
        for (const auto& [key, count] : t.counts) {
          rows.emplace_back(std::get<0>(key), std::get<1>(key),
                            std::get<2>(key), count);
        }
        return rows;
      });

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("config", &SimResult::config)
      .def_readonly("rounds", &SimResult::rounds)
      .def_readonly("seed", &SimResult::seed)
      .def_readonly("workers", &SimResult::workers)
      .def_readonly("tally", &SimResult::tally)
      .def_readonly("rates", &SimResult::rates);

  m.def("simulate", &simulate, py::arg("config"), py::arg("rounds"),
        py::arg("seed"), py::arg("workers") = 1,
        "Monte Carlo over the exact branch tree; identical results for any "
        "worker count.");

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("epsilon", &SweepRow::epsilon)
      .def_readonly("kappa", &SweepRow::kappa)
      .def_readonly("closed", &SweepRow::closed)
      .def_readonly("exact_eve_accuracy", &SweepRow::exact_eve_accuracy)
      .def_readonly("exact_ctrl_loss", &SweepRow::exact_ctrl_loss)
      .def_readonly("exact_swap_loss", &SweepRow::exact_swap_loss)
      .def_readonly("max_gap", &SweepRow::max_gap);

  m.def("sweep_epsilon", &sweep_epsilon, py::arg("epsilons"),
        py::arg("cap") = kDefaultPhotonCap);

  py::class_<Interval>(m, "Interval")
      .def_readonly("low", &Interval::low)
      .def_readonly("high", &Interval::high)
      .def("contains", &Interval::contains, py::arg("p"));

  py::class_<ZTestResult>(m, "ZTestResult")
      .def_readonly("z", &ZTestResult::z)
      .def_readonly("p_value", &ZTestResult::p_value);

  py::class_<DetectionReport>(m, "DetectionReport")
      .def_readonly("config", &DetectionReport::config)
      .def_readonly("rounds", &DetectionReport::rounds)
      .def_readonly("seed", &DetectionReport::seed)
      .def_readonly("alpha", &DetectionReport::alpha)
      .def_readonly("ctrl_trials", &DetectionReport::ctrl_trials)
      .def_readonly("ctrl_losses", &DetectionReport::ctrl_losses)
      .def_readonly("swap_trials", &DetectionReport::swap_trials)
      .def_readonly("swap_losses", &DetectionReport::swap_losses)
      .def_readonly("ctrl_interval", &DetectionReport::ctrl_interval)
      .def_readonly("swap_interval", &DetectionReport::swap_interval)
      .def_readonly("loss_test", &DetectionReport::loss_test)
      .def_readonly("loss_mismatch", &DetectionReport::loss_mismatch)
      .def_readonly("error_events", &DetectionReport::error_events)
      .def_readonly("forbidden_events", &DetectionReport::forbidden_events)
      .def_readonly("detected", &DetectionReport::detected);

  m.def("detection_test", &detection_test, py::arg("config"), py::arg("rounds"),
        py::arg("seed"), py::arg("workers") = 1, py::arg("alpha") = 0.01,
        "Simulate and look for the three public signatures of tampering.");
  m.def("mirror_detectability", &mirror_detectability, py::arg("config"),
        "P(Bob sees any click | SwapAll round) in the Mirror variant.");

  m.def("wilson_interval", &wilson_interval, py::arg("successes"),
        py::arg("trials"), py::arg("z") = kZ95);
  m.def("two_proportion_test", &two_proportion_test, py::arg("successes1"),
        py::arg("trials1"), py::arg("successes2"), py::arg("trials2"));
  m.def("round2", &round2, py::arg("x"));

  m.attr("DEFAULT_PHOTON_CAP") = kDefaultPhotonCap;
  m.attr("EVE_LEVELS") = kEveLevels;
}
