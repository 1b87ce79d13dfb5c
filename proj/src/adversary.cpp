#include "mirrorsim/adversary.hpp"

#include <cmath>
#include <complex>

namespace mirrorsim {

namespace {

/// Amplitude weight tolerated outside a sparse unitary's domain before
/// application refuses the input.
constexpr double kOffDomainWeight = 1e-18;

}  // namespace

std::string to_string(Attack attack) {
  switch (attack) {
    case Attack::None: return "none";
    case Attack::Full: return "full";
    case Attack::Weaker: return "weaker";
  }
  throw ContractViolation("unreachable attack kind");
}

Attack parse_attack(const std::string& text) {
  if (text == "none") return Attack::None;
  if (text == "full") return Attack::Full;
  if (text == "weaker") return Attack::Weaker;
  throw std::invalid_argument("unknown attack: " + text);
}

double kappa_of(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  const double e2 = epsilon * epsilon;
  return std::sqrt((1.0 - e2) / (3.0 - 2.0 * e2));
}

WeakerParams weaker_params(double epsilon) {
  WeakerParams p;
  p.epsilon = epsilon;
  p.kappa = kappa_of(epsilon);
  const double k2 = p.kappa * p.kappa;
  const double e2 = epsilon * epsilon;
  p.s = std::sqrt(std::max(0.0, 1.0 - k2 - e2));
  p.t = std::sqrt(std::max(0.0, 1.0 - 2.0 * k2));
  p.b = p.t / std::sqrt(2.0);
  p.a = p.s + p.b;
  return p;
}

ClosedFormRates closed_form_rates(double epsilon) {
  const double k2 = std::pow(kappa_of(epsilon), 2);
  const double e2 = epsilon * epsilon;
  ClosedFormRates r;
  r.eve_accuracy = k2 / (e2 + k2);
  r.ctrl_loss = 1.0 - 2.0 * e2 / 3.0;
  r.swap_loss = 1.0 - (e2 + k2) / 2.0;
  return r;
}

double epsilon_star() { return std::sqrt((3.0 - std::sqrt(3.0)) / 2.0); }

StateVector stage1_state(int cap) {
  const double r = 1.0 / std::sqrt(3.0);
  return build_state(
      {{r, bob_label(0, 1, 1)}, {r, bob_label(1, 0, 1)}, {r, bob_label(0, 0, 0)}},
      cap);
}

namespace {

UnitarySpec build_attack(const WeakerParams& p, std::string name, int cap) {
  const double root_half = 1.0 / std::sqrt(2.0);
  UnitarySpec spec;
  spec.name = std::move(name);
  spec.cap = cap;
  spec.columns[bob_label(0, 1, 1)] =
      build_state({{p.epsilon, bob_label(0, 1, 2)},
                   {-p.kappa, bob_label(1, 0, 1)},
                   {p.s, bob_label(0, 0, 0)}},
                  cap)
          .canonical();
  spec.columns[bob_label(1, 0, 1)] =
      build_state({{-p.kappa, bob_label(0, 1, 0)},
                   {p.epsilon, bob_label(1, 0, 2)},
                   {p.s, bob_label(0, 0, 1)}},
                  cap)
          .canonical();
  spec.columns[bob_label(0, 0, 0)] =
      build_state({{p.kappa, bob_label(0, 1, 0)},
                   {p.kappa, bob_label(1, 0, 1)},
                   {p.t * root_half, bob_label(0, 0, 0)},
                   {p.t * root_half, bob_label(0, 0, 1)}},
                  cap)
          .canonical();
  spec.columns[bob_label(0, 0, 1)] =
      build_state({{1.0, bob_label(0, 0, 2)}}, cap).canonical();
  return spec;
}

}  // namespace

UnitarySpec build_full_attack(int cap) {
  // The epsilon-0 constants written out: kappa = t = 1/sqrt(3),
  // s = sqrt(2/3).
  WeakerParams p;
  p.epsilon = 0.0;
  p.kappa = 1.0 / std::sqrt(3.0);
  p.s = std::sqrt(2.0 / 3.0);
  p.t = 1.0 / std::sqrt(3.0);
  p.b = p.t / std::sqrt(2.0);
  p.a = p.s + p.b;
  return build_attack(p, "full", cap);
}

UnitarySpec build_weaker_attack(double epsilon, int cap) {
  return build_attack(weaker_params(epsilon), "weaker", cap);
}

StateVector apply_attack_stage(const UnitarySpec& spec, const StateVector& state) {
  StateVector out;
  out.cap = state.cap;
  double off_domain = 0.0;
  for (const auto& [label, amp] : state.amps) {
    auto it = spec.columns.find(bob_label(label.b1, label.b0, label.e));
    if (it == spec.columns.end()) {
      off_domain += std::norm(amp);
      continue;
    }
    for (const auto& [target, coeff] : it->second.amps) {
      BasisLabel mapped = target;
      mapped.a1 = label.a1;
      mapped.a0 = label.a0;
      if (!mapped.fits(state.cap)) {
        throw TruncationError("attack output label " + mapped.to_string() +
                              " exceeds photon cap " + std::to_string(state.cap));
      }
      out.amps[mapped] += amp * coeff;
    }
  }
  if (off_domain > kOffDomainWeight) {
    throw ContractViolation("input weight " + std::to_string(off_domain) +
                            " lies outside the domain of unitary '" + spec.name +
                            "'");
  }
  return out.canonical();
}

namespace {

std::vector<BasisLabel> channel_probe_basis(int cap) {
  std::vector<BasisLabel> labels;
  for (int b1 = 0; b1 <= cap; ++b1) {
    for (int b0 = 0; b1 + b0 <= cap; ++b0) {
      for (int e = 0; e < kEveLevels; ++e) labels.push_back(bob_label(b1, b0, e));
    }
  }
  return labels;
}

using Column = std::vector<Complex>;

Complex dot(const Column& x, const Column& y) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double norm_of(const Column& x) { return std::sqrt(dot(x, x).real()); }

}  // namespace

UnitaryReport verify_unitary(const UnitarySpec& spec, double tolerance) {
  const auto basis = channel_probe_basis(spec.cap);
  std::map<BasisLabel, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

  UnitaryReport rep;
  rep.dimension = basis.size();
  rep.specified = spec.columns.size();
  rep.tolerance = tolerance;

  std::vector<Column> cols;
  for (const auto& [domain, image] : spec.columns) {
    if (domain.a1 != 0 || domain.a0 != 0 || !index.count(domain)) {
      throw ContractViolation("unitary '" + spec.name + "' domain label " +
                              domain.to_string() +
                              " is not a channel+probe label at cap " +
                              std::to_string(spec.cap));
    }
    Column c(basis.size(), Complex{0.0, 0.0});
    for (const auto& [label, amp] : image.amps) {
      auto it = index.find(label);
      if (it == index.end()) {
        throw ContractViolation("unitary '" + spec.name + "' image label " +
                                label.to_string() +
                                " is not a channel+probe label at cap " +
                                std::to_string(spec.cap));
      }
      c[it->second] = amp;
    }
    cols.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i; j < cols.size(); ++j) {
      const Complex g = dot(cols[i], cols[j]);
      const double target = i == j ? 1.0 : 0.0;
      rep.gram_defect = std::max(rep.gram_defect, std::abs(g - target));
    }
  }

  // Fill the remaining columns from canonical basis vectors, orthogonalized
  // twice against everything accepted so far. Candidate order is fixed, so
  // the completion is deterministic.
  for (std::size_t k = 0; k < basis.size() && cols.size() < basis.size(); ++k) {
    Column v(basis.size(), Complex{0.0, 0.0});
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) {
        const Complex overlap = dot(c, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= overlap * c[i];
      }
    }
    const double n = norm_of(v);
    if (n < 0.5) continue;
    for (auto& x : v) x /= n;
    cols.push_back(std::move(v));
  }

  // Any shortfall leaves zero columns behind, which the defect then counts.
  cols.resize(basis.size(), Column(basis.size(), Complex{0.0, 0.0}));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i; j < cols.size(); ++j) {
      const Complex g = dot(cols[i], cols[j]);
      const double target = i == j ? 1.0 : 0.0;
      rep.completion_defect = std::max(rep.completion_defect, std::abs(g - target));
    }
  }

  rep.ok = rep.gram_defect <= tolerance && rep.completion_defect <= tolerance;
  return rep;
}

}  // namespace mirrorsim
