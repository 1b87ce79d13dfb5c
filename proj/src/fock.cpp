#include "mirrorsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mirrorsim {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return std::round(r);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string BasisLabel::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "(%d,%d,%d,%d,%d)", int(a1), int(a0), int(b1),
                int(b0), int(e));
  return buf;
}

BasisLabel bob_label(int b1, int b0, int e) {
  BasisLabel l;
  l.b1 = static_cast<std::uint8_t>(b1);
  l.b0 = static_cast<std::uint8_t>(b0);
  l.e = static_cast<std::uint8_t>(e);
  return l;
}

BasisLabel eve_label(int e) {
  BasisLabel l;
  l.e = static_cast<std::uint8_t>(e);
  return l;
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const auto& [label, amp] : amps) s += std::norm(amp);
  return s;
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

Complex StateVector::amplitude(const BasisLabel& label) const {
  auto it = amps.find(label);
  return it == amps.end() ? Complex{0.0, 0.0} : it->second;
}

StateVector StateVector::canonical() const {
  StateVector out;
  out.cap = cap;
  for (const auto& [label, amp] : amps) {
    if (std::norm(amp) >= kPruneThresholdSq) out.amps.emplace(label, amp);
  }
  return out;
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ContractViolation("cannot normalize a null state");
  StateVector out;
  out.cap = cap;
  for (const auto& [label, amp] : amps) out.amps.emplace(label, amp / n);
  return out;
}

std::string StateVector::serialize() const {
  std::string out;
  for (const auto& [label, amp] : amps) {
    out += label.to_string();
    out += ' ';
    out += format_double(amp.real());
    out += ' ';
    out += format_double(amp.imag());
    out += '\n';
  }
  return out;
}

StateVector build_state(const std::vector<std::pair<Complex, BasisLabel>>& terms,
                        int cap) {
  if (cap < 0) throw TruncationError("photon cap must be non-negative");
  StateVector out;
  out.cap = cap;
  for (const auto& [amp, label] : terms) {
    if (!label.fits(cap)) {
      throw TruncationError("label " + label.to_string() +
                            " exceeds photon cap " + std::to_string(cap));
    }
    out.amps[label] += amp;
  }
  return out;
}

StateVector hadamard_transform(const StateVector& state) {
  // Substitute each Bob creation operator by its transformed pair and
  // re-expand. With source counts (m1,m0) and target counts (k1,k2),
  // k1+k2 = m1+m0, the coefficient is
  //   2^{-(m1+m0)/2} sum_{i+j=k2} (-1)^{m1-i} C(m1,i) C(m0,j)
  //     * sqrt(k1! k2!) / sqrt(m1! m0!)
  // which is its own inverse.
  StateVector out;
  out.cap = state.cap;
  for (const auto& [label, amp] : state.amps) {
    const int m1 = label.b1, m0 = label.b0;
    const int n = m1 + m0;
    const double scale = std::pow(0.5, 0.5 * n) / std::sqrt(factorial(m1) * factorial(m0));
    for (int k2 = 0; k2 <= n; ++k2) {
      const int k1 = n - k2;
      double c = 0.0;
      for (int i = std::max(0, k2 - m0); i <= std::min(m1, k2); ++i) {
        const int j = k2 - i;
        const double sign = ((m1 - i) % 2 == 0) ? 1.0 : -1.0;
        c += sign * binomial(m1, i) * binomial(m0, j);
      }
      if (c == 0.0) continue;
      c *= scale * std::sqrt(factorial(k1) * factorial(k2));
      BasisLabel target = label;
      target.b1 = static_cast<std::uint8_t>(k1);
      target.b0 = static_cast<std::uint8_t>(k2);
      out.amps[target] += amp * c;
    }
  }
  return out.canonical();
}

std::vector<Branch> measure_enumerate(const StateVector& state, Subsystem subsystem,
                                      Basis basis) {
  if (basis == Basis::Hadamard && subsystem != Subsystem::Bob) {
    throw ContractViolation("hadamard-basis measurement is defined only for the Bob channel");
  }
  const StateVector work =
      (basis == Basis::Hadamard ? hadamard_transform(state) : state).canonical();
  const double total = work.norm_sq();
  if (total == 0.0) throw ContractViolation("cannot measure a null state");

  std::map<std::vector<int>, StateVector> groups;
  for (const auto& [label, amp] : work.amps) {
    std::vector<int> outcome;
    switch (subsystem) {
      case Subsystem::Alice:
        outcome = {label.a1, label.a0};
        break;
      case Subsystem::Bob:
        outcome = {label.b1, label.b0};
        break;
      case Subsystem::Eve:
        outcome = {label.e};
        break;
    }
    auto [it, inserted] = groups.try_emplace(std::move(outcome));
    if (inserted) it->second.cap = work.cap;
    it->second.amps.emplace(label, amp);
  }

  std::vector<Branch> branches;
  branches.reserve(groups.size());
  for (auto& [outcome, group] : groups) {
    Branch br;
    br.outcome = outcome;
    br.probability = group.norm_sq() / total;
    br.post_state = group.normalized();
    if (basis == Basis::Hadamard) br.post_state = hadamard_transform(br.post_state);
    branches.push_back(std::move(br));
  }
  return branches;
}

ClickPattern to_click_pattern(const std::vector<int>& outcome) {
  if (outcome.size() != 2) {
    throw ContractViolation("click patterns are defined for two-mode outcomes");
  }
  return ClickPattern{outcome[0] >= 1, outcome[1] >= 1};
}

Complex inner_product(const StateVector& s1, const StateVector& s2) {
  // Iterate over the smaller map.
  const StateVector& small = s1.amps.size() <= s2.amps.size() ? s1 : s2;
  const StateVector& large = s1.amps.size() <= s2.amps.size() ? s2 : s1;
  Complex acc{0.0, 0.0};
  for (const auto& [label, amp] : small.amps) {
    auto it = large.amps.find(label);
    if (it == large.amps.end()) continue;
    const Complex& a1 = (&small == &s1) ? amp : it->second;
    const Complex& a2 = (&small == &s1) ? it->second : amp;
    acc += std::conj(a1) * a2;
  }
  return acc;
}

}  // namespace mirrorsim
