#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mirrorsim/engine.hpp"

namespace mirrorsim {

enum class OutputFormat { Json, Csv, Human };

OutputFormat parse_format(const std::string& text);

std::string render_distribution(const JointDistribution& dist, OutputFormat format);
std::string render_simulation(const SimResult& sim, OutputFormat format);
std::string render_sweep(const std::vector<SweepRow>& rows, OutputFormat format);
std::string render_detection(const DetectionReport& report, OutputFormat format);
std::string render_verification(
    const std::vector<std::pair<std::string, UnitaryReport>>& reports,
    OutputFormat format);

/// The reference document: injected state, Alice's measurement branches
/// per operation, both attacks' return states, and the rounded
/// loss/information grid over epsilon. Plain text regardless of format.
std::string render_tables(double epsilon, int cap = kDefaultPhotonCap);

}  // namespace mirrorsim
