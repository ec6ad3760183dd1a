#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "su2kam/kam_driver.hpp"

namespace kam {

using ordered_json = nlohmann::ordered_json;

/// Numbers leave the library as doubles: JSON through the shortest round-trip form,
/// CSV through %.17g. Long double runs lose their extra bits here, nowhere else.
std::string format_number(double x);

ordered_json freq_json(const std::optional<Freq>& k);

/// {step, N, K, k_r, eps0, eps_s0, normG0, normGs0, angle, warnings}; eps0/eps_s0 are the
/// norms of F after the step.
template <class Real>
ordered_json step_record(int step, const StepReport<Real>& rep);

template <class Real>
void write_trace_jsonl(const std::filesystem::path& path, const SchemeTrace<Real>& trace);

/// Same columns as the JSONL records.
template <class Real>
void write_trace_csv(const std::filesystem::path& path, const SchemeTrace<Real>& trace);

/// Run-level data and per-step diagnostics not carried by the trace lines.
template <class Real>
ordered_json trace_summary(const SchemeTrace<Real>& trace);

void write_json(const std::filesystem::path& path, const ordered_json& doc);

/// Throws ConfigError when the file is missing or a line is not a JSON object.
std::vector<ordered_json> read_trace_jsonl(const std::filesystem::path& path);

}  // namespace kam
