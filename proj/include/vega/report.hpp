// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <vega/cwu_vm.hpp>
#include <vega/dnn.hpp>
#include <vega/power_modes.hpp>

namespace vega::report {

// Metadata stamped into every report (no timestamps: outputs must be
// byte-identical across runs).
struct meta {
  std::string profile = "default";
  uint64_t seed = 0;
};

// Network schedule reports. Times in ms, energies in mJ, %.6f formatting.
std::string dnn_csv(const dnn::network_report& r);
std::string dnn_json(const dnn::network_report& r, const meta& m);
std::string dnn_svg(const dnn::network_report& r);

// Duty-cycle power estimate (JSON only).
std::string power_json(const power::profile_request& req, const power::estimate& e,
                       const meta& m);

// CWU run outcome (JSON; the instruction trace streams separately as JSONL).
std::string cwu_json(const cwu::run_result& r, const meta& m);

// Parse a report CSV back into cells (comment lines skipped); round-trip
// helper for tests and downstream tooling.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);

}  // namespace vega::report
