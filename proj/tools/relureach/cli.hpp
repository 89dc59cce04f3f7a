/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "relureach/milp.hpp"

namespace relureach::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitReachable = 3;
inline constexpr int kExitDisagreement = 4;

struct InputDigest
{
    std::string source;   // path, or "<inline>"
    std::string sha256;
};

struct StageTimings
{
    double parse_ms = 0.0;
    double bounds_ms = 0.0;
    double encode_ms = 0.0;
    double search_ms = 0.0;
    double validate_ms = 0.0;
    double total_ms = 0.0;
};

struct ProblemCounts
{
    std::size_t continuous = 0;
    std::size_t binary = 0;
    std::size_t constraints = 0;
};

/// Everything needed to audit or reproduce one verify run.
struct RunReport
{
    std::string version;
    InputDigest network;
    InputDigest property;
    std::string mode;
    double eps_budget = 0.0;
    std::optional<double> big_m;
    double timeout_seconds = 0.0;
    std::size_t node_cap = 0;
    std::uint64_t seed = 0;
    bool negate_output = false;

    VerdictKind verdict = VerdictKind::Inconclusive;
    std::string reason;
    std::optional<std::vector<double>> witness;
    std::optional<std::vector<double>> output;
    std::optional<double> eps_sum;
    ProblemCounts counts;
    SearchStats search;
    StageTimings timings;
};

std::string report_to_json(const RunReport & report);
std::string report_to_text(const RunReport & report);

/// Lower-case hex SHA-256 of data.
std::string sha256_hex(std::string_view data);

std::string_view version() noexcept;

/// Runs the command line (args excludes the program name) and returns the
/// process exit status.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

} // namespace relureach::cli
