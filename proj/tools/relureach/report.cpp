/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace relureach::cli {

using json = nlohmann::ordered_json;

std::string_view version() noexcept { return RELUREACH_VERSION; }

std::string sha256_hex(std::string_view data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

namespace {

template <typename T>
json optional_json(const std::optional<T> & v)
{
    return v ? json(*v) : json(nullptr);
}

std::string join(const std::vector<double> & v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

} // namespace

std::string report_to_json(const RunReport & r)
{
    json j;
    j["tool"] = "relureach";
    j["version"] = r.version;
    j["inputs"] = {{"network", {{"source", r.network.source}, {"sha256", r.network.sha256}}},
                   {"property", {{"source", r.property.source}, {"sha256", r.property.sha256}}}};
    j["settings"] = {{"mode", r.mode},
                     {"eps_budget", r.eps_budget},
                     {"big_m", r.big_m ? json(*r.big_m) : json("auto")},
                     {"timeout_seconds", r.timeout_seconds},
                     {"node_cap", r.node_cap},
                     {"seed", r.seed},
                     {"negate_output", r.negate_output}};
    j["verdict"] = std::string(to_string(r.verdict));
    j["reason"] = r.reason;
    j["witness"] = optional_json(r.witness);
    j["output"] = optional_json(r.output);
    j["eps_sum"] = optional_json(r.eps_sum);
    j["counts"] = {{"continuous", r.counts.continuous},
                   {"binary", r.counts.binary},
                   {"constraints", r.counts.constraints}};
    j["search"] = {{"nodes", r.search.nodes},
                   {"lp_solves", r.search.lp_solves},
                   {"pruned", r.search.pruned},
                   {"max_depth", r.search.max_depth},
                   {"numerical_failures", r.search.numerical_failures}};
    j["timings_ms"] = {{"parse", r.timings.parse_ms},       {"bounds", r.timings.bounds_ms},
                       {"encode", r.timings.encode_ms},     {"search", r.timings.search_ms},
                       {"validate", r.timings.validate_ms}, {"total", r.timings.total_ms}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const RunReport & r)
{
    std::ostringstream os;
    os << "verdict: " << to_string(r.verdict) << "\n";
    if (!r.reason.empty()) os << "reason: " << r.reason << "\n";
    if (r.witness) os << "witness: " << join(*r.witness) << "\n";
    if (r.output) os << "output: " << join(*r.output) << "\n";
    if (r.eps_sum) os << "eps_sum: " << format_double(*r.eps_sum) << "\n";
    os << "variables: " << r.counts.continuous << " continuous, " << r.counts.binary << " binary\n";
    os << "constraints: " << r.counts.constraints << "\n";
    os << "mode: " << r.mode;
    if (r.mode == "epsilon") os << " (budget " << format_double(r.eps_budget) << ")";
    os << "\n";
    os << "search: " << r.search.nodes << " nodes, " << r.search.lp_solves << " LP solves, "
       << r.search.pruned << " pruned, depth " << r.search.max_depth << "\n";
    char time[32];
    std::snprintf(time, sizeof time, "%.3f", r.timings.total_ms / 1000.0);
    os << "time: " << time << " s\n";
    return os.str();
}

} // namespace relureach::cli
