/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "relureach/encoder.hpp"
#include "test_support.hpp"

using namespace relureach;
using nlohmann::json;

namespace {

const std::string kFixtures = RELUREACH_FIXTURES;

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string & name) { return kFixtures + "/" + name; }

} // namespace

TEST_CASE("verify: absolute value fixtures")
{
    const Result r = run({"verify", "--network", fixture("abs_net.json"), "--property", fixture("abs_reach.prop")});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("verdict: reachable") != std::string::npos);

    CHECK(run({"verify", "--network", fixture("abs_net.json"), "--property", fixture("abs_reach.prop"),
               "--fail-on-reachable"})
              .code
          == cli::kExitReachable);

    const Result high = run({"verify", "--network", fixture("abs_net.json"), "--property", fixture("abs_high.prop"),
                             "--fail-on-reachable"});
    CHECK(high.code == cli::kExitOk);
    CHECK(high.out.find("verdict: unreachable") != std::string::npos);
}

TEST_CASE("verify: JSON report carries every field")
{
    const Result r = run({"verify", "--network", fixture("abs_net.json"), "--property", fixture("abs_reach.prop"),
                          "--json", "--seed", "7"});
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    for (const char * key : {"tool", "version", "inputs", "settings", "verdict", "reason", "witness", "output",
                             "eps_sum", "counts", "search", "timings_ms"})
        CHECK(j.contains(key));
    CHECK(j["verdict"] == "reachable");
    CHECK(j["counts"]["binary"] == 2);
    CHECK(j["counts"]["continuous"] == 7);
    CHECK(j["counts"]["constraints"] == 14);
    CHECK(j["eps_sum"].get<double>() <= 1e-6);
    CHECK(j["settings"]["seed"] == 7);
    CHECK(j["inputs"]["network"]["sha256"].get<std::string>().size() == 64);
    for (const char * stage : {"parse", "bounds", "encode", "search", "validate", "total"})
        CHECK(j["timings_ms"].contains(stage));
    CHECK(std::abs(j["witness"][0].get<double>()) >= 0.5);

    const Result again = run({"verify", "--network", fixture("abs_net.json"), "--property",
                              fixture("abs_reach.prop"), "--json", "--seed", "7"});
    const json k = json::parse(again.out);
    CHECK(k["verdict"] == j["verdict"]);
    CHECK(k["witness"] == j["witness"]);
    CHECK(k["inputs"] == j["inputs"]);
}

TEST_CASE("verify: presets and options")
{
    const std::string net = fixture("abs_net.json"), prop = fixture("abs_reach.prop");
    {
        const json j = json::parse(run({"verify", "--network", net, "--property", prop, "--json",
                                        "--binary-input-tolerance"}).out);
        CHECK(j["settings"]["eps_budget"] == 1e-4);
    }
    {
        const json j = json::parse(run({"verify", "--network", net, "--property", prop, "--json", "--exact"}).out);
        CHECK(j["settings"]["mode"] == "exact");
        CHECK(j["counts"]["continuous"] == 4);
    }
    {
        const json j = json::parse(run({"verify", "--network", net, "--property", prop, "--json", "--big-m", "10"}).out);
        CHECK(j["settings"]["big_m"] == 10.0);
        CHECK(j["verdict"] == "reachable");
    }
    CHECK(run({"verify", "--network", net, "--property", prop, "--big-m", "0.5"}).code == cli::kExitError);
    CHECK(run({"verify", "--network", net, "--property", prop, "--big-m", "lots"}).code == cli::kExitError);
    {
        // Searching the complement of out[0] <= 0.25, i.e. out[0] >= 0.25.
        const json j = json::parse(run({"verify", "--network", net, "--property",
                                        "in[0] >= -1\nin[0] <= 1\nout[0] <= 0.25", "--negate-output", "--json"})
                                       .out);
        CHECK(j["verdict"] == "reachable");
        CHECK(j["output"][0].get<double>() >= 0.25 - 1e-5);
        CHECK(j["inputs"]["property"]["source"] == "<inline>");
    }
    CHECK(run({"verify", "--network", net, "--property", fixture("abs_reach.prop"), "--negate-output"}).code
          == cli::kExitOk);
    CHECK(run({"verify", "--network", net, "--property", "in[0] >= -1\nout[0] = 0", "--negate-output"}).code
          == cli::kExitError);
}

TEST_CASE("verify: errors exit with status 2")
{
    const Result missing = run({"verify", "--network", fixture("missing.json"), "--property", fixture("abs_reach.prop")});
    CHECK(missing.code == cli::kExitError);
    CHECK(missing.err.find("error:") != std::string::npos);

    const std::string bad = testing::scratch_path("bad_net.json");
    std::ofstream(bad) << "{\"input_dim\": 1, \"layers\": [{\"weights\": [[1, 2]], \"bias\": [0]}]}";
    CHECK(run({"verify", "--network", bad, "--property", fixture("abs_reach.prop")}).code == cli::kExitError);

    const Result prop = run({"verify", "--network", fixture("abs_net.json"), "--property", "in[0] + out[0] <= 1"});
    CHECK(prop.code == cli::kExitError);
    CHECK(run({"verify"}).code == cli::kExitError);
    CHECK(run({}).code == cli::kExitError);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("eval examples")
{
    const Result id = run({"eval", "--network", fixture("identity_net.json"), "--input", "1,-1"});
    CHECK(id.code == cli::kExitOk);
    CHECK(id.out == "1 0\n");
    const Result abs = run({"eval", "--network", fixture("abs_net.json"), "--input", "-3"});
    CHECK(abs.out == "3\n");
    const Result wrong = run({"eval", "--network", fixture("abs_net.json"), "--input", "1,2"});
    CHECK(wrong.code == cli::kExitError);
    CHECK(wrong.err.find("dimension") != std::string::npos);
    const Result as_json = run({"eval", "--network", fixture("abs_net.json"), "--input", "0.1", "--json"});
    CHECK(json::parse(as_json.out)["output"][0] == 0.1);
}

TEST_CASE("export writes a readable LP file")
{
    const std::string path = testing::scratch_path("abs.lp");
    const Result r = run({"export", "--network", fixture("abs_net.json"), "--property", fixture("abs_reach.prop"),
                          "--output", path});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("2 binary") != std::string::npos);
    std::ifstream in(path);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const EncodedProblem p = parse_lp_file(text);
    CHECK(p.binary_count() == 2);
    CHECK(p.rows.size() == 14);
}

TEST_CASE("check: agreement and determinism")
{
    for (const char * prop : {"abs_reach.prop", "abs_high.prop", "abs_negative.prop"}) {
        const Result r = run({"check", "--network", fixture("abs_net.json"), "--property", fixture(prop), "--json",
                              "--seed", "11", "--samples", "500"});
        CHECK(r.code == cli::kExitOk);
        const json j = json::parse(r.out);
        CHECK(j["agreement"] == true);
        CHECK(j["milp"]["verdict"] == j["enumeration"]["verdict"]);
        const Result again = run({"check", "--network", fixture("abs_net.json"), "--property", fixture(prop), "--json",
                                  "--seed", "11", "--samples", "500"});
        CHECK(again.out == r.out);
    }
}

TEST_CASE("check: enumeration is skipped above the cap")
{
    const std::string net = testing::scratch_path("wide_net.json");
    save_network(testing::identity_relu_net(26), net);
    std::string prop;
    for (int i = 0; i < 26; ++i) prop += "in[" + std::to_string(i) + "] >= -1\nin[" + std::to_string(i) + "] <= 1\n";
    prop += "out[0] >= 0.5\n";
    const Result r = run({"check", "--network", net, "--property", prop, "--json", "--samples", "200"});
    INFO(r.err);
    CHECK(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["enumeration"]["verdict"].is_null());
    CHECK(j["sampling"]["drawn"].get<int>() > 0);
}

TEST_CASE("verify: the 4-16-16-16-2 fixture")
{
    const Result r = run({"verify", "--network", fixture("net_4x16x16x16x2.json"), "--property",
                          fixture("ipcp_margin.prop"), "--json", "--timeout", "60"});
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["counts"]["binary"].get<int>() <= 48);
    CHECK(j["verdict"] != "inconclusive");
}
