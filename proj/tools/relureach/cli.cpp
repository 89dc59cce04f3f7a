/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relureach/oracle.hpp"
#include "relureach/pipeline.hpp"

namespace relureach::cli {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

double ms_since(Clock::time_point t)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct QueryArgs
{
    std::string network;
    std::string property;
    double tolerance = kDefaultEpsBudget;
    bool binary_input = false;
    bool exact = false;
    std::string big_m = "auto";
    double timeout = 600.0;
    std::size_t node_cap = 1'000'000;
    std::uint64_t seed = 0;
    bool json = false;
    bool negate_output = false;
};

void add_query_options(CLI::App & cmd, QueryArgs & a)
{
    cmd.add_option("--network", a.network, "Network JSON file")->required();
    cmd.add_option("--property", a.property, "Property file, or property text inline")->required();
    cmd.add_option("--tolerance", a.tolerance, "Epsilon budget t")->check(CLI::PositiveNumber);
    cmd.add_flag("--binary-input-tolerance", a.binary_input, "Use the binary-input budget preset (1e-4)");
    cmd.add_flag("--exact", a.exact, "Exact layer links, no epsilon slacks");
    cmd.add_option("--big-m", a.big_m, "auto, or one global constant");
    cmd.add_option("--timeout", a.timeout, "Search time cap in seconds")->check(CLI::PositiveNumber);
    cmd.add_option("--node-cap", a.node_cap, "Branch-and-bound node cap");
    cmd.add_option("--seed", a.seed, "Seed for randomized steps");
    cmd.add_flag("--json", a.json, "Print a JSON report");
    cmd.add_flag("--negate-output", a.negate_output,
                 "Search the complement of a single <= or >= output constraint");
}

struct Loaded
{
    Network net;
    PropertySpec spec;
    InputDigest net_digest;
    InputDigest prop_digest;
};

Loaded load_inputs(const QueryArgs & a)
{
    const std::string net_text = read_file(a.network);
    Network net = parse_network(net_text);

    std::string prop_text;
    std::string prop_source;
    std::error_code ec;
    if (std::filesystem::is_regular_file(a.property, ec)) {
        prop_text = read_file(a.property);
        prop_source = a.property;
    } else if (a.property.find('[') != std::string::npos) {
        prop_text = a.property;
        prop_source = "<inline>";
    } else {
        throw Error("property file not found: " + a.property);
    }
    PropertySpec spec = parse_property(prop_text, {net.input_dim(), net.output_dim()});

    if (a.negate_output) {
        if (spec.output_constraints.size() != 1 || spec.output_constraints[0].relation() == Relation::Equal) {
            throw Error("--negate-output needs exactly one <= or >= output constraint");
        }
        const LinConstraint & c = spec.output_constraints[0];
        const Relation flipped = c.relation() == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
        spec.output_constraints[0] = LinConstraint(Side::Output, c.terms(), flipped, c.rhs());
    }
    return {std::move(net), std::move(spec), {a.network, sha256_hex(net_text)},
            {prop_source, sha256_hex(prop_text)}};
}

EncodeOptions encode_options(const QueryArgs & a)
{
    EncodeOptions o;
    o.mode = a.exact ? EncodeMode::Exact : EncodeMode::Epsilon;
    o.eps_budget = a.binary_input ? kBinaryInputEpsBudget : a.tolerance;
    if (a.big_m != "auto") {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(a.big_m, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != a.big_m.size() || !(std::isfinite(v) && v > 0.0)) {
            throw Error("--big-m must be 'auto' or a positive number, got '" + a.big_m + "'");
        }
        o.big_m = v;
    }
    return o;
}

DecideOptions decide_options(const QueryArgs & a)
{
    DecideOptions o;
    o.limits.time_cap_seconds = a.timeout;
    o.limits.node_cap = a.node_cap;
    return o;
}

RunReport verify(const QueryArgs & a)
{
    const auto start = Clock::now();
    RunReport r;
    r.version = std::string(version());

    auto t = Clock::now();
    const Loaded in = load_inputs(a);
    r.timings.parse_ms = ms_since(t);
    r.network = in.net_digest;
    r.property = in.prop_digest;

    const EncodeOptions eo = encode_options(a);
    r.mode = std::string(to_string(eo.mode));
    r.eps_budget = eo.mode == EncodeMode::Epsilon ? eo.eps_budget : 0.0;
    r.big_m = eo.big_m;
    r.timeout_seconds = a.timeout;
    r.node_cap = a.node_cap;
    r.seed = a.seed;
    r.negate_output = a.negate_output;

    t = Clock::now();
    PreparedQuery q = prepare_bounds(in.net, in.spec);
    r.timings.bounds_ms = ms_since(t);

    t = Clock::now();
    encode_query(q, in.net, in.spec, eo);
    r.timings.encode_ms = ms_since(t);
    r.counts = {q.problem.continuous_count(), q.problem.binary_count(), q.problem.rows.size()};

    t = Clock::now();
    const Verdict v = decide(q.problem, in.net, in.spec, decide_options(a));
    r.timings.search_ms = ms_since(t);
    r.verdict = v.kind;
    r.reason = v.reason;
    r.search = v.stats;

    if (v.kind == VerdictKind::Reachable) {
        t = Clock::now();
        const WitnessReport w = validate_witness(in.net, in.spec, *v.witness, 0.0, DecideOptions{}.report_tol);
        r.timings.validate_ms = ms_since(t);
        if (!w.valid) {
            // decide() only returns validated witnesses; refuse to report otherwise.
            r.verdict = VerdictKind::Inconclusive;
            r.reason = "witness failed the final replay check";
        } else {
            r.witness = v.witness->to_vector();
            r.output = w.output->to_vector();
            r.eps_sum = v.eps_sum;
        }
    }
    r.timings.total_ms = ms_since(start);
    return r;
}

std::vector<double> parse_vector(const std::string & text)
{
    std::string s = text;
    for (char & c : s)
        if (c == ',' || c == '(' || c == ')' || c == '[' || c == ']') c = ' ';
    std::istringstream is(s);
    std::vector<double> v;
    std::string tok;
    while (is >> tok) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != tok.size()) throw Error("not a number in --input: '" + tok + "'");
        v.push_back(x);
    }
    if (v.empty()) throw Error("--input is empty");
    return v;
}

std::string format_vector(std::span<const double> v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

int cmd_verify(const QueryArgs & a, bool fail_on_reachable, std::ostream & out)
{
    const RunReport r = verify(a);
    out << (a.json ? report_to_json(r) : report_to_text(r));
    if (fail_on_reachable && r.verdict == VerdictKind::Reachable) return kExitReachable;
    return kExitOk;
}

int cmd_export(const QueryArgs & a, const std::string & path, std::ostream & out)
{
    const Loaded in = load_inputs(a);
    const PreparedQuery q = prepare_query(in.net, in.spec, encode_options(a));
    const std::string text = export_lp_file(q.problem);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) throw Error("cannot write " + path);
    if (a.json) {
        json j{{"output", path},
               {"continuous", q.problem.continuous_count()},
               {"binary", q.problem.binary_count()},
               {"constraints", q.problem.rows.size()}};
        out << j.dump(2) << "\n";
    } else {
        out << "wrote " << path << "\n"
            << "variables: " << q.problem.continuous_count() << " continuous, " << q.problem.binary_count()
            << " binary\n"
            << "constraints: " << q.problem.rows.size() << "\n";
    }
    return kExitOk;
}

int cmd_eval(const std::string & network, const std::string & input, bool as_json, std::ostream & out)
{
    const Network net = load_network(network);
    const Vec y = forward(net, Vec(parse_vector(input)));
    if (as_json) {
        out << json{{"output", y.to_vector()}}.dump() << "\n";
    } else {
        out << format_vector(y.values()) << "\n";
    }
    return kExitOk;
}

struct CheckOutcome
{
    Verdict milp;
    std::optional<Verdict> oracle;
    std::string oracle_note;
    SampleResult sampling;
    bool agree = true;
    bool boundary = false;
    std::string note;
};

// Verdict of decide() under a different epsilon budget.
VerdictKind decide_with_budget(const Loaded & in, const QueryArgs & a, double budget)
{
    EncodeOptions eo = encode_options(a);
    eo.mode = EncodeMode::Epsilon;
    eo.eps_budget = budget;
    const PreparedQuery q = prepare_query(in.net, in.spec, eo);
    return decide(q.problem, in.net, in.spec, decide_options(a)).kind;
}

int cmd_check(const QueryArgs & a, std::size_t samples, std::ostream & out)
{
    const Loaded in = load_inputs(a);
    const EncodeOptions eo = encode_options(a);
    const PreparedQuery q = prepare_query(in.net, in.spec, eo);

    CheckOutcome c;
    c.milp = decide(q.problem, in.net, in.spec, decide_options(a));
    const std::size_t unstable = unstable_relu_count(q.bounds);
    if (unstable <= kOracleMaxUnstable) {
        c.oracle = enumerate_decide(in.net, in.spec, q.bounds);
    } else {
        c.oracle_note = "skipped: " + std::to_string(unstable) + " unstable neurons exceed the cap of "
                        + std::to_string(kOracleMaxUnstable);
    }
    if (q.box.is_finite()) {
        c.sampling = sample_decide(in.net, in.spec, samples, a.seed);
    }

    const bool milp_done = c.milp.kind != VerdictKind::Inconclusive;
    if (c.oracle && milp_done && c.oracle->kind != VerdictKind::Inconclusive && c.oracle->kind != c.milp.kind) {
        // Within the tolerance band the verdict may legitimately depend on
        // the budget; such cases are reported, not failed.
        const double t = eo.mode == EncodeMode::Epsilon ? eo.eps_budget : kDefaultEpsBudget;
        c.boundary = decide_with_budget(in, a, 10.0 * t) != decide_with_budget(in, a, t / 10.0);
        c.agree = c.boundary;
        c.note = c.boundary ? "boundary case: the verdict changes within 10x of the epsilon budget"
                            : "branch and bound and enumeration disagree";
    }
    if (c.sampling.found && c.milp.kind != VerdictKind::Reachable) {
        c.agree = false;
        c.note = "sampling found a witness but branch and bound did not report reachable";
    }

    if (a.json) {
        json j;
        j["version"] = std::string(version());
        j["network"] = {{"source", in.net_digest.source}, {"sha256", in.net_digest.sha256}};
        j["property"] = {{"source", in.prop_digest.source}, {"sha256", in.prop_digest.sha256}};
        j["milp"] = {{"verdict", std::string(to_string(c.milp.kind))},
                     {"witness", c.milp.witness ? json(c.milp.witness->to_vector()) : json(nullptr)},
                     {"nodes", c.milp.stats.nodes}};
        if (c.oracle) {
            j["enumeration"] = {{"verdict", std::string(to_string(c.oracle->kind))},
                                {"patterns", c.oracle->stats.lp_solves}};
        } else {
            j["enumeration"] = {{"verdict", nullptr}, {"note", c.oracle_note}};
        }
        j["sampling"] = {{"found", c.sampling.found},
                         {"drawn", c.sampling.drawn},
                         {"in_input_set", c.sampling.in_input_set},
                         {"witness", c.sampling.witness ? json(c.sampling.witness->to_vector()) : json(nullptr)},
                         {"seed", a.seed}};
        j["agreement"] = c.agree;
        j["boundary"] = c.boundary;
        j["note"] = c.note;
        out << j.dump(2) << "\n";
    } else {
        out << "branch and bound: " << to_string(c.milp.kind) << "\n";
        out << "enumeration: " << (c.oracle ? std::string(to_string(c.oracle->kind)) : c.oracle_note) << "\n";
        out << "sampling: " << (c.sampling.found ? "witness found" : "no witness") << " (" << c.sampling.drawn
            << " drawn, seed " << a.seed << ")\n";
        out << "agreement: " << (c.agree ? "yes" : "no") << "\n";
        if (!c.note.empty()) out << "note: " << c.note << "\n";
    }
    return c.agree ? kExitOk : kExitDisagreement;
}

} // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Reachability checking for ReLU networks by mixed-integer linear programming"};
    app.name("relureach");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    QueryArgs verify_args, export_args, check_args;
    bool fail_on_reachable = false;
    auto * verify_cmd = app.add_subcommand("verify", "Decide whether the output set is reachable");
    add_query_options(*verify_cmd, verify_args);
    verify_cmd->add_flag("--fail-on-reachable", fail_on_reachable, "Exit with status 3 on a reachable verdict");

    std::string lp_path;
    auto * export_cmd = app.add_subcommand("export", "Write the encoded MILP as an LP file");
    add_query_options(*export_cmd, export_args);
    export_cmd->add_option("--output", lp_path, "LP file to write")->required();

    std::string eval_network, eval_input;
    bool eval_json = false;
    auto * eval_cmd = app.add_subcommand("eval", "Evaluate the network at one input");
    eval_cmd->add_option("--network", eval_network, "Network JSON file")->required();
    eval_cmd->add_option("--input", eval_input, "Input vector, comma or space separated")->required();
    eval_cmd->add_flag("--json", eval_json, "Print JSON");

    std::size_t samples = 10'000;
    auto * check_cmd = app.add_subcommand("check", "Compare branch and bound with enumeration and sampling");
    add_query_options(*check_cmd, check_args);
    check_cmd->add_option("--samples", samples, "Number of uniform samples");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError & e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*verify_cmd) return cmd_verify(verify_args, fail_on_reachable, out);
        if (*export_cmd) return cmd_export(export_args, lp_path, out);
        if (*eval_cmd) return cmd_eval(eval_network, eval_input, eval_json, out);
        if (*check_cmd) return cmd_check(check_args, samples, out);
    } catch (const std::exception & e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace relureach::cli
