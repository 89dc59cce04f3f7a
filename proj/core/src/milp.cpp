/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

namespace relureach {

std::string_view to_string(VerdictKind k)
{
    switch (k) {
    case VerdictKind::Reachable: return "reachable";
    case VerdictKind::Unreachable: return "unreachable";
    case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<std::size_t> branch_select(std::span<const BinaryValue> free_binaries, double int_tol)
{
    std::optional<std::size_t> best;
    double best_frac = int_tol;
    for (std::size_t k = 0; k < free_binaries.size(); ++k) {
        const double v = free_binaries[k].value;
        const double frac = std::abs(v - std::round(v));
        if (frac <= int_tol) continue;
        const bool better = !best || frac > best_frac
                            || (frac == best_frac
                                && std::pair(free_binaries[k].ref.layer, free_binaries[k].ref.neuron)
                                       < std::pair(free_binaries[*best].ref.layer,
                                                   free_binaries[*best].ref.neuron));
        if (better) {
            best = k;
            best_frac = frac;
        }
    }
    return best;
}

WitnessReport validate_witness(const Network & net, const PropertySpec & spec, const Vec & candidate,
                               double input_tol, double output_tol)
{
    if (candidate.dim() != net.input_dim()) {
        throw DimensionError("witness", net.input_dim(), candidate.dim());
    }
    WitnessReport rep;
    rep.input_ok = true;
    for (std::size_t r = 0; r < spec.input_constraints.size(); ++r) {
        const double s = spec.input_constraints[r].slack(candidate.values());
        rep.slacks.push_back({Side::Input, r, s});
        rep.input_ok = rep.input_ok && s >= -input_tol;
    }
    const Vec y = forward(net, candidate);
    rep.output_ok = true;
    for (std::size_t r = 0; r < spec.output_constraints.size(); ++r) {
        const double s = spec.output_constraints[r].slack(y.values());
        rep.slacks.push_back({Side::Output, r, s});
        rep.output_ok = rep.output_ok && s >= -output_tol;
    }
    rep.output = y;
    rep.valid = rep.input_ok && rep.output_ok;
    return rep;
}

namespace {

using Clock = std::chrono::steady_clock;

class BranchAndBound
{
  public:
    BranchAndBound(const EncodedProblem & problem, const Network & net, const PropertySpec & spec,
                   const DecideOptions & opt)
        : problem_(problem), net_(net), spec_(spec), opt_(opt), base_(problem.relaxation()),
          binaries_(problem.binary_columns()), inputs_(problem.layer_columns(1))
    {
        if (inputs_.size() != net.input_dim()) {
            throw DimensionError("encoded input columns", net.input_dim(), inputs_.size());
        }
        if (opt_.node_tightening) link_neurons();
    }

    Verdict run()
    {
        const auto start = Clock::now();
        Verdict v = search(start);
        v.stats = stats_;
        v.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return v;
    }

  private:
    Verdict search(Clock::time_point start)
    {
        std::vector<BnbNode> stack{BnbNode{}};
        std::size_t leaf_replay_failures = 0;

        while (!stack.empty()) {
            if (stats_.nodes >= opt_.limits.node_cap) return inconclusive("node cap reached");
            const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
            if (elapsed > opt_.limits.time_cap_seconds) return inconclusive("time cap reached");

            BnbNode node = std::move(stack.back());
            stack.pop_back();
            ++stats_.nodes;
            stats_.max_depth = std::max(stats_.max_depth, node.depth());

            bool empty = false;
            const LpProblem lp = node_problem(node, &empty);
            if (empty) {
                ++stats_.pruned;
                if (opt_.on_prune) opt_.on_prune(node, lp);
                continue;
            }
            const LpSolution sol = solve_lp(lp);
            if (sol.status == LpStatus::Infeasible) {
                ++stats_.pruned;
                if (opt_.on_prune) opt_.on_prune(node, lp);
                continue;
            }
            if (sol.status != LpStatus::Optimal) {
                ++stats_.numerical_failures;
                continue;
            }

            if (opt_.replay_heuristic) {
                if (auto v = try_replay(sol.point)) return *v;
            }

            std::vector<BinaryValue> free;
            std::vector<std::size_t> free_cols;
            for (std::size_t c : binaries_) {
                if (is_fixed(node, c)) continue;
                free.push_back({problem_.columns[c].ref, sol.point[c]});
                free_cols.push_back(c);
            }
            const auto pick = branch_select(free, opt_.tol.int_tol);
            if (!pick) {
                if (auto v = integral_leaf(node, sol)) return *v;
                ++leaf_replay_failures;
                continue;
            }

            const std::size_t col = free_cols[*pick];
            const double near = free[*pick].value >= 0.5 ? 1.0 : 0.0;
            const double far = 1.0 - near;
            const bool nearest_first = opt_.child_order == ChildOrder::NearestFirst;
            BnbNode second = node;
            second.fixed.emplace_back(col, nearest_first ? far : near);
            node.fixed.emplace_back(col, nearest_first ? near : far);
            stack.push_back(std::move(second));
            stack.push_back(std::move(node));
        }

        if (stats_.numerical_failures > 0) {
            return inconclusive(std::to_string(stats_.numerical_failures)
                                + " relaxation(s) failed numerically");
        }
        if (leaf_replay_failures > 0) {
            return inconclusive(std::to_string(leaf_replay_failures)
                                + " integral solution(s) within the epsilon budget did not replay "
                                  "within the report tolerance");
        }
        Verdict v;
        v.kind = VerdictKind::Unreachable;
        v.reason = "every branch-and-bound leaf is infeasible";
        return v;
    }

    static bool is_fixed(const BnbNode & node, std::size_t col)
    {
        return std::any_of(node.fixed.begin(), node.fixed.end(),
                           [&](const auto & f) { return f.first == col; });
    }

    struct NeuronLink
    {
        std::size_t x = kNone;
        std::size_t delta = kNone;
        std::size_t ub_row = kNone, ub_term = kNone;
        std::size_t off_row = kNone, off_term = kNone;
    };

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    static std::size_t term_of(const LpRow & row, std::size_t col)
    {
        for (std::size_t t = 0; t < row.terms.size(); ++t)
            if (row.terms[t].first == col) return t;
        return kNone;
    }

    // Maps every neuron to its columns and big-M coefficients. Leaves
    // links_ empty (tightening off) when the problem does not follow the
    // encoder's layout for this network.
    void link_neurons()
    {
        std::map<std::string, std::size_t> row_index;
        for (std::size_t r = 0; r < problem_.rows.size(); ++r) row_index.emplace(problem_.rows[r].name, r);
        auto find_row = [&](std::size_t layer, std::size_t j, const char * tag) {
            const auto it = row_index.find("L" + std::to_string(layer) + "_n" + std::to_string(j) + "_" + tag);
            return it == row_index.end() ? kNone : it->second;
        };

        std::vector<std::vector<NeuronLink>> links;
        for (std::size_t l = 0; l < net_.layers().size(); ++l) {
            const std::size_t layer = l + 2;
            std::vector<NeuronLink> row;
            for (std::size_t j = 0; j < net_.layers()[l].output_dim(); ++j) {
                NeuronLink link;
                const auto x = problem_.column_of({layer, VarKind::LayerOut, j});
                if (!x) return;
                link.x = *x;
                if (const auto d = problem_.column_of({layer, VarKind::PhaseBinary, j})) {
                    link.delta = *d;
                    link.ub_row = find_row(layer, j, "ub");
                    link.off_row = find_row(layer, j, "off");
                    if (link.ub_row == kNone || link.off_row == kNone) return;
                    link.ub_term = term_of(base_.rows[link.ub_row], *d);
                    link.off_term = term_of(base_.rows[link.off_row], *d);
                    if (link.ub_term == kNone || link.off_term == kNone) return;
                }
                row.push_back(link);
            }
            links.push_back(std::move(row));
        }
        links_ = std::move(links);
    }

    LpProblem node_problem(const BnbNode & node, bool * empty = nullptr) const
    {
        LpProblem lp = base_;
        for (const auto & [col, value] : node.fixed) {
            lp.lower[col] = value;
            lp.upper[col] = value;
        }
        if (!links_.empty()) {
            const bool ok = tighten(lp);
            if (empty) *empty = !ok;
        }
        return lp;
    }

    // Bound propagation under the node's phase fixings. Fixes binaries whose
    // phase the bounds decide, shrinks big-M coefficients and bounds the
    // layer columns. Every exact (eps = 0) solution of the node stays
    // feasible. Returns false when the node has no consistent assignment;
    // the returned LP then carries contradictory bounds.
    bool tighten(LpProblem & lp) const
    {
        std::vector<Interval> box(inputs_.size());
        for (std::size_t k = 0; k < inputs_.size(); ++k) box[k] = {lp.lower[inputs_[k]], lp.upper[inputs_[k]]};
        std::vector<std::vector<PhaseFix>> fixes(links_.size());
        for (std::size_t l = 0; l < links_.size(); ++l) {
            fixes[l].assign(links_[l].size(), PhaseFix::Free);
            for (std::size_t j = 0; j < links_[l].size(); ++j) {
                const std::size_t d = links_[l][j].delta;
                if (d == kNone) continue;
                if (lp.upper[d] == 0.0) fixes[l][j] = PhaseFix::Active;
                if (lp.lower[d] == 1.0) fixes[l][j] = PhaseFix::Inactive;
            }
        }
        const std::vector<LayerBounds> bounds = propagate_linear(net_, box, fixes);

        for (std::size_t l = 0; l < links_.size(); ++l) {
            for (std::size_t j = 0; j < links_[l].size(); ++j) {
                const NeuronLink & link = links_[l][j];
                const Interval & pre = bounds[l].pre_act[j];
                if (pre.lo > pre.hi) {
                    const std::size_t c = link.delta != kNone ? link.delta : link.x;
                    lp.lower[c] = 1.0;
                    lp.upper[c] = 0.0;
                    return false;
                }
                if (link.delta != kNone && fixes[l][j] == PhaseFix::Free) {
                    if (pre.lo > 0.0) {
                        lp.lower[link.delta] = lp.upper[link.delta] = 0.0;
                    } else if (pre.hi < 0.0) {
                        lp.lower[link.delta] = lp.upper[link.delta] = 1.0;
                    } else if (pre.is_finite()) {
                        double & ub = lp.rows[link.ub_row].terms[link.ub_term].second;
                        ub = std::max(ub, -std::max(kBigMFloor, -pre.lo));
                        LpRow & off = lp.rows[link.off_row];
                        const double m = std::max(kBigMFloor, pre.hi);
                        if (m < off.terms[link.off_term].second) {
                            off.terms[link.off_term].second = m;
                            off.rhs = m;
                        }
                    }
                }
                const Interval & post = bounds[l].post_act[j];
                lp.lower[link.x] = std::max(lp.lower[link.x], post.lo);
                lp.upper[link.x] = std::min(lp.upper[link.x], post.hi);
                if (lp.lower[link.x] > lp.upper[link.x]) return false;
            }
        }
        return true;
    }

    LpSolution solve_lp(const LpProblem & lp)
    {
        ++stats_.lp_solves;
        return solve(lp, opt_.tol);
    }

    Vec clamped_input(std::span<const double> point) const
    {
        std::vector<double> x(inputs_.size());
        for (std::size_t k = 0; k < inputs_.size(); ++k) {
            const Column & c = problem_.columns[inputs_[k]];
            x[k] = std::clamp(point[inputs_[k]], c.lower, c.upper);
        }
        return Vec(std::move(x));
    }

    // The exact assignment induced by a replayed input is itself a MILP
    // solution with zero eps, so it proves reachability outright.
    std::optional<Verdict> try_replay(std::span<const double> point)
    {
        const Vec x = clamped_input(point);
        if (auto v = accept_exact(x, "relaxation point replays into the output set")) return v;
        if (auto y = local_search(x)) return accept_exact(*y, "local search from a relaxation point");
        return std::nullopt;
    }

    std::optional<Verdict> accept_exact(const Vec & x, const char * how) const
    {
        const WitnessReport rep = validate_witness(net_, spec_, x, 0.0, opt_.tol.feas_tol);
        if (!rep.valid) return std::nullopt;
        const auto values = induced_assignment(problem_, net_, x);
        if (max_violation(base_, values) > opt_.tol.feas_tol) return std::nullopt;
        Verdict v;
        v.kind = VerdictKind::Reachable;
        v.witness = x;
        v.eps_sum = problem_.eps_sum(values);
        v.reason = how;
        return v;
    }

    // Smallest output-constraint slack at x and its gradient with respect
    // to x, through the ReLU activation pattern of x.
    double worst_slack(const Vec & x, std::vector<double> * grad) const
    {
        const std::vector<Vec> trace = forward_trace(net_, x);
        const Vec & y = trace.back();
        std::size_t worst = 0;
        double slack = kInf;
        for (std::size_t r = 0; r < spec_.output_constraints.size(); ++r) {
            const double s = spec_.output_constraints[r].slack(y.values());
            if (s < slack) {
                slack = s;
                worst = r;
            }
        }
        if (!grad || spec_.output_constraints.empty()) return slack;

        const LinConstraint & c = spec_.output_constraints[worst];
        double sign = c.relation() == Relation::GreaterEq ? 1.0 : -1.0;
        if (c.relation() == Relation::Equal && c.lhs(y.values()) < c.rhs()) sign = 1.0;
        std::vector<double> g(y.dim(), 0.0);
        for (const Term & t : c.terms()) g[t.index] = sign * t.coeff;
        for (std::size_t l = net_.layers().size(); l-- > 0;) {
            const Layer & layer = net_.layers()[l];
            if (layer.activation == Activation::ReLU) {
                for (std::size_t i = 0; i < g.size(); ++i)
                    if (trace[l + 1][i] <= 0.0) g[i] = 0.0;
            }
            std::vector<double> prev(layer.input_dim(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g[i] == 0.0) continue;
                for (std::size_t j = 0; j < layer.input_dim(); ++j) prev[j] += g[i] * layer.weights(i, j);
            }
            g = std::move(prev);
        }
        *grad = std::move(g);
        return slack;
    }

    // Sign-gradient ascent on the worst output slack, projected onto the
    // input box; returns the first point where every output row holds.
    std::optional<Vec> local_search(const Vec & start) const
    {
        constexpr int kSteps = 40;
        constexpr int kMaxHalvings = 4;
        if (spec_.output_constraints.empty()) return std::nullopt;
        std::vector<double> lo(inputs_.size()), hi(inputs_.size()), step(inputs_.size());
        for (std::size_t k = 0; k < inputs_.size(); ++k) {
            lo[k] = problem_.columns[inputs_[k]].lower;
            hi[k] = problem_.columns[inputs_[k]].upper;
            if (!std::isfinite(lo[k]) || !std::isfinite(hi[k])) return std::nullopt;
            step[k] = 0.1 * (hi[k] - lo[k]);
        }
        Vec x = start;
        std::vector<double> grad;
        double slack = worst_slack(x, &grad);
        int halvings = 0;
        for (int it = 0; it < kSteps && halvings <= kMaxHalvings; ++it) {
            if (slack >= 0.0) return x;
            std::vector<double> next = x.to_vector();
            for (std::size_t k = 0; k < next.size(); ++k) {
                if (grad[k] > 0.0) next[k] = std::min(hi[k], next[k] + step[k]);
                if (grad[k] < 0.0) next[k] = std::max(lo[k], next[k] - step[k]);
            }
            Vec cand(std::move(next));
            std::vector<double> cand_grad;
            const double s = worst_slack(cand, &cand_grad);
            if (s > slack) {
                x = std::move(cand);
                slack = s;
                grad = std::move(cand_grad);
            } else {
                for (double & h : step) h *= 0.5;
                ++halvings;
            }
        }
        return slack >= 0.0 ? std::optional<Vec>(x) : std::nullopt;
    }

    std::optional<Verdict> integral_leaf(const BnbNode & node, const LpSolution & sol)
    {
        // Snap binaries that are only integral within int_tol and re-solve so
        // no M * int_tol leakage reaches the witness.
        LpSolution leaf = sol;
        bool snapped = false;
        BnbNode exact = node;
        for (std::size_t c : binaries_) {
            if (is_fixed(node, c)) continue;
            const double r = std::round(sol.point[c]);
            exact.fixed.emplace_back(c, r);
            snapped = snapped || sol.point[c] != r;
        }
        if (snapped) {
            leaf = solve_lp(node_problem(exact));
            if (leaf.status == LpStatus::Infeasible) {
                ++stats_.pruned;
                if (opt_.on_prune) opt_.on_prune(exact, node_problem(exact));
                return std::nullopt;
            }
            if (leaf.status != LpStatus::Optimal) {
                ++stats_.numerical_failures;
                return std::nullopt;
            }
        }
        const double eps = problem_.eps_sum(leaf.point);
        if (eps > problem_.eps_budget + opt_.tol.feas_tol) return std::nullopt;

        const Vec x = clamped_input(leaf.point);
        const WitnessReport rep = validate_witness(net_, spec_, x, 0.0, opt_.report_tol);
        if (!rep.valid) return std::nullopt;
        Verdict v;
        v.kind = VerdictKind::Reachable;
        v.witness = x;
        v.eps_sum = std::max(eps, 0.0);
        v.reason = "integral branch-and-bound solution";
        return v;
    }

    Verdict inconclusive(std::string reason) const
    {
        Verdict v;
        v.kind = VerdictKind::Inconclusive;
        v.reason = std::move(reason);
        return v;
    }

    const EncodedProblem & problem_;
    const Network & net_;
    const PropertySpec & spec_;
    const DecideOptions & opt_;
    LpProblem base_;
    std::vector<std::size_t> binaries_;
    std::vector<std::size_t> inputs_;
    std::vector<std::vector<NeuronLink>> links_;
    SearchStats stats_;
};

} // namespace

Verdict decide(const EncodedProblem & problem, const Network & net, const PropertySpec & spec,
               const DecideOptions & options)
{
    options.tol.validate();
    return BranchAndBound(problem, net, spec, options).run();
}

} // namespace relureach
