/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/propspec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relureach {

std::string_view to_string(Relation r)
{
    switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::GreaterEq: return ">=";
    case Relation::Equal: return "=";
    }
    return "?";
}

LinConstraint::LinConstraint(Side side, std::vector<Term> terms, Relation relation, double rhs)
    : side_(side), terms_(std::move(terms)), relation_(relation), rhs_(rhs)
{
    if (!std::isfinite(rhs_)) throw NonFiniteError("constraint right-hand side is not finite");
    bool nonzero = false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!std::isfinite(terms_[i].coeff)) {
            throw NonFiniteError("constraint coefficient is not finite");
        }
        nonzero = nonzero || terms_[i].coeff != 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            if (terms_[k].index == terms_[i].index) {
                throw Error("constraint mentions variable " + std::to_string(terms_[i].index)
                            + " twice");
            }
        }
    }
    if (!nonzero) throw Error("constraint has no nonzero coefficient");
}

std::size_t LinConstraint::max_index() const noexcept
{
    std::size_t m = 0;
    for (const auto & t : terms_) m = std::max(m, t.index);
    return m;
}

double LinConstraint::lhs(std::span<const double> point) const
{
    double acc = 0.0;
    for (const auto & t : terms_) {
        if (t.index >= point.size()) throw DimensionError("constraint point", t.index + 1, point.size());
        acc += t.coeff * point[t.index];
    }
    return acc;
}

double LinConstraint::slack(std::span<const double> point) const
{
    const double v = lhs(point);
    switch (relation_) {
    case Relation::LessEq: return rhs_ - v;
    case Relation::GreaterEq: return v - rhs_;
    case Relation::Equal: return -std::abs(v - rhs_);
    }
    return 0.0;
}

namespace {

class LineParser
{
  public:
    LineParser(std::string_view line, std::size_t line_no, const VariableRanges & ranges)
        : s_(line), line_(line_no), ranges_(ranges)
    {
    }

    LinConstraint parse()
    {
        std::vector<Term> terms;
        std::optional<Side> side;
        bool first = true;
        while (true) {
            skip_ws();
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1.0 : 1.0;
                ++pos_;
                skip_ws();
            } else if (!first) {
                break;
            }
            first = false;

            double coeff = 1.0;
            if (is_number_start()) {
                coeff = number();
                skip_ws();
                expect('*');
                skip_ws();
            }
            const std::size_t var_pos = pos_;
            auto [var_side, index] = variable();
            if (side && *side != var_side) {
                fail("constraint mixes input and output variables", var_pos);
            }
            side = var_side;
            add_term(terms, index, sign * coeff);
        }

        skip_ws();
        const std::size_t rel_pos = pos_;
        Relation rel;
        if (consume("<=")) {
            rel = Relation::LessEq;
        } else if (consume(">=")) {
            rel = Relation::GreaterEq;
        } else if (consume("=")) {
            rel = Relation::Equal;
        } else if (peek() == '<' || peek() == '>') {
            fail("strict inequalities are not supported; use <= or >= with a margin", rel_pos);
        } else {
            fail("expected '<=', '>=' or '='", rel_pos);
        }
        skip_ws();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = peek() == '-' ? -1.0 : 1.0;
            ++pos_;
        }
        if (!is_number_start()) fail("expected a number on the right-hand side", pos_);
        const double rhs = sign * number();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing text", pos_);

        try {
            return LinConstraint(*side, std::move(terms), rel, rhs);
        } catch (const Error & e) {
            fail(e.what(), 0);
        }
    }

  private:
    [[noreturn]] void fail(const std::string & msg, std::size_t at) const
    {
        throw ParseError(msg, line_, at + 1);
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(std::string_view tok)
    {
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (peek() != c) fail(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    bool is_number_start() const
    {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    double number()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ > start) {
                ++pos_;
                if (peek() == '+' || peek() == '-') ++pos_;
            } else {
                break;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(v)) {
            fail("malformed number '" + std::string(s_.substr(start, pos_ - start)) + "'", start);
        }
        return v;
    }

    std::pair<Side, std::size_t> variable()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size()
               && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name.empty()) fail("expected a variable in[i] or out[j]", start);
        Side side;
        if (name == "in") {
            side = Side::Input;
        } else if (name == "out") {
            side = Side::Output;
        } else {
            fail("unknown variable '" + std::string(name) + "'", start);
        }
        skip_ws();
        expect('[');
        skip_ws();
        const std::size_t idx_pos = pos_;
        std::size_t index = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), index);
        if (ec != std::errc()) fail("expected a variable index", idx_pos);
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        skip_ws();
        expect(']');

        const auto & limit = side == Side::Input ? ranges_.input_dim : ranges_.output_dim;
        if (limit && index >= *limit) {
            fail(std::string(name) + "[" + std::to_string(index) + "] is out of range (dimension "
                     + std::to_string(*limit) + ")",
                 idx_pos);
        }
        return {side, index};
    }

    static void add_term(std::vector<Term> & terms, std::size_t index, double coeff)
    {
        for (auto & t : terms) {
            if (t.index == index) {
                t.coeff += coeff;
                return;
            }
        }
        terms.push_back({index, coeff});
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_;
    const VariableRanges & ranges_;
};

} // namespace

PropertySpec parse_property(std::string_view text, const VariableRanges & ranges)
{
    PropertySpec spec;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        ++line_no;
        begin = end + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (std::all_of(line.begin(), line.end(),
                        [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
            continue;

        LinConstraint c = LineParser(line, line_no, ranges).parse();
        (c.side() == Side::Input ? spec.input_constraints : spec.output_constraints)
            .push_back(std::move(c));
    }
    return spec;
}

PropertySpec load_property(const std::string & path, const VariableRanges & ranges)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open property file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_property(ss.str(), ranges);
}

std::string format_constraint(const LinConstraint & c)
{
    const char * var = c.side() == Side::Input ? "in" : "out";
    std::string out;
    bool first = true;
    for (const auto & t : c.terms()) {
        double mag = t.coeff;
        if (first) {
            if (mag < 0) {
                out += "-";
                mag = -mag;
            }
        } else {
            out += mag < 0 ? " - " : " + ";
            mag = std::abs(mag);
        }
        if (mag != 1.0) out += format_double(mag) + "*";
        out += std::string(var) + "[" + std::to_string(t.index) + "]";
        first = false;
    }
    out += " ";
    out += to_string(c.relation());
    out += " " + format_double(c.rhs());
    return out;
}

std::string format_property(const PropertySpec & spec)
{
    std::string out;
    for (const auto & c : spec.input_constraints) out += format_constraint(c) + "\n";
    for (const auto & c : spec.output_constraints) out += format_constraint(c) + "\n";
    return out;
}

void check_indices(std::span<const LinConstraint> constraints, std::size_t dim)
{
    for (const auto & c : constraints) {
        if (c.max_index() >= dim) {
            throw DimensionError(std::string(c.side() == Side::Input ? "input" : "output")
                                     + " constraint '" + format_constraint(c)
                                     + "' refers past the variable space",
                                 dim, c.max_index() + 1);
        }
    }
}

bool check_membership(std::span<const LinConstraint> constraints, std::span<const double> point,
                      double tol)
{
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const LinConstraint & c) { return c.slack(point) >= -tol; });
}

bool check_membership(std::span<const LinConstraint> constraints, const Vec & point, double tol)
{
    return check_membership(constraints, point.values(), tol);
}

bool InputBox::is_finite() const noexcept
{
    return !infeasible && std::all_of(intervals.begin(), intervals.end(),
                                      [](const Interval & iv) { return iv.is_finite(); });
}

InputBox extract_box(std::span<const LinConstraint> constraints, std::size_t dim)
{
    InputBox box;
    box.intervals.assign(dim, Interval{});
    for (const auto & c : constraints) {
        const Term * only = nullptr;
        std::size_t nonzero = 0;
        for (const auto & t : c.terms()) {
            if (t.coeff != 0.0) {
                only = &t;
                ++nonzero;
            }
        }
        if (nonzero != 1) continue;
        if (only->index >= dim) throw DimensionError("input constraint index", dim, only->index + 1);

        // Division by a non-unit coefficient rounds; step one ulp outward so
        // the box never cuts into the true set.
        const double bound = c.rhs() / only->coeff;
        const bool exact = std::abs(only->coeff) == 1.0;
        const double up = exact ? bound : std::nextafter(bound, kInf);
        const double down = exact ? bound : std::nextafter(bound, -kInf);
        Interval & iv = box.intervals[only->index];
        const bool flips = only->coeff < 0;
        const bool upper = (c.relation() == Relation::LessEq) != flips;
        if (c.relation() == Relation::Equal) {
            iv.lo = std::max(iv.lo, down);
            iv.hi = std::min(iv.hi, up);
        } else if (upper) {
            iv.hi = std::min(iv.hi, up);
        } else {
            iv.lo = std::max(iv.lo, down);
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (box.intervals[i].lo > box.intervals[i].hi) {
            box.infeasible = true;
            box.conflicting_index = i;
            break;
        }
    }
    return box;
}

} // namespace relureach
