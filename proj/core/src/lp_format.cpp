/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

// CPLEX LP text format for EncodedProblem.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "relureach/encoder.hpp"

namespace relureach {

namespace {

void write_terms(std::ostream & out, const std::vector<std::pair<std::size_t, double>> & terms,
                 const std::vector<Column> & columns)
{
    bool first = true;
    for (const auto & [col, coeff] : terms) {
        double mag = coeff;
        if (first) {
            if (mag < 0 || std::signbit(mag)) {
                out << " -";
                mag = -mag;
            }
        } else {
            out << (std::signbit(mag) ? " -" : " +");
            mag = std::abs(mag);
        }
        out << ' ';
        if (mag != 1.0) out << format_double(mag) << ' ';
        out << columns[col].ref.name();
        first = false;
    }
}

const char * relation_text(Relation r)
{
    switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::GreaterEq: return ">=";
    case Relation::Equal: return "=";
    }
    return "?";
}

} // namespace

std::string export_lp_file(const EncodedProblem & problem)
{
    std::ostringstream out;
    out << "\\ relureach reachability encoding\n";
    out << "\\ mode: " << to_string(problem.mode) << "\n";
    out << "\\ eps_budget: " << format_double(problem.eps_budget) << "\n";
    out << "Minimize\n obj:";
    std::vector<std::pair<std::size_t, double>> obj;
    for (std::size_t c = 0; c < problem.columns.size(); ++c) {
        if (problem.columns[c].objective != 0.0) obj.emplace_back(c, problem.columns[c].objective);
    }
    write_terms(out, obj, problem.columns);
    out << "\n";

    if (!problem.rows.empty()) {
        out << "Subject To\n";
        for (const auto & row : problem.rows) {
            out << ' ' << row.name << ':';
            write_terms(out, row.terms, problem.columns);
            out << ' ' << relation_text(row.relation) << ' ' << format_double(row.rhs) << "\n";
        }
    }

    out << "Bounds\n";
    for (const auto & c : problem.columns) {
        const std::string name = c.ref.name();
        const bool has_lo = std::isfinite(c.lower);
        const bool has_hi = std::isfinite(c.upper);
        if (has_lo && has_hi && c.lower == c.upper) {
            out << ' ' << name << " = " << format_double(c.lower) << "\n";
        } else if (has_lo && has_hi) {
            out << ' ' << format_double(c.lower) << " <= " << name << " <= " << format_double(c.upper)
                << "\n";
        } else if (has_lo) {
            out << ' ' << name << " >= " << format_double(c.lower) << "\n";
        } else if (has_hi) {
            out << " -inf <= " << name << " <= " << format_double(c.upper) << "\n";
        } else {
            out << ' ' << name << " free\n";
        }
    }

    bool any_binary = std::any_of(problem.columns.begin(), problem.columns.end(),
                                  [](const Column & c) { return c.integer; });
    if (any_binary) {
        out << "Binaries\n";
        for (const auto & c : problem.columns)
            if (c.integer) out << ' ' << c.ref.name() << "\n";
    }
    out << "End\n";
    return out.str();
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

struct Token
{
    std::string text;
    std::size_t line;
};

std::string lower_case(std::string_view s)
{
    std::string out(s);
    for (char & c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<double> as_number(std::string_view s)
{
    const std::string l = lower_case(s);
    if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") return kInf;
    if (l == "-inf" || l == "-infinity") return -kInf;
    std::string_view body = s;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    if (body.empty()) return std::nullopt;
    const char c0 = body.front();
    if (!(std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.' || c0 == '-')) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size()) return std::nullopt;
    return v;
}

std::optional<Relation> as_relation(std::string_view s)
{
    if (s == "<=" || s == "=<" || s == "<") return Relation::LessEq;
    if (s == ">=" || s == "=>" || s == ">") return Relation::GreaterEq;
    if (s == "=") return Relation::Equal;
    return std::nullopt;
}

// Splits on whitespace and around relation operators and signs glued to
// names ("x+y" is not produced by the writer but is legal LP text).
std::vector<std::string> split_line(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '<' || c == '>' || c == '=') {
            flush();
            std::string op(1, c);
            if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
                op += line[++i];
            }
            out.push_back(op);
        } else if ((c == '+' || c == '-') && cur.empty()) {
            // Sign token unless it starts a number or -inf.
            if (i + 1 < line.size()
                && (std::isdigit(static_cast<unsigned char>(line[i + 1])) || line[i + 1] == '.'
                    || line[i + 1] == 'i' || line[i + 1] == 'I')) {
                cur += c;
            } else {
                out.emplace_back(1, c);
            }
        } else if ((c == '+' || c == '-') && !cur.empty() && cur.back() != 'e' && cur.back() != 'E') {
            flush();
            out.emplace_back(1, c);
        } else {
            cur += c;
        }
    }
    flush();
    return out;
}

class LpReader
{
  public:
    EncodedProblem read(std::string_view text)
    {
        std::vector<Token> pending;
        std::size_t line_no = 0;
        std::size_t begin = 0;
        while (begin <= text.size()) {
            std::size_t end = text.find('\n', begin);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(begin, end - begin);
            begin = end + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

            if (auto bs = line.find('\\'); bs != std::string_view::npos) {
                read_metadata(line.substr(bs + 1));
                line = line.substr(0, bs);
            }
            const std::string key = lower_case(trim(line));
            if (auto s = section_keyword(key)) {
                finish(pending);
                section_ = *s;
                continue;
            }
            if (key.empty()) continue;
            for (auto & t : split_line(line)) pending.push_back({std::move(t), line_no});
            if (section_ == Section::Constraints) {
                if (complete_constraint(pending)) finish(pending);
            } else {
                finish(pending);
            }
        }
        finish(pending);
        if (section_ != Section::End) throw ParseError("missing End", line_no, 0);
        return build();
    }

  private:
    static std::string_view trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    }

    static std::optional<Section> section_keyword(const std::string & k)
    {
        if (k == "minimize" || k == "minimum" || k == "min") return Section::Objective;
        if (k == "maximize" || k == "maximum" || k == "max") {
            throw ParseError("maximization problems are not supported", 0, 0);
        }
        if (k == "subject to" || k == "such that" || k == "st" || k == "s.t.")
            return Section::Constraints;
        if (k == "bounds" || k == "bound") return Section::Bounds;
        if (k == "binaries" || k == "binary" || k == "bin") return Section::Binaries;
        if (k == "generals" || k == "general" || k == "gen") return Section::Generals;
        if (k == "end") return Section::End;
        return std::nullopt;
    }

    void read_metadata(std::string_view comment)
    {
        comment = trim(comment);
        auto value_after = [&](std::string_view key) -> std::optional<std::string_view> {
            if (comment.substr(0, key.size()) != key) return std::nullopt;
            return trim(comment.substr(key.size()));
        };
        if (auto v = value_after("mode:")) {
            if (*v == "exact") mode_ = EncodeMode::Exact;
            if (*v == "epsilon") mode_ = EncodeMode::Epsilon;
        } else if (auto b = value_after("eps_budget:")) {
            if (auto num = as_number(*b)) budget_ = *num;
        }
    }

    // A constraint is complete once a relation and a right-hand side follow.
    static bool complete_constraint(const std::vector<Token> & toks)
    {
        for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
            if (as_relation(toks[i].text) && as_number(toks[i + 1].text)) return true;
        }
        return false;
    }

    std::size_t column(const std::string & name, std::size_t line)
    {
        if (section_ == Section::End) throw ParseError("text after End", line, 0);
        auto it = col_index_.find(name);
        if (it != col_index_.end()) return it->second;
        if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) {
            throw ParseError("invalid variable name '" + name + "'", line, 0);
        }
        names_.push_back(name);
        lower_.push_back(0.0);
        upper_.push_back(kInf);
        integer_.push_back(false);
        objective_.push_back(0.0);
        col_index_.emplace(name, names_.size() - 1);
        return names_.size() - 1;
    }

    // Parses "[+|-] [coef] name ..." up to the first relation token.
    std::vector<std::pair<std::size_t, double>> linear_expr(const std::vector<Token> & toks,
                                                            std::size_t & i)
    {
        std::vector<std::pair<std::size_t, double>> terms;
        while (i < toks.size() && !as_relation(toks[i].text)) {
            double sign = 1.0;
            while (i < toks.size() && (toks[i].text == "+" || toks[i].text == "-")) {
                if (toks[i].text == "-") sign = -sign;
                ++i;
            }
            if (i >= toks.size()) throw ParseError("dangling sign", toks.back().line, 0);
            double coeff = 1.0;
            if (auto num = as_number(toks[i].text)) {
                coeff = *num;
                ++i;
                if (i >= toks.size() || as_relation(toks[i].text)) {
                    throw ParseError("constant terms are not supported on the left-hand side",
                                     toks[i - 1].line, 0);
                }
            }
            const std::size_t col = column(toks[i].text, toks[i].line);
            ++i;
            terms.emplace_back(col, sign * coeff);
        }
        return terms;
    }

    void finish(std::vector<Token> & toks)
    {
        if (toks.empty()) return;
        switch (section_) {
        case Section::Objective: objective_line(toks); break;
        case Section::Constraints: constraint_line(toks); break;
        case Section::Bounds: bound_line(toks); break;
        case Section::Binaries:
        case Section::Generals:
            for (const auto & t : toks) {
                const std::size_t c = column(t.text, t.line);
                integer_[c] = true;
                if (section_ == Section::Binaries) {
                    binary_declared_.push_back(c);
                }
            }
            break;
        case Section::None: throw ParseError("content before any section", toks.front().line, 0);
        case Section::End: throw ParseError("text after End", toks.front().line, 0);
        }
        toks.clear();
    }

    void objective_line(const std::vector<Token> & toks)
    {
        std::size_t i = 0;
        if (!toks.empty() && toks[0].text.back() == ':') i = 1;
        for (const auto & [col, coeff] : linear_expr(toks, i)) objective_[col] += coeff;
        if (i != toks.size()) throw ParseError("unexpected relation in objective", toks[i].line, 0);
    }

    void constraint_line(const std::vector<Token> & toks)
    {
        std::size_t i = 0;
        ProblemRow row;
        if (toks[0].text.back() == ':') {
            row.name = toks[0].text.substr(0, toks[0].text.size() - 1);
            i = 1;
        } else {
            row.name = "R" + std::to_string(rows_.size());
        }
        row.terms = linear_expr(toks, i);
        if (i + 2 != toks.size()) throw ParseError("malformed constraint '" + row.name + "'", toks[0].line, 0);
        row.relation = *as_relation(toks[i].text);
        const auto rhs = as_number(toks[i + 1].text);
        if (!rhs || !std::isfinite(*rhs)) {
            throw ParseError("constraint '" + row.name + "' needs a finite right-hand side", toks[i].line, 0);
        }
        row.rhs = *rhs;
        rows_.push_back(std::move(row));
    }

    void bound_line(const std::vector<Token> & toks)
    {
        const std::size_t line = toks.front().line;
        auto num = [&](std::size_t k) {
            auto v = as_number(toks[k].text);
            if (!v) throw ParseError("expected a number in bound, got '" + toks[k].text + "'", line, 0);
            return *v;
        };
        if (toks.size() == 2 && lower_case(toks[1].text) == "free") {
            const std::size_t c = column(toks[0].text, line);
            lower_[c] = -kInf;
            upper_[c] = kInf;
            return;
        }
        if (toks.size() == 3) {
            const auto rel = as_relation(toks[1].text);
            if (!rel) throw ParseError("malformed bound", line, 0);
            if (!as_number(toks[0].text)) {
                const std::size_t c = column(toks[0].text, line);
                const double v = num(2);
                if (*rel == Relation::LessEq) upper_[c] = v;
                else if (*rel == Relation::GreaterEq) lower_[c] = v;
                else lower_[c] = upper_[c] = v;
            } else {
                // "v <= x" style.
                const std::size_t c = column(toks[2].text, line);
                const double v = num(0);
                if (*rel == Relation::LessEq) lower_[c] = v;
                else if (*rel == Relation::GreaterEq) upper_[c] = v;
                else lower_[c] = upper_[c] = v;
            }
            return;
        }
        if (toks.size() == 5 && as_relation(toks[1].text) == Relation::LessEq
            && as_relation(toks[3].text) == Relation::LessEq) {
            const std::size_t c = column(toks[2].text, line);
            lower_[c] = num(0);
            upper_[c] = num(4);
            return;
        }
        throw ParseError("malformed bound", line, 0);
    }

    EncodedProblem build()
    {
        for (std::size_t c : binary_declared_) {
            lower_[c] = std::max(lower_[c], 0.0);
            upper_[c] = std::min(upper_[c], 1.0);
        }

        std::vector<std::optional<VarRef>> refs;
        bool all_named = true;
        for (const auto & n : names_) {
            refs.push_back(VarRef::from_name(n));
            all_named = all_named && refs.back().has_value();
        }
        if (!all_named) {
            for (std::size_t c = 0; c < names_.size(); ++c) {
                if (!refs[c]) {
                    throw ParseError("column '" + names_[c]
                                         + "' is not a relureach variable name (x<i>_<j>, d<i>_<j>, e<i>_<j>)",
                                     0, 0);
                }
            }
        }

        // Columns follow VarRef order, which is the encoder's layout.
        std::vector<std::size_t> order(names_.size());
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return *refs[a] < *refs[b]; });
        std::vector<std::size_t> new_index(names_.size());
        for (std::size_t k = 0; k < order.size(); ++k) new_index[order[k]] = k;

        EncodedProblem p;
        bool any_eps = false;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const std::size_t c = order[k];
            p.columns.push_back({*refs[c], lower_[c], upper_[c], integer_[c], objective_[c]});
            any_eps = any_eps || refs[c]->kind == VarKind::EpsSlack;
        }
        for (auto & row : rows_) {
            for (auto & t : row.terms) t.first = new_index[t.first];
        }
        p.rows = std::move(rows_);
        p.mode = mode_.value_or(any_eps ? EncodeMode::Epsilon : EncodeMode::Exact);
        if (budget_) {
            p.eps_budget = *budget_;
        } else {
            for (const auto & r : p.rows)
                if (r.name == "epsbudget") p.eps_budget = r.rhs;
        }
        p.reindex();
        return p;
    }

    Section section_ = Section::None;
    std::optional<EncodeMode> mode_;
    std::optional<double> budget_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> col_index_;
    std::vector<double> lower_, upper_, objective_;
    std::vector<bool> integer_;
    std::vector<std::size_t> binary_declared_;
    std::vector<ProblemRow> rows_;
};

} // namespace

EncodedProblem parse_lp_file(std::string_view text)
{
    return LpReader().read(text);
}

} // namespace relureach
