/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/lpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace relureach {

std::size_t LpProblem::add_column(double lo, double hi, double cost)
{
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
}

void LpProblem::validate() const
{
    const std::size_t n = num_cols();
    if (lower.size() != n || upper.size() != n) {
        throw DimensionError("LP bound vectors", n, std::max(lower.size(), upper.size()));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(objective[j])) throw NonFiniteError("LP objective is not finite");
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInf || upper[j] == -kInf) {
            throw NonFiniteError("LP column " + std::to_string(j) + " has an invalid bound");
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].rhs)) throw NonFiniteError("LP rhs is not finite");
        for (const auto & [col, coeff] : rows[i].terms) {
            if (col >= n) throw DimensionError("LP row " + std::to_string(i) + " column", n, col + 1);
            if (!std::isfinite(coeff)) throw NonFiniteError("LP coefficient is not finite");
        }
    }
}

std::string_view to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

double max_violation(const LpProblem & problem, std::span<const double> point)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < problem.num_cols(); ++j) {
        worst = std::max(worst, problem.lower[j] - point[j]);
        worst = std::max(worst, point[j] - problem.upper[j]);
    }
    for (const auto & row : problem.rows) {
        double lhs = 0.0;
        for (const auto & [col, coeff] : row.terms) lhs += coeff * point[col];
        switch (row.relation) {
        case Relation::LessEq: worst = std::max(worst, lhs - row.rhs); break;
        case Relation::GreaterEq: worst = std::max(worst, row.rhs - lhs); break;
        case Relation::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
        }
    }
    return worst;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr std::size_t kRefreshEvery = 64;

// Columns are laid out as [structural | slack per row | artificial per row
// that needed one]. Row i reads  a_i x + s_i (+/- art_i) = b_i  with the
// slack's bounds encoding the relation.
class Simplex
{
  public:
    Simplex(const LpProblem & p, const Tolerances & tol, const SimplexOptions & opt)
        : p_(p), tol_(tol)
    {
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            if (!p.rows[i].terms.empty()) {
                bool any = false;
                for (const auto & t : p.rows[i].terms) any = any || t.second != 0.0;
                if (any) {
                    live_rows_.push_back(i);
                    continue;
                }
            }
            const double r = p.rows[i].rhs;
            const bool ok = p.rows[i].relation == Relation::LessEq      ? 0.0 <= r + tol.feas_tol
                            : p.rows[i].relation == Relation::GreaterEq ? 0.0 >= r - tol.feas_tol
                                                                        : std::abs(r) <= tol.feas_tol;
            if (!ok) trivially_infeasible_ = true;
        }
        n_ = p.num_cols();
        m_ = live_rows_.size();
        const std::size_t size = m_ + n_;
        max_iter_ = opt.max_iterations ? opt.max_iterations : 50 * size + 5000;
        bland_after_ = opt.bland_after ? opt.bland_after : 4 * size + 100;
    }

    LpSolution run()
    {
        LpSolution sol;
        for (std::size_t j = 0; j < n_; ++j) {
            if (p_.lower[j] > p_.upper[j]) trivially_infeasible_ = true;
        }
        if (trivially_infeasible_) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        setup();

        if (num_art_ > 0) {
            std::vector<double> phase1(total_, 0.0);
            for (std::size_t j = art_begin_; j < total_; ++j) phase1[j] = 1.0;
            const LpStatus st = optimize(phase1);
            if (st == LpStatus::NumericalFailure) return fail(sol);
            refresh_basic_values();
            double infeas = 0.0;
            for (std::size_t j = art_begin_; j < total_; ++j) infeas += std::abs(x_[j]);
            if (infeas > tol_.feas_tol) {
                sol.status = LpStatus::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
            for (std::size_t j = art_begin_; j < total_; ++j) {
                lo_[j] = 0.0;
                up_[j] = 0.0;
                if (pos_[j] < 0) {
                    x_[j] = 0.0;
                    dead_[j] = 1;
                }
            }
            drive_out_artificials();
            refresh_basic_values();
        }

        std::vector<double> cost(total_, 0.0);
        std::copy(p_.objective.begin(), p_.objective.end(), cost.begin());
        const LpStatus st = optimize(cost);
        if (st == LpStatus::Unbounded) {
            sol.status = LpStatus::Unbounded;
            sol.iterations = iterations_;
            return sol;
        }
        if (st == LpStatus::NumericalFailure) return fail(sol);
        refresh_basic_values();

        sol.point.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        sol.max_violation = max_violation(p_, sol.point);
        if (sol.max_violation > tol_.feas_tol) {
            polish();
            sol.point.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
            sol.max_violation = max_violation(p_, sol.point);
        }
        if (sol.max_violation > tol_.feas_tol) return fail(sol);

        sol.status = LpStatus::Optimal;
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) sol.objective += p_.objective[j] * sol.point[j];
        sol.iterations = iterations_;
        return sol;
    }

  private:
    LpSolution & fail(LpSolution & sol)
    {
        sol.status = LpStatus::NumericalFailure;
        sol.point.clear();
        sol.iterations = iterations_;
        return sol;
    }

    double & at(std::size_t i, std::size_t j) { return tab_[i * total_ + j]; }

    static double nonbasic_start(double lo, double hi)
    {
        if (std::isfinite(lo)) return lo;
        if (std::isfinite(hi)) return hi;
        return 0.0;
    }

    void setup()
    {
        // Residual of every row with structurals at their starting values.
        std::vector<double> x0(n_);
        for (std::size_t j = 0; j < n_; ++j) x0[j] = nonbasic_start(p_.lower[j], p_.upper[j]);

        std::vector<double> resid(m_);
        std::vector<int> art_sign(m_, 0);
        art_row_sign_.assign(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const LpRow & row = p_.rows[live_rows_[r]];
            double v = row.rhs;
            for (const auto & [col, coeff] : row.terms) v -= coeff * x0[col];
            resid[r] = v;
            const bool fits = row.relation == Relation::LessEq      ? v >= 0.0
                              : row.relation == Relation::GreaterEq ? v <= 0.0
                                                                    : v == 0.0;
            if (!fits) {
                art_sign[r] = v > 0 ? 1 : -1;
                art_row_sign_[r] = art_sign[r];
                art_row_.push_back(r);
                ++num_art_;
            }
        }

        art_begin_ = n_ + m_;
        total_ = art_begin_ + num_art_;
        tab_.assign(m_ * total_, 0.0);
        beta_.assign(m_, 0.0);
        lo_.assign(total_, 0.0);
        up_.assign(total_, 0.0);
        x_.assign(total_, 0.0);
        pos_.assign(total_, -1);
        basis_.assign(m_, 0);

        dead_.assign(total_, 0);
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = p_.lower[j];
            up_[j] = p_.upper[j];
            x_[j] = x0[j];
            dead_[j] = lo_[j] == up_[j];
        }

        std::size_t art = art_begin_;
        for (std::size_t r = 0; r < m_; ++r) {
            const LpRow & row = p_.rows[live_rows_[r]];
            const std::size_t slack = n_ + r;
            switch (row.relation) {
            case Relation::LessEq: lo_[slack] = 0.0; up_[slack] = kInf; break;
            case Relation::GreaterEq: lo_[slack] = -kInf; up_[slack] = 0.0; break;
            case Relation::Equal: lo_[slack] = 0.0; up_[slack] = 0.0; break;
            }
            const double sign = art_sign[r] < 0 ? -1.0 : 1.0;
            beta_[r] = sign * row.rhs;
            for (const auto & [col, coeff] : row.terms) {
                if (dead_[col]) {
                    beta_[r] -= sign * coeff * x0[col];
                } else {
                    at(r, col) += sign * coeff;
                }
            }
            at(r, slack) = sign;

            if (art_sign[r] == 0) {
                basis_[r] = slack;
                x_[slack] = resid[r];
            } else {
                lo_[art] = 0.0;
                up_[art] = kInf;
                at(r, art) = 1.0;
                basis_[r] = art;
                x_[art] = std::abs(resid[r]);
                x_[slack] = 0.0;
                ++art;
            }
            pos_[basis_[r]] = static_cast<long>(r);
        }
    }

    // Reduced costs d = c - c_B^T T for the current basis.
    void price(const std::vector<double> & cost)
    {
        d_ = cost;
        for (std::size_t r = 0; r < m_; ++r) {
            const double cb = cost[basis_[r]];
            if (cb == 0.0) continue;
            const double * row = &tab_[r * total_];
            for (std::size_t j = 0; j < total_; ++j) d_[j] -= cb * row[j];
        }
        for (std::size_t r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
    }

    std::optional<std::size_t> choose_entering(bool bland) const
    {
        std::optional<std::size_t> best;
        double best_score = 0.0;
        for (std::size_t j = 0; j < total_; ++j) {
            if (pos_[j] >= 0 || dead_[j]) continue;
            const double dj = d_[j];
            const bool up_ok = dj < -kCostTol && x_[j] < up_[j];
            const bool down_ok = dj > kCostTol && x_[j] > lo_[j];
            if (!up_ok && !down_ok) continue;
            if (bland) return j;
            if (std::abs(dj) > best_score) {
                best_score = std::abs(dj);
                best = j;
            }
        }
        return best;
    }

    LpStatus optimize(const std::vector<double> & cost)
    {
        price(cost);
        std::size_t phase_iters = 0;
        std::vector<std::size_t> nz;
        nz.reserve(total_);

        while (true) {
            if (iterations_ >= max_iter_) return LpStatus::NumericalFailure;
            const bool bland = phase_iters >= bland_after_;
            const auto entering = choose_entering(bland);
            if (!entering) return LpStatus::Optimal;
            const std::size_t q = *entering;
            const double dir = d_[q] < 0 ? 1.0 : -1.0;

            // Ratio test; a bound flip of the entering column is the default.
            const double flip = up_[q] - lo_[q];
            double theta = flip;
            std::optional<std::size_t> leave;
            double leave_bound = 0.0;
            double leave_mag = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                const double delta = -at(r, q) * dir;
                if (std::abs(delta) <= kPivotTol) continue;
                const std::size_t b = basis_[r];
                double limit;
                double bound;
                if (delta < 0) {
                    if (!std::isfinite(lo_[b])) continue;
                    limit = (x_[b] - lo_[b]) / -delta;
                    bound = lo_[b];
                } else {
                    if (!std::isfinite(up_[b])) continue;
                    limit = (up_[b] - x_[b]) / delta;
                    bound = up_[b];
                }
                limit = std::max(limit, 0.0);
                bool take = false;
                if (limit < theta - kTieTol) {
                    take = true;
                } else if (limit <= theta + kTieTol) {
                    if (!leave) {
                        take = true;
                    } else {
                        take = bland ? b < basis_[*leave] : std::abs(delta) > leave_mag;
                    }
                }
                if (take) {
                    theta = std::min(limit, flip);
                    leave = r;
                    leave_bound = bound;
                    leave_mag = std::abs(delta);
                }
            }
            if (!std::isfinite(theta)) return LpStatus::Unbounded;

            ++iterations_;
            ++phase_iters;
            x_[q] += dir * theta;
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = at(r, q);
                if (a != 0.0) x_[basis_[r]] -= a * dir * theta;
            }
            if (!leave) {
                // Bound flip: snap to the bound exactly.
                x_[q] = dir > 0 ? up_[q] : lo_[q];
                continue;
            }
            const std::size_t r = *leave;
            x_[basis_[r]] = leave_bound;
            pivot(r, q, nz);
            if (iterations_ % kRefreshEvery == 0) refresh_basic_values();
        }
    }

    void pivot(std::size_t r, std::size_t q, std::vector<std::size_t> & nz)
    {
        double * prow = &tab_[r * total_];
        const double inv = 1.0 / prow[q];
        nz.clear();
        for (std::size_t j = 0; j < total_; ++j) {
            if (prow[j] != 0.0 && !dead_[j]) {
                prow[j] *= inv;
                nz.push_back(j);
            }
        }
        prow[q] = 1.0;
        beta_[r] *= inv;
        // Dense pivot rows are cheaper to apply contiguously; retired columns
        // then pick up junk, which is never read.
        const bool dense = nz.size() * 3 > total_;
        if (dense) {
            for (std::size_t j = 0; j < total_; ++j)
                if (dead_[j]) prow[j] = 0.0;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double * row = &tab_[i * total_];
            const double f = row[q];
            if (f == 0.0) continue;
            if (dense) {
                for (std::size_t j = 0; j < total_; ++j) row[j] -= f * prow[j];
            } else {
                for (std::size_t j : nz) row[j] -= f * prow[j];
            }
            row[q] = 0.0;
            beta_[i] -= f * beta_[r];
        }
        const double fd = d_[q];
        if (fd != 0.0) {
            for (std::size_t j : nz) d_[j] -= fd * prow[j];
        }
        d_[q] = 0.0;

        const std::size_t out = basis_[r];
        pos_[out] = -1;
        basis_[r] = q;
        pos_[q] = static_cast<long>(r);
        if (lo_[out] == up_[out] || out >= art_begin_) retire(out);
    }

    // A nonbasic column that can never re-enter: fold its value into beta
    // and stop updating it.
    void retire(std::size_t j)
    {
        if (x_[j] != 0.0) {
            for (std::size_t i = 0; i < m_; ++i) beta_[i] -= at(i, j) * x_[j];
        }
        dead_[j] = 1;
    }

    // x_B = beta - T_N x_N, from the tableau.
    void refresh_basic_values()
    {
        for (std::size_t r = 0; r < m_; ++r) {
            const double * row = &tab_[r * total_];
            double v = beta_[r];
            for (std::size_t j = 0; j < total_; ++j) {
                if (pos_[j] < 0 && !dead_[j] && x_[j] != 0.0 && row[j] != 0.0) v -= row[j] * x_[j];
            }
            x_[basis_[r]] = v;
        }
    }

    void drive_out_artificials()
    {
        std::vector<std::size_t> nz;
        nz.reserve(total_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < art_begin_) continue;
            std::optional<std::size_t> best;
            double best_mag = 1e-7;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (pos_[j] >= 0 || dead_[j]) continue;
                if (std::abs(at(r, j)) > best_mag) {
                    best_mag = std::abs(at(r, j));
                    best = j;
                }
            }
            if (best) {
                // d_ is stale between phases; price() runs again afterwards.
                d_.assign(total_, 0.0);
                x_[basis_[r]] = 0.0;
                pivot(r, *best, nz);
            }
        }
    }

    // Recompute basic values with a fresh LU solve of B x_B = b - N x_N on
    // the original columns, removing drift accumulated by the tableau.
    void polish()
    {
        const std::size_t m = m_;
        std::vector<double> orig(m * total_, 0.0);
        std::vector<double> rhs(m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            const LpRow & row = p_.rows[live_rows_[r]];
            rhs[r] = row.rhs;
            for (const auto & [col, coeff] : row.terms) orig[r * total_ + col] += coeff;
            orig[r * total_ + n_ + r] = 1.0;
        }
        for (std::size_t k = 0; k < art_row_.size(); ++k) {
            const std::size_t r = art_row_[k];
            orig[r * total_ + art_begin_ + k] = art_row_sign_[r];
        }

        std::vector<double> bmat(m * m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t j = 0; j < total_; ++j) {
                if (pos_[j] < 0 && x_[j] != 0.0) rhs[r] -= orig[r * total_ + j] * x_[j];
            }
            for (std::size_t c = 0; c < m; ++c) bmat[r * m + c] = orig[r * total_ + basis_[c]];
        }

        // Gaussian elimination with partial pivoting.
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < m; ++i) {
                if (std::abs(bmat[i * m + k]) > std::abs(bmat[piv * m + k])) piv = i;
            }
            if (std::abs(bmat[piv * m + k]) < 1e-14) return;
            if (piv != k) {
                for (std::size_t j = 0; j < m; ++j) std::swap(bmat[k * m + j], bmat[piv * m + j]);
                std::swap(rhs[k], rhs[piv]);
            }
            for (std::size_t i = k + 1; i < m; ++i) {
                const double f = bmat[i * m + k] / bmat[k * m + k];
                if (f == 0.0) continue;
                for (std::size_t j = k; j < m; ++j) bmat[i * m + j] -= f * bmat[k * m + j];
                rhs[i] -= f * rhs[k];
            }
        }
        std::vector<double> xb(m);
        for (std::size_t k = m; k-- > 0;) {
            double v = rhs[k];
            for (std::size_t j = k + 1; j < m; ++j) v -= bmat[k * m + j] * xb[j];
            xb[k] = v / bmat[k * m + k];
        }
        for (std::size_t c = 0; c < m; ++c) x_[basis_[c]] = xb[c];
    }

    const LpProblem & p_;
    Tolerances tol_;
    std::vector<std::size_t> live_rows_;
    bool trivially_infeasible_ = false;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t num_art_ = 0;
    std::size_t art_begin_ = 0;
    std::size_t total_ = 0;
    std::size_t iterations_ = 0;
    std::size_t max_iter_ = 0;
    std::size_t bland_after_ = 0;

    std::vector<double> tab_;
    std::vector<double> beta_;
    std::vector<double> lo_, up_, x_, d_;
    std::vector<long> pos_;
    std::vector<char> dead_;
    std::vector<std::size_t> basis_;
    std::vector<double> art_row_sign_;
    std::vector<std::size_t> art_row_;
};

} // namespace

LpSolution solve(const LpProblem & problem, const Tolerances & tol, const SimplexOptions & options)
{
    problem.validate();
    tol.validate();
    return Simplex(problem, tol, options).run();
}

} // namespace relureach
