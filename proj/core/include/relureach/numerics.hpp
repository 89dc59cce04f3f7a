/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "relureach/error.hpp"

namespace relureach {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense real vector. Non-empty and finite by construction.
class Vec
{
  public:
    explicit Vec(std::vector<double> entries);
    Vec(std::initializer_list<double> entries);

    /// n copies of value.
    static Vec filled(std::size_t n, double value);

    std::size_t dim() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }

    std::span<const double> values() const noexcept { return entries_; }
    const std::vector<double> & to_vector() const noexcept { return entries_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    friend bool operator==(const Vec &, const Vec &) = default;

  private:
    std::vector<double> entries_;
};

/// Dense row-major real matrix. At least 1x1 and finite by construction.
class Mat
{
  public:
    Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Mat from_rows(const std::vector<std::vector<double>> & rows);
    static Mat identity(std::size_t n);
    static Mat zeros(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const
    {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    friend bool operator==(const Mat &, const Mat &) = default;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Closed interval with possibly infinite ends.
struct Interval
{
    double lo = -kInf;
    double hi = kInf;

    bool is_finite() const noexcept;
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    double width() const noexcept { return hi - lo; }

    friend bool operator==(const Interval &, const Interval &) = default;
};

/// Numeric tolerances shared by the solver stack.
struct Tolerances
{
    /// Maximum row or bound violation accepted from the LP solver.
    double feas_tol = 1e-7;
    /// A binary within int_tol of 0 or 1 counts as integral.
    double int_tol = 1e-6;
    /// Upper bound t on the sum of epsilon slacks.
    double eps_budget = 1e-6;

    /// Throws Error unless every field is strictly positive and int_tol < 0.5.
    void validate() const;
};

inline constexpr double kDefaultEpsBudget = 1e-6;
/// Budget used when some inputs are binary valued.
inline constexpr double kBinaryInputEpsBudget = 1e-4;
inline constexpr double kOracleFeasTol = 1e-6;
inline constexpr double kBigMFloor = 1e-6;

/// result_i = sum_j W_ij x_j, accumulated in ascending j.
Vec mat_vec(const Mat & w, const Vec & x);

/// Componentwise max(x_i, 0).
Vec relu_vec(const Vec & x);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

} // namespace relureach
