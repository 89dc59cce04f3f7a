/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/numerics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace relureach {

namespace {

void require_finite(std::span<const double> values, const char * what)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw NonFiniteError(std::string(what) + " entry " + std::to_string(i)
                                 + " is not finite");
        }
    }
}

} // namespace

Vec::Vec(std::vector<double> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) throw DimensionError("vector must be non-empty", 1, 0);
    require_finite(entries_, "vector");
}

Vec::Vec(std::initializer_list<double> entries) : Vec(std::vector<double>(entries)) {}

Vec Vec::filled(std::size_t n, double value)
{
    return Vec(std::vector<double>(n, value));
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major))
{
    if (rows_ == 0 || cols_ == 0) throw Error("matrix must be at least 1x1");
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("matrix storage", rows_ * cols_, data_.size());
    }
    require_finite(data_, "matrix");
}

Mat Mat::from_rows(const std::vector<std::vector<double>> & rows)
{
    if (rows.empty()) throw Error("matrix must be at least 1x1");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto & r : rows) {
        if (r.size() != cols) throw DimensionError("ragged matrix row", cols, r.size());
        data.insert(data.end(), r.begin(), r.end());
    }
    return Mat(rows.size(), cols, std::move(data));
}

Mat Mat::identity(std::size_t n)
{
    std::vector<double> data(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
    return Mat(n, n, std::move(data));
}

Mat Mat::zeros(std::size_t rows, std::size_t cols)
{
    return Mat(rows, cols, std::vector<double>(rows * cols, 0.0));
}

bool Interval::is_finite() const noexcept
{
    return std::isfinite(lo) && std::isfinite(hi);
}

void Tolerances::validate() const
{
    if (!(feas_tol > 0.0) || !(int_tol > 0.0) || !(eps_budget > 0.0)) {
        throw Error("tolerances must be strictly positive");
    }
    if (!(int_tol < 0.5)) throw Error("integrality tolerance must be below 0.5");
}

Vec mat_vec(const Mat & w, const Vec & x)
{
    if (w.cols() != x.dim()) {
        throw DimensionError("mat_vec: matrix has " + std::to_string(w.rows()) + "x"
                                 + std::to_string(w.cols()) + " shape, vector operand",
                             w.cols(), x.dim());
    }
    std::vector<double> out(w.rows(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
        const auto row = w.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
    return Vec(std::move(out));
}

Vec relu_vec(const Vec & x)
{
    std::vector<double> out(x.begin(), x.end());
    for (double & v : out) v = std::max(v, 0.0);
    return Vec(std::move(out));
}

std::string format_double(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

} // namespace relureach
