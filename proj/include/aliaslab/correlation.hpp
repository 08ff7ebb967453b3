/*
 * SPDX-FileCopyrightText: Copyright 2026 The aliaslab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aliaslab {

/// Sample Pearson coefficient; `degenerate` marks a zero-variance input, in
/// which case `r` is 0.
struct Correlation {
    double r = 0.0;
    bool degenerate = false;
};

/// Throws std::invalid_argument unless both vectors have the same length >= 2.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Predicted access counts: one row per trace, one column per key candidate
/// (the access-profile matrix).
class HypothesisMatrix {
public:
    HypothesisMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    std::uint8_t operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    std::span<const std::uint8_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> data_;
};

/*
 * Single-pass correlation of many hypothesis columns against one leakage
 * vector. Keeps sum, sum of squares and cross sums per column in extended
 * precision, so memory is O(candidates) however many rows stream through.
 * Leakage values are shifted by the first observation before summing.
 */
class CorrelationAccumulator {
public:
    explicit CorrelationAccumulator(std::size_t candidates);

    void add(std::span<const std::uint8_t> hypotheses, double leak);

    std::size_t count() const { return n_; }
    std::size_t candidates() const { return sum_x_.size(); }
    std::vector<Correlation> result() const;

private:
    std::size_t n_ = 0;
    double shift_ = 0.0;
    long double sum_y_ = 0.0L;
    long double sum_yy_ = 0.0L;
    std::vector<long double> sum_x_;
    std::vector<long double> sum_xx_;
    std::vector<long double> sum_xy_;
};

/// Correlation per column of A against L. Throws std::domain_error when the
/// row count and leakage length differ.
std::vector<Correlation> correlate_candidates(const HypothesisMatrix& a, std::span<const double> leak);

/*
 * Correlation of a 0/1 indicator with the leakage, from grouped sums: the
 * indicator is 1 on `ones` observations whose leakage sums to `sum_ones`.
 * `sum` and `sum_sq` cover all `n` observations.
 */
Correlation indicator_correlation(double n, double sum, double sum_sq, double ones, double sum_ones);

} // namespace aliaslab
