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

#include "aliaslab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aliaslab {

namespace {

Correlation from_moments(double cov, double var_x, double var_y)
{
    if (!(var_x > 0.0) || !(var_y > 0.0))
        return {0.0, true};
    return {std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0), false};
}

} // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + ")");
    if (x.size() < 2)
        throw std::invalid_argument("pearson: need at least two observations");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    return from_moments(sxy, sxx, syy);
}

std::vector<double> HypothesisMatrix::column(std::size_t c) const
{
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        out[r] = data_[r * cols_ + c];
    return out;
}

CorrelationAccumulator::CorrelationAccumulator(std::size_t candidates)
    : sum_x_(candidates, 0.0L), sum_xx_(candidates, 0.0L), sum_xy_(candidates, 0.0L)
{
}

void CorrelationAccumulator::add(std::span<const std::uint8_t> hypotheses, double leak)
{
    if (hypotheses.size() != sum_x_.size())
        throw std::domain_error("hypothesis row has " + std::to_string(hypotheses.size()) + " entries, expected " +
                                std::to_string(sum_x_.size()));
    if (n_ == 0)
        shift_ = leak;
    const long double y = static_cast<long double>(leak) - static_cast<long double>(shift_);
    ++n_;
    sum_y_ += y;
    sum_yy_ += y * y;
    for (std::size_t c = 0; c < hypotheses.size(); ++c) {
        if (hypotheses[c] == 0)
            continue;
        const long double x = hypotheses[c];
        sum_x_[c] += x;
        sum_xx_[c] += x * x;
        sum_xy_[c] += x * y;
    }
}

std::vector<Correlation> CorrelationAccumulator::result() const
{
    std::vector<Correlation> out(sum_x_.size());
    if (n_ < 2) {
        std::fill(out.begin(), out.end(), Correlation{0.0, true});
        return out;
    }
    const long double n = static_cast<long double>(n_);
    const long double var_y = n * sum_yy_ - sum_y_ * sum_y_;
    for (std::size_t c = 0; c < out.size(); ++c) {
        const long double var_x = n * sum_xx_[c] - sum_x_[c] * sum_x_[c];
        const long double cov = n * sum_xy_[c] - sum_x_[c] * sum_y_;
        if (!(var_x > 0.0L) || !(var_y > 0.0L)) {
            out[c] = {0.0, true};
            continue;
        }
        out[c] = {std::clamp(static_cast<double>(cov / std::sqrt(var_x * var_y)), -1.0, 1.0), false};
    }
    return out;
}

std::vector<Correlation> correlate_candidates(const HypothesisMatrix& a, std::span<const double> leak)
{
    if (a.rows() != leak.size())
        throw std::domain_error("hypothesis matrix has " + std::to_string(a.rows()) + " rows but leakage has " +
                                std::to_string(leak.size()) + " entries");
    CorrelationAccumulator acc(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        acc.add(a.row(r), leak[r]);
    return acc.result();
}

Correlation indicator_correlation(double n, double sum, double sum_sq, double ones, double sum_ones)
{
    return from_moments(n * sum_ones - ones * sum, n * ones - ones * ones, n * sum_sq - sum * sum);
}

} // namespace aliaslab
