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
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace aliaslab;

TEST(Pearson, Basics)
{
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{8, 6, 4, 2}, c{5, 5, 5, 5};
    EXPECT_NEAR(pearson(x, y).r, 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, z).r, -1.0, 1e-15);
    const auto d = pearson(x, c);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d.r, 0.0);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
    EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Pearson, MatchesTwoPassReference)
{
    std::mt19937_64 g(31);
    std::normal_distribution<double> nd(0, 1);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x(1000), y(1000);
        for (int i = 0; i < 1000; ++i) {
            x[i] = nd(g);
            y[i] = 0.3 * x[i] + nd(g) + 1e6;
        }
        EXPECT_NEAR(pearson(x, y).r, oracle::two_pass_pearson(x, y), 1e-12);
    }
}

TEST(Accumulator, EqualsTwoPassWithLargeOffset)
{
    std::mt19937_64 g(32);
    std::normal_distribution<double> nd(0, 30);
    const std::size_t rows = 20000, cols = 16;
    HypothesisMatrix a(rows, cols);
    std::vector<double> leak(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        int hits = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            a(i, c) = static_cast<std::uint8_t>(g() % 5 == 0 ? (c % 3) + 1 : 0);
            hits += a(i, c);
        }
        leak[i] = 14600.0 + 10.0 * a(i, 3) + nd(g);
        (void)hits;
    }
    const auto fast = correlate_candidates(a, leak);
    for (std::size_t c = 0; c < cols; ++c) {
        const double ref = oracle::two_pass_pearson(a.column(c), leak);
        EXPECT_LE(std::abs(fast[c].r - ref), 1e-12 * std::max(1.0, std::abs(ref))) << c;
    }
    EXPECT_GT(fast[3].r, 0.1);
}

TEST(Accumulator, ColumnEqualToLeakIsOne)
{
    HypothesisMatrix a(6, 2);
    std::vector<double> leak;
    for (std::size_t i = 0; i < 6; ++i) {
        a(i, 0) = static_cast<std::uint8_t>(i % 3);
        leak.push_back(static_cast<double>(i % 3));
    }
    const auto r = correlate_candidates(a, leak);
    EXPECT_NEAR(r[0].r, 1.0, 1e-12);
    EXPECT_TRUE(r[1].degenerate);
}

TEST(Accumulator, DimensionMismatch)
{
    HypothesisMatrix a(3, 2);
    EXPECT_THROW(correlate_candidates(a, std::vector<double>{1, 2}), std::domain_error);
    CorrelationAccumulator acc(2);
    EXPECT_THROW(acc.add(std::vector<std::uint8_t>{1}, 1.0), std::domain_error);
}

TEST(Accumulator, EmptyOrSingleRowIsDegenerate)
{
    CorrelationAccumulator acc(3);
    for (const auto& c : acc.result())
        EXPECT_TRUE(c.degenerate);
    acc.add(std::vector<std::uint8_t>{1, 0, 1}, 4.0);
    for (const auto& c : acc.result())
        EXPECT_TRUE(c.degenerate);
}

TEST(IndicatorCorrelation, EqualsPearsonOfIndicator)
{
    std::mt19937_64 g(33);
    std::normal_distribution<double> nd(0, 1);
    std::vector<double> ind(5000), y(5000);
    double sum = 0, sum_sq = 0, ones = 0, sum_ones = 0;
    for (int i = 0; i < 5000; ++i) {
        ind[i] = g() % 7 == 0 ? 1.0 : 0.0;
        y[i] = ind[i] * 0.5 + nd(g);
        sum += y[i];
        sum_sq += y[i] * y[i];
        ones += ind[i];
        sum_ones += ind[i] * y[i];
    }
    EXPECT_NEAR(indicator_correlation(5000, sum, sum_sq, ones, sum_ones).r, oracle::two_pass_pearson(ind, y), 1e-10);
    EXPECT_TRUE(indicator_correlation(5000, sum, sum_sq, 0, 0).degenerate);
    EXPECT_TRUE(indicator_correlation(5000, sum, sum_sq, 5000, sum).degenerate);
}
