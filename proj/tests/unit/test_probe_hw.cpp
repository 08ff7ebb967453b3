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

#include "aliaslab/probe.hpp"

#include <gtest/gtest.h>

using namespace aliaslab;
using namespace aliaslab::probe;

namespace {

std::optional<CpuPair> usable_pair()
{
    try {
        require_support();
    } catch (const ProbeUnavailable&) {
        return std::nullopt;
    }
    const auto pairs = sibling_cpu_pairs();
    if (pairs.empty())
        return std::nullopt;
    return pairs.front();
}

} // namespace

TEST(ProbeParse, Names)
{
    EXPECT_EQ(parse_mode("RaW"), Mode::RaW);
    EXPECT_EQ(parse_mode("curve"), Mode::ReadLatencyCurve);
    EXPECT_EQ(parse_offset_class("same-word"), OffsetClass::SameWord);
    EXPECT_THROW(parse_mode("xyz"), std::invalid_argument);
    EXPECT_THROW(parse_offset_class("xyz"), std::invalid_argument);
}

TEST(ProbeOffsets, Classes)
{
    EXPECT_EQ(probe_and_sibling_offsets(OffsetClass::SameWord).first,
              probe_and_sibling_offsets(OffsetClass::SameWord).second);
    const auto [p, s] = probe_and_sibling_offsets(OffsetClass::SameLineDifferentWord);
    EXPECT_EQ(p / 64, s / 64);
    EXPECT_NE(p / 4, s / 4);
    const auto [q, t] = probe_and_sibling_offsets(OffsetClass::DifferentLine);
    EXPECT_NE(q / 64, t / 64);
}

TEST(ProbeHw, HistogramTotals)
{
    const auto pair = usable_pair();
    if (!pair)
        GTEST_SKIP() << "no rdtscp or no sibling hyper-threads";
    ProbeConfig cfg;
    cfg.cpus = *pair;
    cfg.iterations = 20000;
    for (Mode m : {Mode::RaR, Mode::WaR, Mode::RaW, Mode::RawW}) {
        cfg.mode = m;
        const auto h = run_probe(cfg);
        EXPECT_EQ(h.total, cfg.iterations);
        const auto [median, stddev] = h.summary_from_buckets();
        EXPECT_DOUBLE_EQ(median, h.median);
        EXPECT_NEAR(stddev, h.stddev, 1e-6 * (1 + h.stddev));
    }
}

TEST(ProbeHw, SameWordWritesSlowReads)
{
    const auto pair = usable_pair();
    if (!pair)
        GTEST_SKIP() << "no rdtscp or no sibling hyper-threads";
    ProbeConfig cfg;
    cfg.cpus = *pair;
    cfg.mode = Mode::RaW;
    cfg.offset_class = OffsetClass::SameWord;
    const double same = run_probe(cfg).median;
    cfg.offset_class = OffsetClass::DifferentLine;
    const double other = run_probe(cfg).median;
    EXPECT_GT(same, other);
}

TEST(ProbeHw, CurveHasOneEntryPerConflictCount)
{
    const auto pair = usable_pair();
    if (!pair)
        GTEST_SKIP() << "no rdtscp or no sibling hyper-threads";
    ProbeConfig cfg;
    cfg.cpus = *pair;
    cfg.iterations = 2000;
    const auto curve = read_latency_curve(cfg);
    EXPECT_EQ(curve.size(), 65u);
}
