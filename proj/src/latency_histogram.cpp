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

#include "aliaslab/latency_histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace aliaslab {

namespace {

double median_of_sorted(const std::vector<std::uint64_t>& v)
{
    if (v.empty())
        return 0.0;
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1)
        return static_cast<double>(v[mid]);
    return 0.5 * (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid]));
}

} // namespace

LatencyHistogram LatencyHistogram::from_samples(std::span<const std::uint64_t> latencies, std::uint64_t bucket_cycles)
{
    if (bucket_cycles == 0)
        throw std::invalid_argument("bucket width must be positive");
    LatencyHistogram h;
    h.bucket_cycles = bucket_cycles;
    h.total = latencies.size();

    std::map<std::uint64_t, std::uint64_t> counts;
    for (auto l : latencies)
        ++counts[l / bucket_cycles * bucket_cycles];
    h.buckets.assign(counts.begin(), counts.end());

    std::vector<std::uint64_t> sorted(latencies.begin(), latencies.end());
    std::sort(sorted.begin(), sorted.end());
    h.median = median_of_sorted(sorted);
    if (!sorted.empty()) {
        double mean = 0.0;
        for (auto l : sorted)
            mean += static_cast<double>(l);
        mean /= static_cast<double>(sorted.size());
        double ss = 0.0;
        for (auto l : sorted)
            ss += (static_cast<double>(l) - mean) * (static_cast<double>(l) - mean);
        h.stddev = std::sqrt(ss / static_cast<double>(sorted.size()));
    }
    return h;
}

std::pair<double, double> LatencyHistogram::summary_from_buckets() const
{
    std::vector<std::uint64_t> expanded;
    expanded.reserve(total);
    for (const auto& [lo, n] : buckets)
        expanded.insert(expanded.end(), n, lo);
    if (expanded.empty())
        return {0.0, 0.0};
    double mean = 0.0;
    for (auto v : expanded)
        mean += static_cast<double>(v);
    mean /= static_cast<double>(expanded.size());
    double ss = 0.0;
    for (auto v : expanded)
        ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    return {median_of_sorted(expanded), std::sqrt(ss / static_cast<double>(expanded.size()))};
}

std::vector<std::uint64_t> batch_latencies(std::span<const std::uint32_t> stamps)
{
    std::vector<std::uint64_t> out;
    for (std::size_t i = 1; i < stamps.size(); ++i)
        out.push_back(static_cast<std::uint32_t>(stamps[i] - stamps[i - 1]));
    return out;
}

void write_histogram_csv(std::ostream& out, const LatencyHistogram& h)
{
    out << "bucket_cycles,count\n";
    for (const auto& [lo, n] : h.buckets)
        out << lo << ',' << n << '\n';
}

void write_curve_csv(std::ostream& out, std::span<const double> mean_cycles)
{
    out << "conflicting_reads,mean_cycles\n";
    char buf[64];
    for (std::size_t k = 0; k < mean_cycles.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", mean_cycles[k]);
        out << k << ',' << buf << '\n';
    }
}

} // namespace aliaslab
