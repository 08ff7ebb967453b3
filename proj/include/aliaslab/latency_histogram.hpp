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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace aliaslab {

/// Bucketed latencies of probe batches (8 accesses each).
struct LatencyHistogram {
    std::uint64_t bucket_cycles = 1;
    /// (bucket lower bound in cycles, count), ascending, empty buckets omitted.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> buckets;
    std::uint64_t total = 0;
    double median = 0.0;
    double stddev = 0.0;

    static LatencyHistogram from_samples(std::span<const std::uint64_t> latencies, std::uint64_t bucket_cycles = 1);

    /// Median and standard deviation recomputed from bucket lower bounds.
    std::pair<double, double> summary_from_buckets() const;
};

/// Latencies between consecutive 32-bit timestamps (wrap-around safe).
std::vector<std::uint64_t> batch_latencies(std::span<const std::uint32_t> stamps);

/// `bucket_cycles,count`
void write_histogram_csv(std::ostream& out, const LatencyHistogram& h);
/// `conflicting_reads,mean_cycles`
void write_curve_csv(std::ostream& out, std::span<const double> mean_cycles);

} // namespace aliaslab
