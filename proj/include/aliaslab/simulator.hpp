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

#include "aliaslab/access_trace.hpp"
#include "aliaslab/bytes.hpp"
#include "aliaslab/leak_model.hpp"
#include "aliaslab/rng.hpp"
#include "aliaslab/trace_set.hpp"

#include <cstddef>
#include <vector>

namespace aliaslab {

struct ConflictCount {
    /// Reads inside the jammed word.
    std::size_t word_hits = 0;
    /// Reads in the jammed cache line but another word.
    std::size_t line_hits = 0;

    friend bool operator==(const ConflictCount&, const ConflictCount&) = default;
};

/// Counts reads that alias the jammed word; prefetch reads are ignored.
/// Throws std::domain_error if jam_word is outside the table.
ConflictCount conflict_count(const AccessTrace& trace, int jam_word, unsigned word_bytes = kWordBytes);

/// base + word_penalty * word_hits + line_penalty * line_hits + noise.
/// The draws taken from `rng` do not depend on the model, so one stream can
/// be replayed under several models.
double simulate_time(const ConflictCount& conflicts, const LeakModel& model, SplitMix64& rng);
double simulate_time(const AccessTrace& trace, const LeakModel& model, SplitMix64& rng);

/// Plaintext of record `index` in a run seeded with `seed`; the same stream
/// then feeds that record's noise.
Block record_plaintext(std::uint64_t seed, std::uint64_t index);

/// Runs the victim on n seeded random plaintexts under `model`.
TraceSet generate_traceset(CipherId cipher, std::size_t n, const CipherKey& key, const LeakModel& model,
                           std::uint64_t seed);

struct FilterResult {
    TraceSet kept;
    double pass_fraction = 0.0;
};

/// Keeps records with |time - mean| <= radius. Throws on an empty set.
FilterResult filter_outliers(const TraceSet& ts, double radius = 2000.0);

struct ScanReport {
    /// Mean victim time with each table word jammed.
    std::vector<double> mean_time;
    /// Mean time with the writer aliasing no table word.
    double baseline_mean = 0.0;
    int best_word = 0;
    /// All offsets produced the same mean (no usable signal).
    bool flat = false;
};

/// Jams every table word in turn over the same n_per_offset inputs and
/// returns the word with the highest mean time (ties: lowest word).
ScanReport scan_jam_offsets(CipherId cipher, const CipherKey& key, const LeakModel& model_template,
                            std::size_t n_per_offset, std::uint64_t seed = 0);

/// A stub of `total_reads` reads, `conflicting_reads` of them into the jammed
/// word and the rest into a cache line other than the jammed one.
AccessTrace conflict_stub_trace(unsigned conflicting_reads, unsigned total_reads, int jam_word);

} // namespace aliaslab
