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

#include "aliaslab/correlation.hpp"
#include "aliaslab/trace_set.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace aliaslab {

struct CandidateScore {
    std::uint32_t candidate = 0;
    Correlation correlation;
};

/// Candidates of one key byte, best first.
struct ByteRanking {
    std::vector<CandidateScore> sorted;
    std::optional<std::uint32_t> true_candidate;
    /// 1-based rank of `true_candidate`, when one was given.
    std::optional<std::size_t> true_rank;

    std::uint32_t best() const { return sorted.front().candidate; }
    std::size_t rank_of(std::uint32_t candidate) const;
};

struct RankHistoryPoint {
    std::size_t observations = 0;
    std::vector<std::size_t> ranks;
};

struct RankReport {
    std::vector<ByteRanking> bytes;
    std::vector<RankHistoryPoint> history;

    /// Bytes whose true candidate ranks first.
    std::size_t recovered() const;
    /// Sum of log2(rank) over bytes with a known true candidate: the bits of
    /// key space left to enumerate.
    double log2_rank_sum() const;
};

/// Descending by correlation; degenerate candidates last; ties broken by the
/// numerically smaller candidate.
ByteRanking rank_candidates(std::span<const Correlation> values, std::optional<std::uint32_t> true_candidate = {});

/// Correlations per byte position for one prefix of the observations.
using CorrelationTable = std::vector<std::vector<Correlation>>;
using AttackFn = std::function<CorrelationTable(std::span<const TraceRecord>)>;

/*
 * Runs `attack` on each prefix named in `checkpoints` (ascending, at most the
 * trace count) and records the rank of each true candidate. The report's
 * per-byte rankings come from the full set. Throws std::domain_error on bad
 * checkpoints or when the true candidates do not match the byte count.
 */
RankReport rank_history(const TraceSet& ts, const AttackFn& attack, std::span<const std::size_t> checkpoints,
                        std::span<const std::uint32_t> true_candidates);

/// Builds a report from one correlation table.
RankReport make_report(const CorrelationTable& table, std::span<const std::uint32_t> true_candidates = {});

/*
 * Best-first enumeration of full keys by increasing product of per-byte
 * ranks, calling `accept` on each until it returns true or `budget` keys
 * were tried. Returns the accepted key and the number of keys tried.
 */
struct EnumerationResult {
    std::optional<std::vector<std::uint32_t>> key;
    std::uint64_t tried = 0;
};
EnumerationResult enumerate_keys(const RankReport& report, std::uint64_t budget,
                                 const std::function<bool(std::span<const std::uint32_t>)>& accept);

/// `byte_index,candidate,correlation,rank`, one row per candidate.
void write_rank_csv(std::ostream& out, const RankReport& report);
/// `observations,byte_index,rank`, one row per checkpoint and byte.
void write_history_csv(std::ostream& out, const RankReport& report);

} // namespace aliaslab
