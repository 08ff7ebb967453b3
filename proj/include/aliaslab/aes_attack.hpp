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

#include "aliaslab/bytes.hpp"
#include "aliaslab/correlation.hpp"
#include "aliaslab/ranking.hpp"
#include "aliaslab/trace_set.hpp"

#include <optional>
#include <span>
#include <vector>

namespace aliaslab {

struct AesAttackConfig {
    /// Jammed table word; 0 is the block of indices 0..3.
    int jam_word = 0;
    std::vector<std::size_t> checkpoints;
};

/// 1 iff the last-round lookup for ciphertext byte `c` under round-10 key
/// byte `k_guess` falls into the jammed word: S^-1(c ^ k) / 4 == jam_word.
std::uint8_t predict_access(std::uint8_t c_byte, std::uint8_t k_guess, int jam_word);

/// 256-column access profile for one ciphertext byte position.
HypothesisMatrix build_hypothesis(const TraceSet& ts, int byte_pos, int jam_word);

/*
 * Correlations of all 16 x 256 last-round key candidates. Because the
 * prediction depends only on c ^ k, the traces are grouped by ciphertext byte
 * value (count and time sums per value) and each candidate's indicator
 * correlation is read off the groups in O(1) per candidate.
 */
CorrelationTable aes_last_round_correlations(std::span<const TraceRecord> records, int jam_word);

/*
 * Last-round key recovery. Candidates are bytes of the round-10 key; pass the
 * true round-10 key to get ranks and a rank history at cfg.checkpoints.
 * Throws std::domain_error for a non-AES or empty set or a constant time
 * vector.
 */
RankReport attack_aes(const TraceSet& ts, const AesAttackConfig& cfg, std::optional<Block> true_last_round_key = {});

/// Top candidate of each byte, as a round-10 key.
Block best_last_round_key(const RankReport& report);

} // namespace aliaslab
