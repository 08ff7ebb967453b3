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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aliaslab {

/// Runner-up six-bit candidates kept per byte for the beam.
inline constexpr std::size_t kSixBitRunnersUp = 2;
using SixBitRunnersUp = std::array<std::array<std::uint8_t, kSixBitRunnersUp>, 4>;

/// Bits of a round key learned from the jammed-word channel: the top 6 bits
/// of every byte.
inline constexpr std::uint32_t kSixBitMask = 0xfcfcfcfcu;

struct PartialRoundKey {
    std::uint32_t value = 0;
    std::uint32_t known_mask = 0;

    bool full() const { return known_mask == 0xffffffffu; }
    friend bool operator==(const PartialRoundKey&, const PartialRoundKey&) = default;
};

/// Spreads an 8-bit completion over the low 2 bits of each key byte; bits
/// 7..6 of `completion` go to byte 0 (the most significant).
std::uint32_t spread_completion(std::uint8_t completion);

/*
 * Backward view of the last rounds. The state (w1, w2, w3, w4) starts as the
 * ciphertext words (c1, c2, c3, c4), where c1 is the LAST 32-bit word of the
 * ciphertext block and c4 the first. For round r:
 *   x_r = w1 ^ w2 ^ w3 ^ k_r
 *   (w1, w2, w3, w4) <- (L(s(x_r^1), ..., s(x_r^4)) ^ w4, w1, w2, w3)
 */
struct Sm4RoundState {
    std::array<std::uint32_t, 4> words{};

    std::uint32_t input_sum() const { return words[0] ^ words[1] ^ words[2]; }
    friend bool operator==(const Sm4RoundState&, const Sm4RoundState&) = default;
};

Sm4RoundState sm4_ciphertext_state(const Block& ciphertext);

/// One backward round: returns the next state and stores x_r in `x` if given.
Sm4RoundState eq1_step(const Sm4RoundState& state, std::uint32_t round_key, std::uint32_t* x = nullptr);

struct Eq1Result {
    /// Round r whose S-box input was computed.
    int round = 32;
    std::uint32_t x = 0;
    /// State after round r, ready for round r - 1.
    Sm4RoundState state;
};

/// Replays rounds 32, 31, ... with `known_keys` = {k32, k31, ...}; x is the
/// S-box input of the last round replayed. Throws std::domain_error unless
/// 1..32 keys are given.
Eq1Result eq1_eval(const Block& ciphertext, std::span<const std::uint32_t> known_keys);

/// 1 iff S-box input byte v ^ k falls into the jammed word.
std::uint8_t sm4_predict_access(std::uint8_t v_byte, std::uint8_t key_byte, int jam_word);

struct Sm4AttackConfig {
    int jam_word = 0;
    /// Observations used for every round decision.
    std::size_t traces_per_round = 40000;
    /*
     * Paths kept per round. The greedy path (width 1) is tried first; when
     * its key fails verification the attack reruns with this width, branching on
     * the best completions and on replacing one byte of the six-bit key by one of
     * its runners-up, and every surviving path goes through verification.
     */
    std::size_t beam_width = 32;
    /// Minimum significance (r * sqrt(n)) of the rounds 1..28 prediction.
    double verify_z = 5.0;
    /// Optional known (plaintext, ciphertext) pair checked on success.
    std::optional<std::pair<Block, Block>> known_pair;
};

/// Round keys recovered so far, from round 32 downward.
struct Sm4Recovered {
    std::vector<std::uint32_t> full_keys;
    std::optional<PartialRoundKey> partial;

    /// Round the next attack_round call targets.
    int next_round() const { return 32 - static_cast<int>(full_keys.size()) - (partial ? 1 : 0); }
};

struct Sm4RoundResult {
    int round = 32;
    /// Top 6 bits of each byte of k_r.
    PartialRoundKey key;
    std::array<std::uint8_t, 4> six_bit{};
    /// Correlations of the 64 six-bit candidates per byte, evaluated under the
    /// chosen completion of k_{r+1}.
    std::array<std::vector<Correlation>, 4> six_bit_correlations;
    /// Chosen 8-bit completion of k_{r+1} (rounds below 32 only).
    std::optional<std::uint8_t> completion;
    std::optional<std::uint32_t> completed_previous_key;
    /// Per completion: sum over the 4 bytes of the best six-bit correlation.
    std::vector<double> completion_scores;
    /// Per completion: best six-bit candidate of each byte.
    std::vector<std::array<std::uint8_t, 4>> completion_six_bit;
    /// Per completion: next-best six-bit candidates of each byte.
    std::vector<SixBitRunnersUp> completion_runners_up;
    /// Next-best six-bit candidates of each byte under the chosen completion.
    SixBitRunnersUp runners_up{};
};

/*
 * Attacks round r. At r = 32 the S-box input is c1 ^ c2 ^ c3 ^ k32 and the 64
 * six-bit candidates of each byte are correlated directly. Below 32 the 24
 * known bits of k_{r+1} are combined with each of the 256 completions, the
 * state is pushed through round r + 1, and the six-bit candidates of k_r are
 * scored under every completion; the completion with the highest summed
 * per-byte correlation wins.
 * Throws std::domain_error when `recovered` does not hold exactly the keys
 * above round r.
 */
Sm4RoundResult attack_round(std::span<const TraceRecord> records, const Sm4Recovered& recovered, int round,
                            int jam_word);

/// Six-bit candidate correlations of k32, one row per byte.
CorrelationTable sm4_round32_correlations(std::span<const TraceRecord> records, int jam_word);

struct Sm4AttackOutcome {
    bool success = false;
    std::optional<CipherKey> key;
    /// Rounds 32..28 of the best path.
    std::vector<Sm4RoundResult> rounds;
    /// Candidate master key of the best path, even when verification failed.
    std::optional<CipherKey> candidate_key;
    double verification_z = 0.0;
    bool schedule_consistent = false;
    std::optional<bool> known_pair_ok;
    std::string diagnostic;
};

/*
 * Rounds 32..28, then schedule inversion from k29..k32. A candidate key is
 * accepted when (a) the jammed-word hits it predicts for rounds 1..28, which
 * come from the inverted schedule rather than from the round attacks,
 * correlate with the times at z >= verify_z, and (b) the known pair, if any,
 * re-encrypts. Agreement of the schedule's k28 with the six-bit bits recovered
 * at round 28 is reported but not required. Otherwise success is false and
 * `diagnostic` says why.
 */
Sm4AttackOutcome sm4_full_attack(const TraceSet& ts, const Sm4AttackConfig& cfg);

/// Jammed-word hits of a decryption replay over rounds first_round..last_round.
std::size_t sm4_predicted_word_hits(const Block& ciphertext, const std::array<std::uint32_t, 32>& round_keys,
                                    int jam_word, int first_round = 1, int last_round = 32);

} // namespace aliaslab
