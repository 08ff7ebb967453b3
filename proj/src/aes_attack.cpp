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

#include "aliaslab/aes_attack.hpp"

#include "aliaslab/access_trace.hpp"
#include "aliaslab/aes_ct.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace aliaslab {

namespace {

void check_jam_word(int jam_word)
{
    if (jam_word < 0 || jam_word >= static_cast<int>(kTableWords))
        throw std::domain_error("jam word " + std::to_string(jam_word) + " outside [0, 63]");
}

void check_trace_set(const TraceSet& ts)
{
    if (ts.cipher != CipherId::AesCt)
        throw std::domain_error("AES attack needs an aes-ct trace set");
    if (ts.empty())
        throw std::domain_error("AES attack needs at least one trace");
}

} // namespace

std::uint8_t predict_access(std::uint8_t c_byte, std::uint8_t k_guess, int jam_word)
{
    check_jam_word(jam_word);
    return table_word_of(aes_inv_sbox(c_byte ^ k_guess)) == static_cast<unsigned>(jam_word) ? 1 : 0;
}

HypothesisMatrix build_hypothesis(const TraceSet& ts, int byte_pos, int jam_word)
{
    if (ts.cipher != CipherId::AesCt)
        throw std::domain_error("AES hypothesis needs an aes-ct trace set");
    if (byte_pos < 0 || byte_pos > 15)
        throw std::domain_error("byte position must lie in [0, 15]");
    check_jam_word(jam_word);
    HypothesisMatrix a(ts.size(), 256);
    for (std::size_t row = 0; row < ts.size(); ++row) {
        const std::uint8_t c = ts.records[row].ciphertext[static_cast<std::size_t>(byte_pos)];
        for (unsigned k = 0; k < 256; ++k)
            a(row, k) = predict_access(c, static_cast<std::uint8_t>(k), jam_word);
    }
    return a;
}

CorrelationTable aes_last_round_correlations(std::span<const TraceRecord> records, int jam_word)
{
    check_jam_word(jam_word);
    // Ciphertext values whose inverse S-box image lands in the jammed word,
    // up to the key: candidate k predicts a hit iff c ^ k is one of these.
    std::array<std::uint8_t, kWordBytes> hit_values{};
    for (unsigned j = 0; j < kWordBytes; ++j)
        hit_values[j] = aes_sbox()[static_cast<unsigned>(jam_word) * kWordBytes + j];

    std::array<std::array<double, 256>, 16> count{};
    std::array<std::array<double, 256>, 16> time_sum{};
    double sum = 0.0, sum_sq = 0.0;
    const double shift = records.empty() ? 0.0 : records.front().time;
    for (const auto& rec : records) {
        const double y = rec.time - shift;
        sum += y;
        sum_sq += y * y;
        for (std::size_t b = 0; b < 16; ++b) {
            count[b][rec.ciphertext[b]] += 1.0;
            time_sum[b][rec.ciphertext[b]] += y;
        }
    }

    const double n = static_cast<double>(records.size());
    CorrelationTable table(16, std::vector<Correlation>(256));
    for (std::size_t b = 0; b < 16; ++b) {
        for (unsigned k = 0; k < 256; ++k) {
            double ones = 0.0, sum_ones = 0.0;
            for (auto v : hit_values) {
                const unsigned c = v ^ k;
                ones += count[b][c];
                sum_ones += time_sum[b][c];
            }
            table[b][k] = indicator_correlation(n, sum, sum_sq, ones, sum_ones);
        }
    }
    return table;
}

RankReport attack_aes(const TraceSet& ts, const AesAttackConfig& cfg, std::optional<Block> true_last_round_key)
{
    check_trace_set(ts);
    check_jam_word(cfg.jam_word);
    bool constant = true;
    for (const auto& r : ts.records)
        constant = constant && r.time == ts.records.front().time;
    if (constant)
        throw std::domain_error("time vector is constant: no leakage to correlate");

    std::vector<std::uint32_t> truth;
    if (true_last_round_key)
        truth.assign(true_last_round_key->begin(), true_last_round_key->end());

    const AttackFn attack = [&](std::span<const TraceRecord> prefix) {
        return aes_last_round_correlations(prefix, cfg.jam_word);
    };
    if (truth.empty())
        return make_report(attack(ts.records));
    return rank_history(ts, attack, cfg.checkpoints, truth);
}

Block best_last_round_key(const RankReport& report)
{
    if (report.bytes.size() != 16)
        throw std::domain_error("AES report must cover 16 bytes");
    Block k{};
    for (std::size_t b = 0; b < 16; ++b)
        k[b] = static_cast<std::uint8_t>(report.bytes[b].best());
    return k;
}

} // namespace aliaslab
