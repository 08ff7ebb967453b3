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

#include "aliaslab/sm4_attack.hpp"

#include "aliaslab/access_trace.hpp"
#include "aliaslab/sm4_cn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aliaslab {

namespace {

constexpr int kSixBitCandidates = 64;
constexpr int kCompletions = 256;

void check_jam_word(int jam_word)
{
    if (jam_word < 0 || jam_word >= static_cast<int>(kTableWords))
        throw std::domain_error("jam word " + std::to_string(jam_word) + " outside [0, 63]");
}

/// Grouped leakage sums, keyed by (top 6 bits of an S-box input byte).
struct GroupSums {
    std::array<std::array<double, kSixBitCandidates>, 4> count{};
    std::array<std::array<double, kSixBitCandidates>, 4> time_sum{};

    void add(std::uint32_t v, double y)
    {
        for (int i = 0; i < 4; ++i) {
            const unsigned g = word_byte(v, i) >> 2;
            count[i][g] += 1.0;
            time_sum[i][g] += y;
        }
    }
};

struct LeakSums {
    double n = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
};

std::vector<Correlation> six_bit_correlations(const GroupSums& g, int byte, const LeakSums& leak, int jam_word)
{
    std::vector<Correlation> out(kSixBitCandidates);
    for (int c = 0; c < kSixBitCandidates; ++c) {
        // (v ^ k) >> 2 == jam  <=>  v >> 2 == jam ^ (k >> 2)
        const int group = jam_word ^ c;
        out[c] = indicator_correlation(leak.n, leak.sum, leak.sum_sq, g.count[byte][group], g.time_sum[byte][group]);
    }
    return out;
}

struct Ranked {
    std::uint8_t best = 0;
    std::array<std::uint8_t, kSixBitRunnersUp> runners_up{};
    double best_r = 0.0;
};

/// Best non-degenerate candidate and the next ones in rank order (ties: lower
/// index; degenerate candidates last).
Ranked top_candidates(const std::vector<Correlation>& values)
{
    std::vector<std::uint8_t> order(values.size());
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    const std::size_t keep = std::min(order.size(), kSixBitRunnersUp + 1);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::uint8_t a, std::uint8_t b) {
                          if (values[a].degenerate != values[b].degenerate)
                              return !values[a].degenerate;
                          if (values[a].r != values[b].r)
                              return values[a].r > values[b].r;
                          return a < b;
                      });
    Ranked out;
    out.best = order[0];
    out.best_r = values[order[0]].degenerate ? 0.0 : values[order[0]].r;
    for (std::size_t j = 0; j < kSixBitRunnersUp; ++j)
        out.runners_up[j] = order[std::min(j + 1, keep - 1)];
    return out;
}

PartialRoundKey six_bit_key(const std::array<std::uint8_t, 4>& six)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t(six[i] << 2) << (24 - 8 * i);
    return {v, kSixBitMask};
}

void check_prerequisites(const Sm4Recovered& recovered, int round)
{
    if (round < 1 || round > 32)
        throw std::domain_error("round must lie in [1, 32]");
    if (round == 32) {
        if (!recovered.full_keys.empty() || recovered.partial)
            throw std::domain_error("round 32 must be attacked first, with nothing recovered");
        return;
    }
    if (!recovered.partial || recovered.partial->known_mask != kSixBitMask)
        throw std::domain_error("round " + std::to_string(round) + " needs the 24 known bits of k" +
                                std::to_string(round + 1));
    if (static_cast<int>(recovered.full_keys.size()) != 31 - round)
        throw std::domain_error("round " + std::to_string(round) + " needs full keys k32..k" +
                                std::to_string(round + 2) + ", have " + std::to_string(recovered.full_keys.size()));
}

LeakSums leak_sums(std::span<const TraceRecord> records, double shift)
{
    LeakSums s;
    s.n = static_cast<double>(records.size());
    for (const auto& r : records) {
        const double y = r.time - shift;
        s.sum += y;
        s.sum_sq += y * y;
    }
    return s;
}

} // namespace

std::uint32_t spread_completion(std::uint8_t completion)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t((completion >> (6 - 2 * i)) & 3u) << (24 - 8 * i);
    return v;
}

Sm4RoundState sm4_ciphertext_state(const Block& ct)
{
    return {{load_be32(&ct[12]), load_be32(&ct[8]), load_be32(&ct[4]), load_be32(&ct[0])}};
}

Sm4RoundState eq1_step(const Sm4RoundState& state, std::uint32_t round_key, std::uint32_t* x)
{
    const std::uint32_t in = state.input_sum() ^ round_key;
    if (x)
        *x = in;
    const auto& w = state.words;
    return {{sm4_round_function(in) ^ w[3], w[0], w[1], w[2]}};
}

Eq1Result eq1_eval(const Block& ciphertext, std::span<const std::uint32_t> known_keys)
{
    if (known_keys.empty() || known_keys.size() > 32)
        throw std::domain_error("eq1_eval needs between 1 and 32 round keys from k32 downward");
    Eq1Result out;
    out.state = sm4_ciphertext_state(ciphertext);
    for (std::size_t i = 0; i < known_keys.size(); ++i)
        out.state = eq1_step(out.state, known_keys[i], &out.x);
    out.round = 33 - static_cast<int>(known_keys.size());
    return out;
}

std::uint8_t sm4_predict_access(std::uint8_t v_byte, std::uint8_t key_byte, int jam_word)
{
    check_jam_word(jam_word);
    return table_word_of(static_cast<std::uint8_t>(v_byte ^ key_byte)) == static_cast<unsigned>(jam_word) ? 1 : 0;
}

CorrelationTable sm4_round32_correlations(std::span<const TraceRecord> records, int jam_word)
{
    check_jam_word(jam_word);
    const double shift = records.empty() ? 0.0 : records.front().time;
    GroupSums g;
    for (const auto& r : records)
        g.add(sm4_ciphertext_state(r.ciphertext).input_sum(), r.time - shift);
    const LeakSums leak = leak_sums(records, shift);
    CorrelationTable table;
    for (int i = 0; i < 4; ++i)
        table.push_back(six_bit_correlations(g, i, leak, jam_word));
    return table;
}

Sm4RoundResult attack_round(std::span<const TraceRecord> records, const Sm4Recovered& recovered, int round,
                            int jam_word)
{
    check_jam_word(jam_word);
    check_prerequisites(recovered, round);
    if (records.size() < 2)
        throw std::domain_error("SM4 round attack needs at least two traces");

    Sm4RoundResult result;
    result.round = round;
    const double shift = records.front().time;
    const LeakSums leak = leak_sums(records, shift);

    if (round == 32) {
        const CorrelationTable table = sm4_round32_correlations(records, jam_word);
        for (int i = 0; i < 4; ++i) {
            result.six_bit_correlations[i] = table[i];
            const Ranked t = top_candidates(table[i]);
            result.six_bit[i] = t.best;
            result.runners_up[i] = t.runners_up;
        }
        result.key = six_bit_key(result.six_bit);
        return result;
    }

    // Group sums for every completion of k_{r+1}.
    std::vector<GroupSums> groups(kCompletions);
    const std::uint32_t partial = recovered.partial->value & kSixBitMask;
    for (const auto& rec : records) {
        Sm4RoundState state = sm4_ciphertext_state(rec.ciphertext);
        for (const auto k : recovered.full_keys)
            state = eq1_step(state, k);
        const std::uint32_t sum_prev = state.input_sum() ^ partial;
        const auto& w = state.words;
        // After round r + 1 the next input sum is T(x_{r+1}) ^ w4 ^ w1 ^ w2.
        const std::uint32_t carried = w[3] ^ w[0] ^ w[1];
        const double y = rec.time - shift;
        for (int u = 0; u < kCompletions; ++u) {
            const std::uint32_t x_prev = sum_prev ^ spread_completion(static_cast<std::uint8_t>(u));
            groups[u].add(sm4_round_function(x_prev) ^ carried, y);
        }
    }

    result.completion_scores.assign(kCompletions, 0.0);
    result.completion_six_bit.assign(kCompletions, {});
    result.completion_runners_up.assign(kCompletions, {});
    int best_u = 0;
    for (int u = 0; u < kCompletions; ++u) {
        double score = 0.0;
        for (int i = 0; i < 4; ++i) {
            const Ranked t = top_candidates(six_bit_correlations(groups[u], i, leak, jam_word));
            result.completion_six_bit[u][i] = t.best;
            result.completion_runners_up[u][i] = t.runners_up;
            score += t.best_r;
        }
        result.completion_scores[u] = score;
        if (score > result.completion_scores[best_u])
            best_u = u;
    }

    result.completion = static_cast<std::uint8_t>(best_u);
    result.completed_previous_key = partial | spread_completion(static_cast<std::uint8_t>(best_u));
    result.six_bit = result.completion_six_bit[best_u];
    result.runners_up = result.completion_runners_up[best_u];
    for (int i = 0; i < 4; ++i)
        result.six_bit_correlations[i] = six_bit_correlations(groups[best_u], i, leak, jam_word);
    result.key = six_bit_key(result.six_bit);
    return result;
}

std::size_t sm4_predicted_word_hits(const Block& ciphertext, const std::array<std::uint32_t, 32>& round_keys,
                                    int jam_word, int first_round, int last_round)
{
    check_jam_word(jam_word);
    if (first_round < 1 || last_round > 32 || first_round > last_round)
        throw std::domain_error("round range must lie within [1, 32]");
    std::size_t hits = 0;
    Sm4RoundState state = sm4_ciphertext_state(ciphertext);
    for (int r = 32; r >= first_round; --r) {
        std::uint32_t x = 0;
        state = eq1_step(state, round_keys[r - 1], &x);
        if (r > last_round)
            continue;
        for (int i = 0; i < 4; ++i)
            hits += table_word_of(word_byte(x, i)) == static_cast<unsigned>(jam_word) ? 1 : 0;
    }
    return hits;
}

namespace {

struct Path {
    Sm4Recovered recovered;
    std::vector<Sm4RoundResult> rounds;
    double score = 0.0;
};

/// Replaces the chosen completion of `base` with alternative `u`.
Sm4RoundResult with_completion(const Sm4RoundResult& base, const Sm4Recovered& recovered, int u)
{
    Sm4RoundResult alt = base;
    alt.completion = static_cast<std::uint8_t>(u);
    alt.completed_previous_key =
        (recovered.partial->value & kSixBitMask) | spread_completion(static_cast<std::uint8_t>(u));
    alt.six_bit = base.completion_six_bit[u];
    alt.runners_up = base.completion_runners_up[u];
    alt.key = six_bit_key(alt.six_bit);
    // Per-candidate correlations are only kept for the best completion.
    if (u != *base.completion)
        for (auto& c : alt.six_bit_correlations)
            c.clear();
    return alt;
}

/// The result itself, then variants with the six-bit candidate of one byte
/// replaced by one of its runners-up, best runner-up first.
std::vector<Sm4RoundResult> six_bit_variants(const Sm4RoundResult& res, std::size_t limit)
{
    std::vector<Sm4RoundResult> out{res};
    for (std::size_t j = 0; j < kSixBitRunnersUp; ++j)
        for (int i = 0; i < 4 && out.size() < limit; ++i) {
            if (res.runners_up[i][j] == res.six_bit[i])
                continue;
            Sm4RoundResult v = res;
            v.six_bit[i] = res.runners_up[i][j];
            v.key = six_bit_key(v.six_bit);
            out.push_back(std::move(v));
        }
    return out;
}

Path extend(const Path& p, const Sm4RoundResult& res)
{
    Path next = p;
    if (res.completed_previous_key)
        next.recovered.full_keys.push_back(*res.completed_previous_key);
    next.recovered.partial = res.key;
    if (!res.completion_scores.empty())
        next.score += res.completion_scores[*res.completion];
    next.rounds.push_back(res);
    return next;
}

std::string hex32(std::uint32_t v)
{
    std::ostringstream os;
    os << std::hex;
    os.width(8);
    os.fill('0');
    os << v;
    return os.str();
}


Sm4AttackOutcome beam_search(std::span<const TraceRecord> records, const Sm4AttackConfig& cfg, std::size_t beam)
{
    Sm4AttackOutcome outcome;
    std::vector<Path> paths;
    for (const auto& v : six_bit_variants(attack_round(records, Sm4Recovered{}, 32, cfg.jam_word), beam))
        paths.push_back(extend(Path{}, v));
    for (int round = 31; round >= 28; --round) {
        std::vector<Path> next;
        for (const auto& p : paths) {
            const Sm4RoundResult best = attack_round(records, p.recovered, round, cfg.jam_word);
            std::vector<int> order(best.completion_scores.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return best.completion_scores[a] > best.completion_scores[b];
            });
            for (std::size_t j = 0; j < std::min(beam, order.size()); ++j)
                for (const auto& v : six_bit_variants(with_completion(best, p.recovered, order[j]), beam))
                    next.push_back(extend(p, v));
        }
        std::stable_sort(next.begin(), next.end(), [](const Path& a, const Path& b) { return a.score > b.score; });
        if (next.size() > beam)
            next.resize(beam);
        paths = std::move(next);
    }

    std::vector<double> times;
    times.reserve(records.size());
    for (const auto& r : records)
        times.push_back(r.time);

    std::ostringstream diag;
    for (std::size_t pi = 0; pi < paths.size(); ++pi) {
        const Path& p = paths[pi];
        // full_keys = k32, k31, k30, k29; partial = 24 bits of k28.
        const auto& fk = p.recovered.full_keys;
        const CipherKey key = sm4_recover_master_key(fk[3], fk[2], fk[1], fk[0]);
        const Sm4RoundKeys schedule = sm4_key_schedule(key);
        const bool consistent = (schedule[27] & kSixBitMask) == (p.recovered.partial->value & kSixBitMask);

        std::vector<double> predicted(records.size());
        for (std::size_t i = 0; i < records.size(); ++i)
            predicted[i] = static_cast<double>(sm4_predicted_word_hits(records[i].ciphertext, schedule, cfg.jam_word, 1, 28));
        const Correlation c = pearson(predicted, times);
        const double z = c.degenerate ? 0.0 : c.r * std::sqrt(static_cast<double>(records.size()));

        std::optional<bool> pair_ok;
        if (cfg.known_pair)
            pair_ok = Sm4CnCipher(key).encrypt(cfg.known_pair->first) == cfg.known_pair->second;

        if (pi == 0) {
            outcome.rounds = p.rounds;
            outcome.candidate_key = key;
            outcome.verification_z = z;
            outcome.schedule_consistent = consistent;
            outcome.known_pair_ok = pair_ok;
        }
        diag << "path " << pi << ": candidate " << key.hex() << " k29..k32 = " << hex32(fk[3]) << ' '
             << hex32(fk[2]) << ' ' << hex32(fk[1]) << ' ' << hex32(fk[0]) << "; k28 six-bit "
             << (consistent ? "consistent" : "inconsistent") << " with schedule (recovered "
             << hex32(p.recovered.partial->value) << ", schedule " << hex32(schedule[27] & kSixBitMask)
             << "); rounds 1..28 z = " << z;
        if (pair_ok)
            diag << "; known pair " << (*pair_ok ? "ok" : "MISMATCH");
        diag << '\n';

        if (z >= cfg.verify_z && pair_ok.value_or(true)) {
            outcome.success = true;
            outcome.key = key;
            outcome.rounds = p.rounds;
            outcome.candidate_key = key;
            outcome.verification_z = z;
            outcome.schedule_consistent = consistent;
            outcome.known_pair_ok = pair_ok;
            outcome.diagnostic = diag.str();
            return outcome;
        }
    }
    for (const auto& r : outcome.rounds) {
        diag << "round " << r.round << ": six-bit k" << r.round << " = " << hex32(r.key.value);
        if (r.completion)
            diag << ", completion of k" << r.round + 1 << " = " << int(*r.completion) << " (score "
                 << r.completion_scores[*r.completion] << ')';
        diag << '\n';
    }
    outcome.diagnostic = "verification failed\n" + diag.str();
    return outcome;
}

} // namespace

Sm4AttackOutcome sm4_full_attack(const TraceSet& ts, const Sm4AttackConfig& cfg)
{
    if (ts.cipher != CipherId::Sm4Cn)
        throw std::domain_error("SM4 attack needs an sm4-cn trace set");
    check_jam_word(cfg.jam_word);
    if (ts.size() < 2)
        throw std::domain_error("SM4 attack needs at least two traces");
    const std::span<const TraceRecord> records =
        std::span<const TraceRecord>(ts.records).first(std::min(ts.size(), std::max<std::size_t>(2, cfg.traces_per_round)));

    bool constant = true;
    for (const auto& r : records)
        constant = constant && r.time == records.front().time;
    if (constant) {
        Sm4AttackOutcome outcome;
        outcome.diagnostic = "time vector is constant: no leakage to correlate";
        return outcome;
    }

    // Greedy first; the wider beam only runs when the greedy key fails.
    Sm4AttackOutcome greedy = beam_search(records, cfg, 1);
    if (greedy.success || cfg.beam_width <= 1)
        return greedy;
    Sm4AttackOutcome wide = beam_search(records, cfg, cfg.beam_width);
    if (!wide.success)
        wide.diagnostic = "greedy pass:\n" + greedy.diagnostic + "beam pass:\n" + wide.diagnostic;
    return wide;
}

} // namespace aliaslab
