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

#include "aliaslab/simulator.hpp"

#include "aliaslab/aes_ct.hpp"
#include "aliaslab/parallel.hpp"
#include "aliaslab/sm4_cn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace aliaslab {

namespace {

Block draw_plaintext(SplitMix64& rng)
{
    Block pt;
    for (int half = 0; half < 2; ++half) {
        const std::uint64_t v = rng();
        for (int i = 0; i < 8; ++i)
            pt[8 * half + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return pt;
}

class Victim {
public:
    Victim(CipherId cipher, const CipherKey& key) : cipher_(cipher), aes_(key), sm4_(key) {}

    Block encrypt(const Block& pt, AccessTrace& trace) const
    {
        trace.clear();
        return cipher_ == CipherId::AesCt ? aes_.encrypt(pt, &trace) : sm4_.encrypt(pt, &trace);
    }

    std::size_t trace_capacity() const { return cipher_ == CipherId::AesCt ? 640 : 132; }

private:
    CipherId cipher_;
    AesCtCipher aes_;
    Sm4CnCipher sm4_;
};

bool is_synthetic(const LeakModel& m)
{
    return m.base_cycles == 0.0 && m.line_penalty == 0.0 && m.word_penalty == 1.0 && m.noise_sigma == 0.0 &&
           m.contamination.rate == 0.0;
}

void check_jam_word(int jam_word, unsigned word_bytes)
{
    if (word_bytes == 0 || 64 % word_bytes != 0)
        throw std::domain_error("word granularity must divide the 64-byte cache line");
    const int words = static_cast<int>(256 / word_bytes);
    if (jam_word < 0 || jam_word >= words)
        throw std::domain_error("jam word " + std::to_string(jam_word) + " outside [0, " +
                                std::to_string(words - 1) + "]");
}

} // namespace

ConflictCount conflict_count(const AccessTrace& trace, int jam_word, unsigned word_bytes)
{
    check_jam_word(jam_word, word_bytes);
    const unsigned jam = static_cast<unsigned>(jam_word);
    const unsigned jam_line = jam * word_bytes / kCacheLineBytes;
    ConflictCount c;
    for (const auto& a : trace) {
        if (a.prefetch)
            continue;
        if (a.offset / word_bytes == jam)
            ++c.word_hits;
        else if (a.offset / kCacheLineBytes == jam_line)
            ++c.line_hits;
    }
    return c;
}

double simulate_time(const ConflictCount& conflicts, const LeakModel& model, SplitMix64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double z = gauss(rng);
    const double tail_draw = unit(rng);
    const double shift_draw = unit(rng);

    double t = model.base_cycles + model.word_penalty * static_cast<double>(conflicts.word_hits) +
               model.line_penalty * static_cast<double>(conflicts.line_hits) + model.noise_sigma * z;
    const auto& tail = model.contamination;
    if (tail_draw < tail.rate)
        t += tail.min_shift + (tail.max_shift - tail.min_shift) * shift_draw;
    return t;
}

double simulate_time(const AccessTrace& trace, const LeakModel& model, SplitMix64& rng)
{
    return simulate_time(conflict_count(trace, model.jam_word, model.word_bytes), model, rng);
}

Block record_plaintext(std::uint64_t seed, std::uint64_t index)
{
    auto rng = substream(seed, index);
    return draw_plaintext(rng);
}

TraceSet generate_traceset(CipherId cipher, std::size_t n, const CipherKey& key, const LeakModel& model,
                           std::uint64_t seed)
{
    if (n == 0)
        throw std::domain_error("trace count must be at least 1");
    model.validate();

    TraceSet ts;
    ts.cipher = cipher;
    ts.seed = seed;
    ts.model = model;
    if (model.profile == Profile::Sgx)
        ts.flags |= trace_flags::kSgxProfile;
    if (is_synthetic(model))
        ts.flags |= trace_flags::kSynthetic;
    ts.records.resize(n);

    const Victim victim(cipher, key);
    detail::parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        AccessTrace trace;
        trace.accesses.reserve(victim.trace_capacity());
        for (std::size_t i = begin; i < end; ++i) {
            auto rng = substream(seed, i);
            const Block pt = draw_plaintext(rng);
            const Block ct = victim.encrypt(pt, trace);
            ts.records[i] = {ct, simulate_time(trace, model, rng)};
        }
    });
    return ts;
}

FilterResult filter_outliers(const TraceSet& ts, double radius)
{
    if (ts.empty())
        throw std::domain_error("cannot filter an empty trace set");
    if (radius < 0.0)
        throw std::domain_error("filter radius must be non-negative");

    double sum = 0.0;
    for (const auto& r : ts.records)
        sum += r.time;
    const double mean = sum / static_cast<double>(ts.size());

    FilterResult out;
    out.kept.cipher = ts.cipher;
    out.kept.flags = ts.flags | trace_flags::kFiltered;
    out.kept.seed = ts.seed;
    out.kept.model = ts.model;
    std::copy_if(ts.records.begin(), ts.records.end(), std::back_inserter(out.kept.records),
                 [&](const TraceRecord& r) { return std::abs(r.time - mean) <= radius; });
    out.pass_fraction = static_cast<double>(out.kept.size()) / static_cast<double>(ts.size());
    return out;
}

ScanReport scan_jam_offsets(CipherId cipher, const CipherKey& key, const LeakModel& model_template,
                            std::size_t n_per_offset, std::uint64_t seed)
{
    if (n_per_offset == 0)
        throw std::domain_error("scan needs at least one trace per offset");
    model_template.validate();
    const unsigned wb = model_template.word_bytes;
    const std::size_t words = static_cast<std::size_t>(model_template.table_words());
    const std::size_t words_per_line = kCacheLineBytes / wb;

    // Every offset sees the same inputs and the same noise draws, so
    // differences between offsets come from the conflicts alone.
    std::vector<double> sums(words, 0.0);
    double baseline_sum = 0.0;
    const Victim victim(cipher, key);
    AccessTrace trace;
    std::vector<std::size_t> hist(words);
    for (std::size_t i = 0; i < n_per_offset; ++i) {
        auto rng = substream(seed, i);
        victim.encrypt(draw_plaintext(rng), trace);
        std::fill(hist.begin(), hist.end(), 0);
        for (const auto& a : trace)
            if (!a.prefetch)
                ++hist[a.offset / wb];

        for (std::size_t w = 0; w < words; ++w) {
            const std::size_t line_first = (w / words_per_line) * words_per_line;
            std::size_t line_total = 0;
            for (std::size_t j = 0; j < words_per_line; ++j)
                line_total += hist[line_first + j];
            auto local = rng;
            sums[w] += simulate_time(ConflictCount{hist[w], line_total - hist[w]}, model_template, local);
        }
        auto local = rng;
        baseline_sum += simulate_time(ConflictCount{}, model_template, local);
    }

    ScanReport report;
    report.mean_time.resize(words);
    const double n = static_cast<double>(n_per_offset);
    for (std::size_t w = 0; w < words; ++w) {
        report.mean_time[w] = sums[w] / n;
        if (report.mean_time[w] > report.mean_time[report.best_word])
            report.best_word = static_cast<int>(w);
    }
    report.baseline_mean = baseline_sum / n;
    const auto [lo, hi] = std::minmax_element(report.mean_time.begin(), report.mean_time.end());
    report.flat = (*hi - *lo) <= 1e-9 * std::max(1.0, std::abs(*hi));
    return report;
}

AccessTrace conflict_stub_trace(unsigned conflicting_reads, unsigned total_reads, int jam_word)
{
    check_jam_word(jam_word, kWordBytes);
    if (conflicting_reads > total_reads)
        throw std::domain_error("more conflicting reads than reads in the stub");
    const unsigned jam_offset = static_cast<unsigned>(jam_word) * kWordBytes;
    const unsigned other_line = (line_of(jam_offset) + 1) % 4;
    AccessTrace trace;
    for (unsigned i = 0; i < total_reads; ++i) {
        const unsigned offset =
            i < conflicting_reads ? jam_offset + i % kWordBytes : other_line * kCacheLineBytes + i % kCacheLineBytes;
        trace.record(static_cast<std::uint8_t>(offset), 1, static_cast<std::uint8_t>(i % 256));
    }
    return trace;
}

} // namespace aliaslab
