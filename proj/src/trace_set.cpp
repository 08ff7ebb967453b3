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

#include "aliaslab/trace_set.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace aliaslab {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'J', 'T', '1'};
constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 8 + 8;
constexpr std::size_t kRecordBytes = 16 + 8;

void put_u64(std::uint8_t* p, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_u64(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace

std::vector<double> TraceSet::times() const
{
    std::vector<double> t;
    t.reserve(records.size());
    for (const auto& r : records)
        t.push_back(r.time);
    return t;
}

void write_traceset(std::ostream& out, const TraceSet& ts)
{
    std::array<std::uint8_t, kHeaderBytes> header{};
    std::memcpy(header.data(), kMagic.data(), kMagic.size());
    header[4] = static_cast<std::uint8_t>(ts.cipher);
    header[5] = ts.flags;
    put_u64(&header[6], ts.records.size());
    put_u64(&header[14], ts.seed);
    out.write(reinterpret_cast<const char*>(header.data()), header.size());

    std::array<std::uint8_t, kRecordBytes> rec{};
    for (const auto& r : ts.records) {
        std::memcpy(rec.data(), r.ciphertext.data(), 16);
        put_u64(&rec[16], std::bit_cast<std::uint64_t>(r.time));
        out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
    }
    if (!out)
        throw std::runtime_error("failed writing trace set");
}

TraceSet read_traceset(std::istream& in)
{
    std::array<std::uint8_t, kHeaderBytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in.gcount() != static_cast<std::streamsize>(header.size()))
        throw TraceFormatError("trace file truncated in header");
    if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0)
        throw TraceFormatError("bad magic: not an MJT1 trace file");
    if (header[4] > static_cast<std::uint8_t>(CipherId::Sm4Cn))
        throw TraceFormatError("unknown cipher id " + std::to_string(header[4]));

    TraceSet ts;
    ts.cipher = static_cast<CipherId>(header[4]);
    ts.flags = header[5];
    const std::uint64_t count = get_u64(&header[6]);
    ts.seed = get_u64(&header[14]);

    // Grow incrementally so a corrupt count cannot trigger a huge allocation.
    std::array<std::uint8_t, kRecordBytes> rec{};
    for (std::uint64_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(rec.data()), rec.size());
        if (in.gcount() != static_cast<std::streamsize>(rec.size()))
            throw TraceFormatError("trace file truncated: expected " + std::to_string(count) + " records, got " +
                                   std::to_string(i));
        TraceRecord r;
        std::memcpy(r.ciphertext.data(), rec.data(), 16);
        r.time = std::bit_cast<double>(get_u64(&rec[16]));
        ts.records.push_back(r);
    }
    return ts;
}

void save_traceset(const std::filesystem::path& path, const TraceSet& ts)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_traceset(out, ts);
}

TraceSet load_traceset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_traceset(in);
}

void write_traceset_csv(std::ostream& out, const TraceSet& ts)
{
    out << "ciphertext_hex,time_cycles\n";
    char buf[64];
    for (const auto& r : ts.records) {
        std::snprintf(buf, sizeof buf, "%.17g", r.time);
        out << to_hex(r.ciphertext) << ',' << buf << '\n';
    }
}

std::vector<TraceRecord> read_traceset_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "ciphertext_hex,time_cycles")
        throw TraceFormatError("missing CSV header 'ciphertext_hex,time_cycles'");
    std::vector<TraceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma != 32)
            throw TraceFormatError("malformed CSV row: " + line);
        TraceRecord r;
        r.ciphertext = block_from_hex(std::string_view(line).substr(0, 32));
        const char* first = line.data() + comma + 1;
        const char* last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, r.time);
        if (ec != std::errc{} || ptr != last)
            throw TraceFormatError("malformed time in CSV row: " + line);
        out.push_back(r);
    }
    return out;
}

} // namespace aliaslab
