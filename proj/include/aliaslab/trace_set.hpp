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
#include "aliaslab/leak_model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace aliaslab {

struct TraceRecord {
    Block ciphertext{};
    double time = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

namespace trace_flags {
inline constexpr std::uint8_t kSgxProfile = 0x01;
inline constexpr std::uint8_t kSynthetic = 0x02;
inline constexpr std::uint8_t kFiltered = 0x04;
} // namespace trace_flags

/// The attacker's view: (ciphertext, time) observations.
struct TraceSet {
    CipherId cipher = CipherId::AesCt;
    std::uint8_t flags = 0;
    std::uint64_t seed = 0;
    /// Model used to simulate the times; not persisted.
    std::optional<LeakModel> model;
    std::vector<TraceRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    std::vector<double> times() const;
};

/// Raised on malformed trace files (bad magic, truncation, unknown cipher).
class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/*
 * Binary trace file, little-endian:
 *   "MJT1" | u8 cipher_id | u8 flags | u64 count | u64 seed |
 *   count * (16 ciphertext bytes | f64 time)
 */
void write_traceset(std::ostream& out, const TraceSet& ts);
TraceSet read_traceset(std::istream& in);
void save_traceset(const std::filesystem::path& path, const TraceSet& ts);
TraceSet load_traceset(const std::filesystem::path& path);

/// CSV export with header `ciphertext_hex,time_cycles`; times use 17
/// significant digits so that import reproduces them exactly.
void write_traceset_csv(std::ostream& out, const TraceSet& ts);
/// Reads records back; cipher/flags/seed are not carried by the CSV form.
std::vector<TraceRecord> read_traceset_csv(std::istream& in);

} // namespace aliaslab
