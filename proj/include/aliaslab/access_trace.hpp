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

#include <array>
#include <cstdint>
#include <vector>

namespace aliaslab {

/// 256-entry substitution table. Conceptually 4 cache lines of 64 bytes,
/// each line split into 16 words of 4 bytes.
using SboxTable = std::array<std::uint8_t, 256>;

inline constexpr unsigned kCacheLineBytes = 64;
inline constexpr unsigned kWordBytes = 4;
inline constexpr unsigned kTableWords = 256 / kWordBytes;

constexpr unsigned line_of(unsigned offset) { return offset / kCacheLineBytes; }
constexpr unsigned column_of(unsigned offset) { return offset % kCacheLineBytes; }
constexpr unsigned word_in_line(unsigned offset) { return column_of(offset) / kWordBytes; }
/// Word index within the whole table, in [0, 63].
constexpr unsigned table_word_of(unsigned offset) { return offset / kWordBytes; }

/// One S-box read performed by a victim.
struct SboxAccess {
    std::uint8_t offset = 0;
    /// Cipher round (1-based); 0 for cache-warming prefetches.
    std::uint8_t round = 0;
    /// State byte the lookup produces. AES: ciphertext-order byte index of the
    /// round output (0..15). SM4: byte of the S-box input word, 0 = MSB.
    std::uint8_t position = 0;
    /// Cache-warming read that does not depend on data.
    bool prefetch = false;

    friend bool operator==(const SboxAccess&, const SboxAccess&) = default;
};

/// Ordered S-box reads of one encryption: victim-side ground truth.
struct AccessTrace {
    std::vector<SboxAccess> accesses;

    std::size_t size() const { return accesses.size(); }
    bool empty() const { return accesses.empty(); }
    void clear() { accesses.clear(); }
    void record(std::uint8_t offset, std::uint8_t round, std::uint8_t position, bool prefetch = false)
    {
        accesses.push_back({offset, round, position, prefetch});
    }
    auto begin() const { return accesses.begin(); }
    auto end() const { return accesses.end(); }
    const SboxAccess& operator[](std::size_t i) const { return accesses[i]; }
};

} // namespace aliaslab
