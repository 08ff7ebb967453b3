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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace aliaslab {

/// A 128-bit cipher block (plaintext or ciphertext).
using Block = std::array<std::uint8_t, 16>;

/// 128-bit key shared by both victims.
struct CipherKey {
    Block bytes{};

    /// Parses exactly 32 hex digits; throws std::invalid_argument otherwise.
    static CipherKey from_hex(std::string_view hex);
    /// Throws std::invalid_argument unless `raw` holds exactly 16 bytes.
    static CipherKey from_bytes(std::span<const std::uint8_t> raw);

    std::string hex() const;

    friend bool operator==(const CipherKey&, const CipherKey&) = default;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
Block block_from_hex(std::string_view hex);

inline std::uint32_t load_be32(const std::uint8_t* p)
{
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

inline void store_be32(std::uint8_t* p, std::uint32_t v)
{
    p[0] = static_cast<std::uint8_t>(v >> 24);
    p[1] = static_cast<std::uint8_t>(v >> 16);
    p[2] = static_cast<std::uint8_t>(v >> 8);
    p[3] = static_cast<std::uint8_t>(v);
}

/// Byte i of a 32-bit word, i = 0 being the most significant byte.
constexpr std::uint8_t word_byte(std::uint32_t w, int i)
{
    return static_cast<std::uint8_t>(w >> (24 - 8 * i));
}

} // namespace aliaslab
