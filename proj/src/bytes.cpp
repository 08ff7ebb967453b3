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

#include "aliaslab/bytes.hpp"

#include <algorithm>
#include <stdexcept>

namespace aliaslab {

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

Block block_from_hex(std::string_view hex)
{
    if (hex.size() != 32)
        throw std::invalid_argument("expected 32 hex digits, got " + std::to_string(hex.size()));
    Block out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex digit in '" + std::string(hex) + "'");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

CipherKey CipherKey::from_hex(std::string_view hex)
{
    return CipherKey{block_from_hex(hex)};
}

CipherKey CipherKey::from_bytes(std::span<const std::uint8_t> raw)
{
    if (raw.size() != 16)
        throw std::invalid_argument("cipher key must be 16 bytes, got " + std::to_string(raw.size()));
    CipherKey k;
    std::copy(raw.begin(), raw.end(), k.bytes.begin());
    return k;
}

std::string CipherKey::hex() const
{
    return to_hex(bytes);
}

} // namespace aliaslab
