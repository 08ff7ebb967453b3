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

#include <gtest/gtest.h>

#include <stdexcept>

using namespace aliaslab;

TEST(Bytes, HexRoundTrip)
{
    const auto k = CipherKey::from_hex("000102030405060708090a0b0c0d0e0f");
    for (int i = 0; i < 16; ++i)
        EXPECT_EQ(k.bytes[i], i);
    EXPECT_EQ(k.hex(), "000102030405060708090a0b0c0d0e0f");
    EXPECT_EQ(CipherKey::from_hex("2B7E151628AED2A6ABF7158809CF4F3C").hex(), "2b7e151628aed2a6abf7158809cf4f3c");
}

TEST(Bytes, RejectsBadHex)
{
    EXPECT_THROW(CipherKey::from_hex(""), std::invalid_argument);
    EXPECT_THROW(CipherKey::from_hex("00"), std::invalid_argument);
    EXPECT_THROW(CipherKey::from_hex("000102030405060708090a0b0c0d0e0f00"), std::invalid_argument);
    EXPECT_THROW(CipherKey::from_hex("zz0102030405060708090a0b0c0d0e0f"), std::invalid_argument);
    EXPECT_THROW(block_from_hex("0g"), std::invalid_argument);
}

TEST(Bytes, FromBytesNeedsSixteen)
{
    std::uint8_t raw[17] = {};
    EXPECT_THROW(CipherKey::from_bytes(std::span<const std::uint8_t>(raw, 15)), std::invalid_argument);
    EXPECT_THROW(CipherKey::from_bytes(std::span<const std::uint8_t>(raw, 17)), std::invalid_argument);
    raw[3] = 9;
    EXPECT_EQ(CipherKey::from_bytes(std::span<const std::uint8_t>(raw, 16)).bytes[3], 9);
}

TEST(Bytes, BigEndianWords)
{
    std::uint8_t b[4];
    store_be32(b, 0x01234567u);
    EXPECT_EQ(b[0], 0x01);
    EXPECT_EQ(b[3], 0x67);
    EXPECT_EQ(load_be32(b), 0x01234567u);
    EXPECT_EQ(word_byte(0x01234567u, 0), 0x01);
    EXPECT_EQ(word_byte(0x01234567u, 3), 0x67);
}
