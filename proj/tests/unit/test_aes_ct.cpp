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

#include "aliaslab/aes_ct.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace aliaslab;

namespace {

Block random_block(std::mt19937_64& g)
{
    Block b{};
    for (auto& x : b)
        x = static_cast<std::uint8_t>(g());
    return b;
}

} // namespace

TEST(AesCt, SboxMatchesFieldDefinition)
{
    const auto ref = oracle::gf_aes_sbox();
    for (int i = 0; i < 256; ++i) {
        EXPECT_EQ(aes_sbox()[i], ref[i]) << i;
        EXPECT_EQ(aes_inv_sbox(ref[i]), i);
    }
}

TEST(AesCt, Fips197Vector)
{
    const auto key = CipherKey::from_hex("000102030405060708090a0b0c0d0e0f");
    const Block pt = block_from_hex("00112233445566778899aabbccddeeff");
    EXPECT_EQ(to_hex(AesCtCipher(key).encrypt(pt)), "69c4e0d86a7b0430d8cdb78070b4c55a");
}

TEST(AesCt, MatchesOpenSslOnRandomPairs)
{
    std::mt19937_64 g(1);
    for (int i = 0; i < 1000; ++i) {
        const auto key = CipherKey::from_bytes(random_block(g));
        const Block pt = random_block(g);
        ASSERT_EQ(AesCtCipher(key).encrypt(pt), oracle::openssl_aes128(key, pt)) << i;
    }
}

TEST(AesCt, KeyScheduleInverts)
{
    std::mt19937_64 g(2);
    for (int i = 0; i < 200; ++i) {
        const auto key = CipherKey::from_bytes(random_block(g));
        EXPECT_EQ(aes_recover_master_key(aes_key_schedule(key)[10]), key);
    }
    const auto fips = CipherKey::from_hex("2b7e151628aed2a6abf7158809cf4f3c");
    EXPECT_EQ(to_hex(aes_key_schedule(fips)[10]), "d014f9a8c9ee2589e13f0cc8b6630ca6");
}

TEST(AesCt, TraceShape)
{
    const auto key = CipherKey::from_hex("000102030405060708090a0b0c0d0e0f");
    AccessTrace t;
    AesCtCipher(key).encrypt(Block{}, &t);
    ASSERT_EQ(t.size(), 640u);
    for (std::size_t i = 0; i < t.size(); i += 4) {
        const unsigned c = column_of(t[i].offset);
        for (unsigned l = 0; l < 4; ++l) {
            EXPECT_EQ(line_of(t[i + l].offset), l);
            EXPECT_EQ(column_of(t[i + l].offset), c);
            EXPECT_EQ(t[i + l].round, i / 64 + 1);
            EXPECT_EQ(t[i + l].position, (i / 4) % 16);
            EXPECT_FALSE(t[i + l].prefetch);
        }
    }
}

TEST(AesCt, ConstantLineProfileVaryingColumns)
{
    std::mt19937_64 g(3);
    const auto key = CipherKey::from_bytes(random_block(g));
    std::vector<unsigned> first_lines;
    std::set<std::vector<unsigned>> columns;
    for (int i = 0; i < 100; ++i) {
        auto r = aes_ct_encrypt(key, random_block(g));
        std::vector<unsigned> lines, cols;
        for (const auto& a : r.trace) {
            lines.push_back(line_of(a.offset));
            cols.push_back(word_in_line(a.offset));
        }
        if (first_lines.empty())
            first_lines = lines;
        EXPECT_EQ(lines, first_lines);
        columns.insert(cols);
    }
    EXPECT_GT(columns.size(), 1u);
}

TEST(AesCt, LastRoundLookupIsInverseOfCiphertext)
{
    std::mt19937_64 g(4);
    const auto key = CipherKey::from_bytes(random_block(g));
    const auto k10 = aes_key_schedule(key)[10];
    for (int n = 0; n < 100; ++n) {
        auto r = aes_ct_encrypt(key, random_block(g));
        for (int j = 0; j < 16; ++j) {
            // Entry 0 of each 4-read group is in line 0 at the lookup's column;
            // the true index is the one whose S-box value meets the ciphertext.
            const auto& a = r.trace[(9 * 16 + j) * 4];
            const std::uint8_t idx = aes_inv_sbox(static_cast<std::uint8_t>(r.ciphertext[j] ^ k10[j]));
            EXPECT_EQ(a.round, 10);
            EXPECT_EQ(a.position, j);
            EXPECT_EQ(column_of(a.offset), column_of(idx));
        }
    }
}
