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

#include "aliaslab/sm4_cn.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace aliaslab;

namespace {

Block random_block(std::mt19937_64& g)
{
    Block b{};
    for (auto& x : b)
        x = static_cast<std::uint8_t>(g());
    return b;
}

const CipherKey kStdKey = CipherKey::from_hex("0123456789abcdeffedcba9876543210");

} // namespace

TEST(Sm4Cn, StandardVector)
{
    const Block pt = kStdKey.bytes;
    EXPECT_EQ(to_hex(Sm4CnCipher(kStdKey).encrypt(pt)), "681edf34d206965e86b3e94f536e4246");
}

TEST(Sm4Cn, StandardVectorMillionIterations)
{
    Sm4CnCipher c(kStdKey);
    Block b = kStdKey.bytes;
    for (int i = 0; i < 1000000; ++i)
        b = c.encrypt(b);
    EXPECT_EQ(to_hex(b), "595298c7c6fd271f0402f804c33d3f66");
}

TEST(Sm4Cn, MatchesOpenSslOnRandomPairs)
{
    std::mt19937_64 g(11);
    for (int i = 0; i < 1000; ++i) {
        const auto key = CipherKey::from_bytes(random_block(g));
        const Block pt = random_block(g);
        ASSERT_EQ(Sm4CnCipher(key).encrypt(pt), oracle::openssl_sm4(key, pt)) << i;
    }
}

TEST(Sm4Cn, KnownRoundKeys)
{
    const auto rk = sm4_key_schedule(kStdKey);
    EXPECT_EQ(rk[0], 0xf12186f9u);
    EXPECT_EQ(rk[31], 0x9124a012u);
}

TEST(Sm4Cn, KeyScheduleInverts)
{
    std::mt19937_64 g(12);
    for (int i = 0; i < 200; ++i) {
        const auto key = CipherKey::from_bytes(random_block(g));
        const auto rk = sm4_key_schedule(key);
        EXPECT_EQ(sm4_recover_master_key(rk[28], rk[29], rk[30], rk[31]), key);
    }
}

TEST(Sm4Cn, RoundFunctionIsLinearLayerOfSbox)
{
    std::mt19937_64 g(13);
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t x = static_cast<std::uint32_t>(g());
        std::uint32_t b = 0;
        for (int j = 0; j < 4; ++j)
            b |= std::uint32_t(sm4_sbox()[word_byte(x, j)]) << (24 - 8 * j);
        EXPECT_EQ(sm4_round_function(x), sm4_linear(b));
    }
    EXPECT_EQ(sm4_linear(1u), 1u ^ (1u << 2) ^ (1u << 10) ^ (1u << 18) ^ (1u << 24));
}

TEST(Sm4Cn, TraceIsPrefetchThenTrueIndices)
{
    std::mt19937_64 g(14);
    for (int n = 0; n < 100; ++n) {
        const auto key = CipherKey::from_bytes(random_block(g));
        const Block pt = random_block(g);
        const auto res = sm4_cn_encrypt(key, pt);
        ASSERT_EQ(res.trace.size(), 132u);
        for (unsigned l = 0; l < 4; ++l) {
            EXPECT_TRUE(res.trace[l].prefetch);
            EXPECT_EQ(res.trace[l].offset, 64 * l);
            EXPECT_EQ(res.trace[l].round, 0);
        }
        const auto x = oracle::sm4_round_inputs(sm4_sbox(), sm4_key_schedule(key), pt);
        for (int r = 0; r < 32; ++r)
            for (int j = 0; j < 4; ++j) {
                const auto& a = res.trace[4 + 4 * r + j];
                EXPECT_FALSE(a.prefetch);
                EXPECT_EQ(a.round, r + 1);
                EXPECT_EQ(a.position, j);
                EXPECT_EQ(a.offset, word_byte(x[r], j));
            }
    }
}
