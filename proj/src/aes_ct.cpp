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

namespace aliaslab {

namespace {

alignas(64) constexpr SboxTable kSbox = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

constexpr SboxTable make_inverse(const SboxTable& s)
{
    SboxTable inv{};
    for (unsigned i = 0; i < 256; ++i)
        inv[s[i]] = static_cast<std::uint8_t>(i);
    return inv;
}

constexpr SboxTable kInvSbox = make_inverse(kSbox);

constexpr std::array<std::uint8_t, 10> kRcon = {0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36};

// State byte j = 4 * column + row. After ShiftRows, byte j holds the input
// byte at kShiftSource[j].
constexpr std::array<std::uint8_t, 16> kShiftSource = {0, 5, 10, 15, 4, 9, 14, 3, 8, 13, 2, 7, 12, 1, 6, 11};

constexpr std::uint8_t xtime(std::uint8_t x)
{
    return static_cast<std::uint8_t>((x << 1) ^ ((x >> 7) * 0x1b));
}

std::uint8_t ct_lookup(std::uint8_t index, AccessTrace* trace, std::uint8_t round, std::uint8_t position)
{
    alignas(64) std::array<std::uint8_t, 4> staged;
    const unsigned column = index & 63u;
    for (unsigned line = 0; line < 4; ++line) {
        const unsigned offset = line * kCacheLineBytes + column;
        staged[line] = kSbox[offset];
        if (trace)
            trace->record(static_cast<std::uint8_t>(offset), round, position);
    }
    return staged[index >> 6];
}

void mix_columns(Block& s)
{
    for (int c = 0; c < 4; ++c) {
        std::uint8_t* col = &s[4 * c];
        const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        const std::uint8_t all = a0 ^ a1 ^ a2 ^ a3;
        col[0] = a0 ^ all ^ xtime(a0 ^ a1);
        col[1] = a1 ^ all ^ xtime(a1 ^ a2);
        col[2] = a2 ^ all ^ xtime(a2 ^ a3);
        col[3] = a3 ^ all ^ xtime(a3 ^ a0);
    }
}

std::array<std::uint8_t, 4> schedule_core(std::array<std::uint8_t, 4> w, std::uint8_t rcon)
{
    return {static_cast<std::uint8_t>(kSbox[w[1]] ^ rcon), kSbox[w[2]], kSbox[w[3]], kSbox[w[0]]};
}

} // namespace

const SboxTable& aes_sbox()
{
    return kSbox;
}

std::uint8_t aes_inv_sbox(std::uint8_t b)
{
    return kInvSbox[b];
}

AesRoundKeys aes_key_schedule(const CipherKey& key)
{
    std::array<std::array<std::uint8_t, 4>, 44> w{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            w[i][j] = key.bytes[4 * i + j];
    for (int i = 4; i < 44; ++i) {
        auto t = w[i - 1];
        if (i % 4 == 0)
            t = schedule_core(t, kRcon[i / 4 - 1]);
        for (int j = 0; j < 4; ++j)
            w[i][j] = w[i - 4][j] ^ t[j];
    }
    AesRoundKeys rk{};
    for (int r = 0; r < 11; ++r)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rk[r][4 * i + j] = w[4 * r + i][j];
    return rk;
}

CipherKey aes_recover_master_key(const Block& last_round_key)
{
    std::array<std::array<std::uint8_t, 4>, 44> w{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            w[40 + i][j] = last_round_key[4 * i + j];
    for (int i = 43; i >= 4; --i) {
        auto t = w[i - 1];
        if (i % 4 == 0)
            t = schedule_core(t, kRcon[i / 4 - 1]);
        for (int j = 0; j < 4; ++j)
            w[i - 4][j] = w[i][j] ^ t[j];
    }
    CipherKey key;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            key.bytes[4 * i + j] = w[i][j];
    return key;
}

AesCtCipher::AesCtCipher(const CipherKey& key) : round_keys_(aes_key_schedule(key)) {}

Block AesCtCipher::encrypt(const Block& plaintext, AccessTrace* trace) const
{
    Block s;
    for (int j = 0; j < 16; ++j)
        s[j] = plaintext[j] ^ round_keys_[0][j];

    for (int round = 1; round <= 10; ++round) {
        Block t;
        for (int j = 0; j < 16; ++j)
            t[j] = ct_lookup(s[kShiftSource[j]], trace, static_cast<std::uint8_t>(round), static_cast<std::uint8_t>(j));
        if (round != 10)
            mix_columns(t);
        for (int j = 0; j < 16; ++j)
            s[j] = t[j] ^ round_keys_[round][j];
    }
    return s;
}

AesCtResult aes_ct_encrypt(const CipherKey& key, const Block& plaintext)
{
    AesCtResult result;
    result.trace.accesses.reserve(640);
    result.ciphertext = AesCtCipher(key).encrypt(plaintext, &result.trace);
    return result;
}

} // namespace aliaslab
