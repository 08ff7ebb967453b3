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

#include "aliaslab/access_trace.hpp"
#include "aliaslab/bytes.hpp"

#include <array>

namespace aliaslab {

/// SM4 round keys; element r - 1 holds k_r for r = 1..32.
using Sm4RoundKeys = std::array<std::uint32_t, 32>;

const SboxTable& sm4_sbox();

/// The linear diffusion L applied after the S-box layer of each round.
std::uint32_t sm4_linear(std::uint32_t b);

/// T(x) = L(s(x1), s(x2), s(x3), s(x4)), untraced.
std::uint32_t sm4_round_function(std::uint32_t x);

Sm4RoundKeys sm4_key_schedule(const CipherKey& key);

/// Runs the key schedule backwards from four consecutive round keys
/// k29..k32 to the master key. Total: any four words map to some key.
CipherKey sm4_recover_master_key(std::uint32_t k29, std::uint32_t k30, std::uint32_t k31, std::uint32_t k32);

/*
 * SM4 with cache-state normalization: before the first round one entry of
 * each of the four S-box cache lines is read (column 0, flagged as prefetch),
 * then the 32 rounds perform ordinary byte lookups at the true index. A trace
 * is 4 prefetch reads followed by 128 lookups tagged (round, byte of x).
 */
class Sm4CnCipher {
public:
    explicit Sm4CnCipher(const CipherKey& key);

    Block encrypt(const Block& plaintext, AccessTrace* trace = nullptr) const;

    const Sm4RoundKeys& round_keys() const { return round_keys_; }

private:
    Sm4RoundKeys round_keys_;
};

struct Sm4CnResult {
    Block ciphertext;
    AccessTrace trace;
};

Sm4CnResult sm4_cn_encrypt(const CipherKey& key, const Block& plaintext);

} // namespace aliaslab
