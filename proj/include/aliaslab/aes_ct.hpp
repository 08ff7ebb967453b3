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

using AesRoundKeys = std::array<Block, 11>;

const SboxTable& aes_sbox();
std::uint8_t aes_inv_sbox(std::uint8_t b);

AesRoundKeys aes_key_schedule(const CipherKey& key);

/// Walks the AES-128 key schedule backwards from the round-10 key.
CipherKey aes_recover_master_key(const Block& last_round_key);

/*
 * AES-128 with a cache-line-constant S-box lookup.
 *
 * Every SubBytes lookup of index i reads the four table entries in the same
 * column c = i mod 64 of each cache line (offsets c, 64+c, 128+c, 192+c, in
 * line order) into an aligned buffer, then selects entry i / 64 from it. The
 * set of touched cache lines is therefore identical for every lookup; only the
 * column within the line depends on data.
 *
 * Lookups are issued round by round in ciphertext byte order: the lookup
 * tagged (round r, position j) produces byte j of the round-r output after
 * ShiftRows. The key schedule is not traced.
 */
class AesCtCipher {
public:
    explicit AesCtCipher(const CipherKey& key);

    /// Encrypts one block; appends 640 reads to `trace` when non-null.
    Block encrypt(const Block& plaintext, AccessTrace* trace = nullptr) const;

    const AesRoundKeys& round_keys() const { return round_keys_; }

private:
    AesRoundKeys round_keys_;
};

struct AesCtResult {
    Block ciphertext;
    AccessTrace trace;
};

AesCtResult aes_ct_encrypt(const CipherKey& key, const Block& plaintext);

} // namespace aliaslab
