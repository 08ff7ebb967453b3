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

#include <cstdint>
#include <string>
#include <string_view>

namespace aliaslab {

enum class CipherId : std::uint8_t { AesCt = 0, Sm4Cn = 1 };
enum class Profile : std::uint8_t { User, Sgx };

std::string_view to_string(CipherId id);
std::string_view to_string(Profile p);
/// Accepts "aes-ct" / "sm4-cn"; throws std::invalid_argument otherwise.
CipherId parse_cipher_id(std::string_view name);
Profile parse_profile(std::string_view name);

/// Heavy-tail component: a fraction `rate` of samples is shifted by a
/// uniform amount in [min_shift, max_shift] cycles.
struct Contamination {
    double rate = 0.0;
    double min_shift = 3000.0;
    double max_shift = 20000.0;
};

/// Parameters of the simulated read-after-write timing channel.
struct LeakModel {
    double base_cycles = 2000.0;
    /// Cycles per read in the jammed cache line but a different word.
    double line_penalty = 2.0;
    /// Cycles per read inside the jammed word.
    double word_penalty = 10.0;
    double noise_sigma = 30.0;
    /// Jammed word of the table: line = jam_word / 16, word = jam_word % 16.
    int jam_word = 0;
    Profile profile = Profile::User;
    Contamination contamination{};
    /// Aliasing granularity; 4 on the modeled platform.
    unsigned word_bytes = 4;

    /// Defaults: AES-CT base 2000, SM4-CN base 700; the SGX profile uses base
    /// 14600, sigma 500 and 7% contamination for either cipher.
    static LeakModel for_cipher(CipherId cipher, Profile profile = Profile::User);

    /// Noise-free model whose time is exactly the number of reads that hit
    /// the jammed word.
    static LeakModel synthetic(int jam_word = 0);

    int table_words() const { return static_cast<int>(256 / word_bytes); }

    /// Throws std::domain_error on negative penalties, bad granularity or an
    /// out-of-range jam word.
    void validate() const;
};

} // namespace aliaslab
