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

#include "aliaslab/leak_model.hpp"

#include <stdexcept>

namespace aliaslab {

std::string_view to_string(CipherId id)
{
    switch (id) {
    case CipherId::AesCt:
        return "aes-ct";
    case CipherId::Sm4Cn:
        return "sm4-cn";
    }
    return "unknown";
}

std::string_view to_string(Profile p)
{
    return p == Profile::Sgx ? "sgx" : "user";
}

CipherId parse_cipher_id(std::string_view name)
{
    if (name == "aes-ct")
        return CipherId::AesCt;
    if (name == "sm4-cn")
        return CipherId::Sm4Cn;
    throw std::invalid_argument("unknown cipher '" + std::string(name) + "' (expected aes-ct or sm4-cn)");
}

Profile parse_profile(std::string_view name)
{
    if (name == "user")
        return Profile::User;
    if (name == "sgx")
        return Profile::Sgx;
    throw std::invalid_argument("unknown profile '" + std::string(name) + "' (expected user or sgx)");
}

LeakModel LeakModel::for_cipher(CipherId cipher, Profile profile)
{
    LeakModel m;
    m.profile = profile;
    m.base_cycles = cipher == CipherId::AesCt ? 2000.0 : 700.0;
    if (profile == Profile::Sgx) {
        m.base_cycles = 14600.0;
        m.noise_sigma = 500.0;
        m.contamination.rate = 0.07;
    }
    return m;
}

LeakModel LeakModel::synthetic(int jam_word)
{
    LeakModel m;
    m.base_cycles = 0.0;
    m.line_penalty = 0.0;
    m.word_penalty = 1.0;
    m.noise_sigma = 0.0;
    m.jam_word = jam_word;
    return m;
}

void LeakModel::validate() const
{
    if (line_penalty < 0.0 || word_penalty < 0.0)
        throw std::domain_error("leak model penalties must be non-negative");
    if (noise_sigma < 0.0)
        throw std::domain_error("noise sigma must be non-negative");
    if (word_bytes == 0 || 64 % word_bytes != 0)
        throw std::domain_error("word granularity must divide the 64-byte cache line");
    if (jam_word < 0 || jam_word >= table_words())
        throw std::domain_error("jam word " + std::to_string(jam_word) + " outside [0, " +
                                std::to_string(table_words() - 1) + "]");
    if (contamination.rate < 0.0 || contamination.rate > 1.0)
        throw std::domain_error("contamination rate must lie in [0, 1]");
    if (contamination.max_shift < contamination.min_shift)
        throw std::domain_error("contamination shift range is inverted");
}

} // namespace aliaslab
