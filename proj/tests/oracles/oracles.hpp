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

// Independent references used only by the tests.

#include "aliaslab/bytes.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

/// AES-128 single-block encryption through OpenSSL.
aliaslab::Block openssl_aes128(const aliaslab::CipherKey& key, const aliaslab::Block& pt);
/// SM4 single-block encryption through OpenSSL.
aliaslab::Block openssl_sm4(const aliaslab::CipherKey& key, const aliaslab::Block& pt);

/// AES S-box from its definition: inverse in GF(2^8) mod x^8+x^4+x^3+x+1,
/// then the affine map with constant 0x63.
std::array<std::uint8_t, 256> gf_aes_sbox();

/// Textbook two-pass sample correlation in long double.
double two_pass_pearson(std::span<const double> x, std::span<const double> y);

/// SM4 encryption written directly from the round equations with a
/// caller-supplied S-box, recording x_r for every round (index r - 1).
std::array<std::uint32_t, 32> sm4_round_inputs(const std::array<std::uint8_t, 256>& sbox,
                                               const std::array<std::uint32_t, 32>& rk, const aliaslab::Block& pt);

/// Least-squares line fit; returns slope, intercept and R^2.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace oracle
