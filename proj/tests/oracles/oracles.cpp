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

#include "oracles.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace oracle {

namespace {

aliaslab::Block evp_encrypt(const EVP_CIPHER* cipher, const aliaslab::CipherKey& key, const aliaslab::Block& pt)
{
    if (!cipher)
        throw std::runtime_error("OpenSSL cipher unavailable");
    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
    aliaslab::Block out{};
    int len = 0;
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), cipher, nullptr, key.bytes.data(), nullptr) != 1 ||
        EVP_CIPHER_CTX_set_padding(ctx.get(), 0) != 1 ||
        EVP_EncryptUpdate(ctx.get(), out.data(), &len, pt.data(), static_cast<int>(pt.size())) != 1 || len != 16)
        throw std::runtime_error("OpenSSL encryption failed");
    return out;
}

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b)
{
    std::uint8_t p = 0;
    while (b) {
        if (b & 1)
            p ^= a;
        a = static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0));
        b >>= 1;
    }
    return p;
}

std::uint32_t rotl(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

} // namespace

aliaslab::Block openssl_aes128(const aliaslab::CipherKey& key, const aliaslab::Block& pt)
{
    return evp_encrypt(EVP_aes_128_ecb(), key, pt);
}

aliaslab::Block openssl_sm4(const aliaslab::CipherKey& key, const aliaslab::Block& pt)
{
    return evp_encrypt(EVP_sm4_ecb(), key, pt);
}

std::array<std::uint8_t, 256> gf_aes_sbox()
{
    std::array<std::uint8_t, 256> s{};
    for (int x = 0; x < 256; ++x) {
        std::uint8_t inv = 0;
        for (int y = 1; y < 256 && x != 0; ++y)
            if (gf_mul(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) == 1) {
                inv = static_cast<std::uint8_t>(y);
                break;
            }
        std::uint8_t r = 0x63;
        for (int i = 0; i < 8; ++i) {
            int bit = ((inv >> i) ^ (inv >> ((i + 4) % 8)) ^ (inv >> ((i + 5) % 8)) ^ (inv >> ((i + 6) % 8)) ^
                       (inv >> ((i + 7) % 8))) & 1;
            r ^= static_cast<std::uint8_t>(bit << i);
        }
        s[x] = r;
    }
    return s;
}

double two_pass_pearson(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        return 0.0;
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::array<std::uint32_t, 32> sm4_round_inputs(const std::array<std::uint8_t, 256>& sbox,
                                               const std::array<std::uint32_t, 32>& rk, const aliaslab::Block& pt)
{
    std::array<std::uint32_t, 36> x{};
    for (int i = 0; i < 4; ++i)
        x[i] = aliaslab::load_be32(&pt[4 * i]);
    std::array<std::uint32_t, 32> inputs{};
    for (int i = 0; i < 32; ++i) {
        const std::uint32_t a = x[i + 1] ^ x[i + 2] ^ x[i + 3] ^ rk[i];
        inputs[i] = a;
        std::uint32_t b = 0;
        for (int j = 0; j < 4; ++j)
            b |= std::uint32_t(sbox[(a >> (24 - 8 * j)) & 0xff]) << (24 - 8 * j);
        x[i + 4] = x[i] ^ b ^ rotl(b, 2) ^ rotl(b, 10) ^ rotl(b, 18) ^ rotl(b, 24);
    }
    return inputs;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double my = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

} // namespace oracle
