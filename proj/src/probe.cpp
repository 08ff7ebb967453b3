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

#include "aliaslab/probe.hpp"

#include "aliaslab/rng.hpp"

#include <cpuid.h>
#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <array>
#include <exception>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace aliaslab::probe {

namespace {

constexpr std::size_t kPage = 4096;
constexpr std::size_t kBatch = 8;

#define ALIASLAB_REP10(x) x x x x x x x x x x
#define ALIASLAB_REP100(x) ALIASLAB_REP10(ALIASLAB_REP10(x))

inline std::uint32_t stamp()
{
    std::uint32_t lo, hi, aux;
    asm volatile("rdtscp" : "=a"(lo), "=d"(hi), "=c"(aux)::"memory");
    (void)hi;
    (void)aux;
    return lo;
}

std::set<int> parse_cpu_list(const std::string& s)
{
    std::set<int> cpus;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty())
            continue;
        auto dash = part.find('-');
        if (dash == std::string::npos) {
            cpus.insert(std::stoi(part));
        } else {
            int lo = std::stoi(part.substr(0, dash));
            int hi = std::stoi(part.substr(dash + 1));
            for (int c = lo; c <= hi; ++c)
                cpus.insert(c);
        }
    }
    return cpus;
}

void check_pair(const CpuPair& p)
{
    for (const auto& s : sibling_cpu_pairs())
        if ((s.probe_cpu == p.probe_cpu && s.sibling_cpu == p.sibling_cpu) ||
            (s.probe_cpu == p.sibling_cpu && s.sibling_cpu == p.probe_cpu))
            return;
    throw std::invalid_argument("cpus " + std::to_string(p.probe_cpu) + " and " + std::to_string(p.sibling_cpu) +
                                " are not hyper-thread siblings");
}

void strong_writer(std::uint8_t* target, std::atomic<bool>& stop, std::uint64_t& performed)
{
    std::uint64_t n = 0;
    while (!stop.load(std::memory_order_relaxed)) {
        asm volatile(ALIASLAB_REP100("movb %%al, (%[t])\n\t") : : [t] "r"(target), "a"(0) : "memory");
        n += 100;
    }
    performed = n;
}

void weak_writer(std::uint8_t* target, std::atomic<bool>& stop, std::uint64_t& performed)
{
    std::uint64_t n = 0;
    std::uint64_t scratch = 1;
    while (!stop.load(std::memory_order_relaxed)) {
        asm volatile(ALIASLAB_REP10("movb %%al, (%[t])\n\t"
                                    "imul $3, %[s], %[s]\n\t"
                                    "add $7, %[s]\n\t"
                                    "xor %[s], %%rcx\n\t"
                                    "shr $1, %%rcx\n\t")
                     : [s] "+r"(scratch)
                     : [t] "r"(target), "a"(0)
                     : "rcx", "memory", "cc");
        n += 10;
    }
    performed = n;
}

void reader(std::uint8_t* target, std::atomic<bool>& stop, std::uint64_t& performed)
{
    std::uint64_t n = 0;
    while (!stop.load(std::memory_order_relaxed)) {
        asm volatile(ALIASLAB_REP100("movb (%[t]), %%al\n\t") : : [t] "r"(target) : "rax", "memory");
        n += 100;
    }
    performed = n;
}

inline void filler(unsigned count, std::uint64_t& acc)
{
    for (unsigned i = 0; i < count; ++i)
        asm volatile("add $1, %[a]\n\t"
                     "xor $0x55, %[a]\n\t"
                     "rol $3, %[a]\n\t"
                     : [a] "+r"(acc)
                     :
                     : "cc");
}

} // namespace

Mode parse_mode(std::string_view name)
{
    if (name == "RaR")
        return Mode::RaR;
    if (name == "WaR")
        return Mode::WaR;
    if (name == "RaW")
        return Mode::RaW;
    if (name == "RawW")
        return Mode::RawW;
    if (name == "curve" || name == "ReadLatencyCurve")
        return Mode::ReadLatencyCurve;
    throw std::invalid_argument("unknown probe mode '" + std::string(name) + "'");
}

OffsetClass parse_offset_class(std::string_view name)
{
    if (name == "different-line")
        return OffsetClass::DifferentLine;
    if (name == "same-line-different-word")
        return OffsetClass::SameLineDifferentWord;
    if (name == "same-word")
        return OffsetClass::SameWord;
    throw std::invalid_argument("unknown offset class '" + std::string(name) + "'");
}

void require_support()
{
    unsigned a, b, c, d;
    if (!__get_cpuid(0x80000001u, &a, &b, &c, &d) || !(d & (1u << 27)))
        throw ProbeUnavailable("rdtscp is not supported on this processor");
    if (sibling_cpu_pairs().empty())
        throw ProbeUnavailable("no hyper-thread sibling pair found in /sys/devices/system/cpu");
}

std::vector<CpuPair> sibling_cpu_pairs()
{
    namespace fs = std::filesystem;
    std::set<std::pair<int, int>> pairs;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator("/sys/devices/system/cpu", ec)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("cpu", 0) != 0 || name.size() < 4 ||
            !std::all_of(name.begin() + 3, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            continue;
        std::ifstream in(entry.path() / "topology" / "thread_siblings_list");
        std::string line;
        if (!in || !std::getline(in, line))
            continue;
        auto cpus = parse_cpu_list(line);
        if (cpus.size() < 2)
            continue;
        auto it = cpus.begin();
        int first = *it++;
        for (; it != cpus.end(); ++it)
            pairs.emplace(first, *it);
    }
    std::vector<CpuPair> out;
    for (auto [p, s] : pairs)
        out.push_back({p, s});
    return out;
}

void pin_current_thread(int cpu)
{
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(cpu, &set);
    if (pthread_setaffinity_np(pthread_self(), sizeof set, &set) != 0)
        throw ProbeUnavailable("cannot pin thread to cpu " + std::to_string(cpu));
}

PageBuffer::PageBuffer(std::size_t pages) : size_(pages * kPage)
{
    if (pages == 0)
        throw std::invalid_argument("buffer needs at least one page");
    data_ = static_cast<std::uint8_t*>(std::aligned_alloc(kPage, size_));
    if (!data_)
        throw std::bad_alloc();
    std::memset(data_, 0, size_);
}

PageBuffer::~PageBuffer() { std::free(data_); }

std::vector<std::uint32_t> probe_reads(const std::uint8_t* base, std::size_t count)
{
    std::vector<std::uint32_t> stamps(count);
    for (std::size_t i = 0; i < count; ++i) {
        stamps[i] = stamp();
        asm volatile("movb 0x0000(%[b]), %%al\n\t"
                     "movb 0x1000(%[b]), %%al\n\t"
                     "movb 0x2000(%[b]), %%al\n\t"
                     "movb 0x3000(%[b]), %%al\n\t"
                     "movb 0x4000(%[b]), %%al\n\t"
                     "movb 0x5000(%[b]), %%al\n\t"
                     "movb 0x6000(%[b]), %%al\n\t"
                     "movb 0x7000(%[b]), %%al\n\t"
                     :
                     : [b] "r"(base)
                     : "rax", "memory");
    }
    return stamps;
}

std::vector<std::uint32_t> probe_writes(std::uint8_t* base, std::size_t count)
{
    std::vector<std::uint32_t> stamps(count);
    for (std::size_t i = 0; i < count; ++i) {
        stamps[i] = stamp();
        asm volatile("movb %%al, 0x0000(%[b])\n\t"
                     "movb %%al, 0x1000(%[b])\n\t"
                     "movb %%al, 0x2000(%[b])\n\t"
                     "movb %%al, 0x3000(%[b])\n\t"
                     "movb %%al, 0x4000(%[b])\n\t"
                     "movb %%al, 0x5000(%[b])\n\t"
                     "movb %%al, 0x6000(%[b])\n\t"
                     "movb %%al, 0x7000(%[b])\n\t"
                     :
                     : [b] "r"(base), "a"(0)
                     : "memory");
    }
    return stamps;
}

SiblingThread::SiblingThread(SiblingLoop loop, std::uint8_t* target, std::optional<int> cpu)
{
    thread_ = std::thread([this, loop, target, cpu] {
        if (cpu) {
            try {
                pin_current_thread(*cpu);
            } catch (...) {
                error_ = std::current_exception();
                started_.store(true);
                return;
            }
        }
        started_.store(true);
        switch (loop) {
        case SiblingLoop::StrongWriter:
            strong_writer(target, stop_, performed_);
            break;
        case SiblingLoop::WeakWriter:
            weak_writer(target, stop_, performed_);
            break;
        case SiblingLoop::Reader:
            reader(target, stop_, performed_);
            break;
        }
    });
    while (!started_.load())
        std::this_thread::yield();
    if (error_) {
        thread_.join();
        std::rethrow_exception(error_);
    }
}

SiblingThread::~SiblingThread()
{
    if (thread_.joinable())
        stop();
}

std::uint64_t SiblingThread::stop()
{
    stop_.store(true);
    if (thread_.joinable())
        thread_.join();
    return performed_;
}

std::pair<std::size_t, std::size_t> probe_and_sibling_offsets(OffsetClass c)
{
    switch (c) {
    case OffsetClass::SameWord:
        return {0x100, 0x100};
    case OffsetClass::SameLineDifferentWord:
        return {0x100, 0x108};
    case OffsetClass::DifferentLine:
        return {0x100, 0x180};
    }
    return {0x100, 0x100};
}

LatencyHistogram run_probe(const ProbeConfig& cfg)
{
    if (cfg.mode == Mode::ReadLatencyCurve)
        throw std::invalid_argument("use read_latency_curve for the curve mode");
    if (cfg.buffer_pages < kBatch + 1)
        throw std::invalid_argument("probe buffer needs at least 9 pages");
    require_support();
    check_pair(cfg.cpus);

    PageBuffer probe_buf(cfg.buffer_pages);
    PageBuffer sibling_buf(1);
    auto [probe_off, sibling_off] = probe_and_sibling_offsets(cfg.offset_class);

    SiblingLoop loop = SiblingLoop::StrongWriter;
    if (cfg.mode == Mode::RawW)
        loop = SiblingLoop::WeakWriter;
    else if (cfg.mode == Mode::RaR || cfg.mode == Mode::WaR)
        loop = SiblingLoop::Reader;

    pin_current_thread(cfg.cpus.probe_cpu);
    std::vector<std::uint32_t> stamps;
    {
        SiblingThread sibling(loop, sibling_buf.data() + sibling_off, cfg.cpus.sibling_cpu);
        if (cfg.mode == Mode::WaR)
            stamps = probe_writes(probe_buf.data() + probe_off, cfg.iterations + 1);
        else
            stamps = probe_reads(probe_buf.data() + probe_off, cfg.iterations + 1);
        sibling.stop();
    }
    auto lat = batch_latencies(stamps);
    return LatencyHistogram::from_samples(lat);
}

std::vector<double> read_latency_curve(const ProbeConfig& cfg, std::uint64_t filler_seed)
{
    constexpr int kReads = 64;
    require_support();
    check_pair(cfg.cpus);
    if (cfg.iterations == 0)
        throw std::invalid_argument("iterations must be positive");

    PageBuffer buf(kReads + 1);
    PageBuffer sibling_buf(1);
    const std::size_t conflict_off = 0x100;

    SplitMix64 rng = substream(filler_seed, 0);
    std::array<unsigned, kReads> fill{};
    for (auto& f : fill)
        f = static_cast<unsigned>(rng() % 4);

    pin_current_thread(cfg.cpus.probe_cpu);
    SiblingThread sibling(SiblingLoop::StrongWriter, sibling_buf.data() + conflict_off, cfg.cpus.sibling_cpu);

    std::vector<double> curve(kReads + 1);
    std::array<const std::uint8_t*, kReads> addr{};
    std::uint64_t acc = 0;
    for (int k = 0; k <= kReads; ++k) {
        for (int j = 0; j < kReads; ++j) {
            std::size_t off = j < k ? conflict_off : conflict_off + 0x80;
            addr[j] = buf.data() + static_cast<std::size_t>(j) * kPage + off;
        }
        double total = 0.0;
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            std::uint32_t t0 = stamp();
            for (int j = 0; j < kReads; ++j) {
                asm volatile("movb (%[p]), %%al" : : [p] "r"(addr[j]) : "rax", "memory");
                filler(fill[j], acc);
            }
            std::uint32_t t1 = stamp();
            total += static_cast<double>(static_cast<std::uint32_t>(t1 - t0));
        }
        curve[k] = total / static_cast<double>(cfg.iterations);
    }
    sibling.stop();
    asm volatile("" : : "r"(acc));
    return curve;
}

} // namespace aliaslab::probe
