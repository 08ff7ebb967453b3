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

// Hardware probe harness for x86-64 Linux. Only built with
// -DALIASLAB_BUILD_PROBE=ON. Results depend on the machine: pin the two
// threads to sibling hyper-threads of an isolated core, fix the CPU
// frequency and keep interrupts off that core for meaningful numbers.

#include "aliaslab/latency_histogram.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace aliaslab::probe {

class ProbeUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { RaR, WaR, RaW, RawW, ReadLatencyCurve };
enum class OffsetClass { DifferentLine, SameLineDifferentWord, SameWord };

Mode parse_mode(std::string_view name);
OffsetClass parse_offset_class(std::string_view name);

struct CpuPair {
    int probe_cpu = 0;
    int sibling_cpu = 1;
};

struct ProbeConfig {
    Mode mode = Mode::RaW;
    OffsetClass offset_class = OffsetClass::SameWord;
    std::size_t iterations = 100000;
    CpuPair cpus;
    std::size_t buffer_pages = 8;
};

/// Throws ProbeUnavailable if rdtscp or thread pinning is missing.
void require_support();

/// Logical CPU pairs that share a physical core, from sysfs topology.
std::vector<CpuPair> sibling_cpu_pairs();

/// Pins the calling thread; throws ProbeUnavailable on failure.
void pin_current_thread(int cpu);

/// Page-aligned, zeroed buffer.
class PageBuffer {
public:
    explicit PageBuffer(std::size_t pages);
    ~PageBuffer();
    PageBuffer(const PageBuffer&) = delete;
    PageBuffer& operator=(const PageBuffer&) = delete;

    std::uint8_t* data() { return data_; }
    const std::uint8_t* data() const { return data_; }
    std::size_t size() const { return size_; }

private:
    std::uint8_t* data_;
    std::size_t size_;
};

/// Timestamp (low 32 bits of rdtscp) taken before each batch of 8 byte
/// reads at base + 0x0000 .. base + 0x7000. `base` must have 8 pages behind it.
std::vector<std::uint32_t> probe_reads(const std::uint8_t* base, std::size_t count);
/// As probe_reads with 8 byte writes.
std::vector<std::uint32_t> probe_writes(std::uint8_t* base, std::size_t count);

enum class SiblingLoop { StrongWriter, WeakWriter, Reader };

/*
 * Runs a tight loop on `target` in its own thread until stop(): the strong
 * writer issues 100 unrolled byte stores per iteration, the weak writer mixes
 * in unrelated loads and arithmetic, the reader issues 100 byte loads.
 */
class SiblingThread {
public:
    SiblingThread(SiblingLoop loop, std::uint8_t* target, std::optional<int> cpu);
    ~SiblingThread();
    SiblingThread(const SiblingThread&) = delete;
    SiblingThread& operator=(const SiblingThread&) = delete;

    /// Stops the loop; returns the number of accesses performed.
    std::uint64_t stop();

private:
    std::atomic<bool> stop_{false};
    std::atomic<bool> started_{false};
    std::uint64_t performed_ = 0;
    std::exception_ptr error_;
    std::thread thread_;
};

/// Byte offset within a page that the probe reads and the sibling loop uses
/// for each offset class.
std::pair<std::size_t, std::size_t> probe_and_sibling_offsets(OffsetClass c);

/// One RaR/WaR/RaW/RawW experiment; histogram of per-batch latencies.
LatencyHistogram run_probe(const ProbeConfig& cfg);

/*
 * Mean cycles of a 64-read stub with seeded filler instructions between the
 * reads while the sibling writes to the conflict word; entry k has k reads
 * aliasing that word.
 */
std::vector<double> read_latency_curve(const ProbeConfig& cfg, std::uint64_t filler_seed = 1);

} // namespace aliaslab::probe
