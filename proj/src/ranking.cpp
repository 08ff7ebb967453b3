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

#include "aliaslab/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace aliaslab {

std::size_t ByteRanking::rank_of(std::uint32_t candidate) const
{
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i].candidate == candidate)
            return i + 1;
    throw std::out_of_range("candidate " + std::to_string(candidate) + " not in ranking");
}

std::size_t RankReport::recovered() const
{
    return static_cast<std::size_t>(
        std::count_if(bytes.begin(), bytes.end(), [](const ByteRanking& b) { return b.true_rank == 1; }));
}

double RankReport::log2_rank_sum() const
{
    double bits = 0.0;
    for (const auto& b : bytes)
        if (b.true_rank)
            bits += std::log2(static_cast<double>(*b.true_rank));
    return bits;
}

ByteRanking rank_candidates(std::span<const Correlation> values, std::optional<std::uint32_t> true_candidate)
{
    if (values.empty())
        throw std::invalid_argument("rank_candidates: empty candidate list");
    ByteRanking out;
    out.sorted.reserve(values.size());
    for (std::size_t c = 0; c < values.size(); ++c)
        out.sorted.push_back({static_cast<std::uint32_t>(c), values[c]});
    std::stable_sort(out.sorted.begin(), out.sorted.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.correlation.degenerate != b.correlation.degenerate)
            return b.correlation.degenerate;
        if (a.correlation.r != b.correlation.r)
            return a.correlation.r > b.correlation.r;
        return a.candidate < b.candidate;
    });
    if (true_candidate) {
        out.true_candidate = true_candidate;
        out.true_rank = out.rank_of(*true_candidate);
    }
    return out;
}

RankReport make_report(const CorrelationTable& table, std::span<const std::uint32_t> true_candidates)
{
    if (!true_candidates.empty() && true_candidates.size() != table.size())
        throw std::domain_error("expected " + std::to_string(table.size()) + " true candidates, got " +
                                std::to_string(true_candidates.size()));
    RankReport report;
    for (std::size_t b = 0; b < table.size(); ++b) {
        std::optional<std::uint32_t> truth;
        if (!true_candidates.empty())
            truth = true_candidates[b];
        report.bytes.push_back(rank_candidates(table[b], truth));
    }
    return report;
}

RankReport rank_history(const TraceSet& ts, const AttackFn& attack, std::span<const std::size_t> checkpoints,
                        std::span<const std::uint32_t> true_candidates)
{
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || checkpoints[i] > ts.size())
            throw std::domain_error("checkpoint " + std::to_string(checkpoints[i]) + " outside [1, " +
                                    std::to_string(ts.size()) + "]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::domain_error("checkpoints must be strictly ascending");
    }
    if (!checkpoints.empty() && true_candidates.empty())
        throw std::domain_error("rank history needs the true candidates");

    const std::span<const TraceRecord> all(ts.records);
    std::vector<RankHistoryPoint> history;
    std::optional<RankReport> last;
    for (const std::size_t n : checkpoints) {
        RankReport at = make_report(attack(all.first(n)), true_candidates);
        RankHistoryPoint point{n, {}};
        for (const auto& b : at.bytes)
            point.ranks.push_back(*b.true_rank);
        history.push_back(std::move(point));
        if (n == ts.size())
            last = std::move(at);
    }
    RankReport report = last ? std::move(*last) : make_report(attack(all), true_candidates);
    report.history = std::move(history);
    return report;
}

EnumerationResult enumerate_keys(const RankReport& report, std::uint64_t budget,
                                 const std::function<bool(std::span<const std::uint32_t>)>& accept)
{
    struct Node {
        double cost;
        std::vector<std::uint32_t> depth;
        std::size_t min_axis;
        bool operator>(const Node& o) const { return cost > o.cost; }
    };
    const std::size_t width = report.bytes.size();
    auto cost_of = [](const std::vector<std::uint32_t>& d) {
        double c = 0.0;
        for (auto v : d)
            c += std::log2(static_cast<double>(v) + 1.0);
        return c;
    };

    EnumerationResult result;
    if (width == 0)
        return result;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> frontier;
    frontier.push({0.0, std::vector<std::uint32_t>(width, 0), 0});
    std::vector<std::uint32_t> key(width);
    while (!frontier.empty() && result.tried < budget) {
        Node node = frontier.top();
        frontier.pop();
        for (std::size_t b = 0; b < width; ++b)
            key[b] = report.bytes[b].sorted[node.depth[b]].candidate;
        ++result.tried;
        if (accept(key)) {
            result.key = key;
            return result;
        }
        // Increment axes in non-decreasing order so every tuple is reached once.
        for (std::size_t axis = node.min_axis; axis < width; ++axis) {
            if (node.depth[axis] + 1 >= report.bytes[axis].sorted.size())
                continue;
            Node next{0.0, node.depth, axis};
            ++next.depth[axis];
            next.cost = cost_of(next.depth);
            frontier.push(std::move(next));
        }
    }
    return result;
}

void write_rank_csv(std::ostream& out, const RankReport& report)
{
    out << "byte_index,candidate,correlation,rank\n";
    char buf[64];
    for (std::size_t b = 0; b < report.bytes.size(); ++b) {
        const auto& sorted = report.bytes[b].sorted;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", sorted[i].correlation.r);
            out << b << ',' << sorted[i].candidate << ',' << buf << ',' << i + 1 << '\n';
        }
    }
}

void write_history_csv(std::ostream& out, const RankReport& report)
{
    out << "observations,byte_index,rank\n";
    for (const auto& point : report.history)
        for (std::size_t b = 0; b < point.ranks.size(); ++b)
            out << point.observations << ',' << b << ',' << point.ranks[b] << '\n';
}

} // namespace aliaslab
