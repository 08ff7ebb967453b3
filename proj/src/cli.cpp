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

#include "aliaslab/cli.hpp"

#include "aliaslab/aes_attack.hpp"
#include "aliaslab/aes_ct.hpp"
#include "aliaslab/latency_histogram.hpp"
#include "aliaslab/simulator.hpp"
#include "aliaslab/sm4_attack.hpp"
#include "aliaslab/sm4_cn.hpp"

#ifdef ALIASLAB_HAVE_PROBE
#include "aliaslab/probe.hpp"
#endif

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace aliaslab {

namespace {

constexpr const char* kDefaultKey = "2b7e151628aed2a6abf7158809cf4f3c";

struct ModelFlags {
    std::optional<double> noise_sigma;
    std::optional<double> base_cycles;
    std::optional<double> word_penalty;
    std::optional<double> line_penalty;
    std::optional<double> contamination;
    int jam_word = 0;
    std::string profile = "user";
    bool synthetic = false;

    void add_to(CLI::App& app)
    {
        app.add_option("--noise-sigma", noise_sigma, "Gaussian noise sigma in cycles")->check(CLI::NonNegativeNumber);
        app.add_option("--base-cycles", base_cycles, "Conflict-free victim time in cycles");
        app.add_option("--word-penalty", word_penalty, "Cycles per read in the jammed word")
            ->check(CLI::NonNegativeNumber);
        app.add_option("--line-penalty", line_penalty, "Cycles per read elsewhere in the jammed line")
            ->check(CLI::NonNegativeNumber);
        app.add_option("--contamination", contamination, "Fraction of heavy-tail outliers")
            ->check(CLI::Range(0.0, 1.0));
        app.add_option("--jam-word", jam_word, "Jammed table word")->check(CLI::Range(0, 63));
        app.add_option("--profile", profile, "Timing profile")->check(CLI::IsMember({"user", "sgx"}));
        app.add_flag("--synthetic", synthetic, "Noise-free model: time = jammed-word hits");
    }

    LeakModel build(CipherId cipher) const
    {
        LeakModel m = synthetic ? LeakModel::synthetic(jam_word) : LeakModel::for_cipher(cipher, parse_profile(profile));
        m.jam_word = jam_word;
        if (noise_sigma)
            m.noise_sigma = *noise_sigma;
        if (base_cycles)
            m.base_cycles = *base_cycles;
        if (word_penalty)
            m.word_penalty = *word_penalty;
        if (line_penalty)
            m.line_penalty = *line_penalty;
        if (contamination)
            m.contamination.rate = *contamination;
        try {
            m.validate();
        } catch (const std::domain_error& e) {
            throw std::invalid_argument(e.what());
        }
        return m;
    }
};

std::string fmt(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::pair<double, double> mean_std(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return {m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Renders the report into memory first so a failure leaves no partial file.
template <typename Fn>
void write_file(const std::string& path, Fn&& render)
{
    std::ostringstream buf;
    render(buf);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << buf.str();
    if (!f.flush())
        throw std::runtime_error("write to '" + path + "' failed");
}

TraceSet load_input(const std::string& path, std::optional<double> filter_radius, std::ostream& out)
{
    TraceSet ts = load_traceset(path);
    if (filter_radius) {
        auto f = filter_outliers(ts, *filter_radius);
        out << "filter: kept " << f.kept.size() << " of " << ts.size() << " (" << fmt(f.pass_fraction, 4) << ")\n";
        ts = std::move(f.kept);
    }
    return ts;
}

std::uint32_t k32_six_bit(const CipherKey& key, int byte)
{
    return word_byte(sm4_key_schedule(key)[31], byte) >> 2;
}

int cmd_gen(const std::string& cipher_name, std::size_t traces, std::uint64_t seed, const std::string& key_hex,
            const ModelFlags& mf, const std::string& out_path, const std::string& csv_path, std::ostream& out)
{
    const CipherId cipher = parse_cipher_id(cipher_name);
    const CipherKey key = CipherKey::from_hex(key_hex);
    const LeakModel model = mf.build(cipher);
    TraceSet ts = generate_traceset(cipher, traces, key, model, seed);

    std::ostringstream bin;
    write_traceset(bin, ts);
    const std::string bytes = bin.str();
    write_file(out_path, [&](std::ostream& o) { o << bytes; });
    if (!csv_path.empty())
        write_file(csv_path, [&](std::ostream& o) { write_traceset_csv(o, ts); });

    auto [m, s] = mean_std(ts.times());
    out << "wrote " << ts.size() << " " << to_string(cipher) << " records to " << out_path << "\n";
    out << "time mean " << fmt(m) << " std " << fmt(s) << " cycles\n";
    out << "digest " << hex64(fnv1a(bytes)) << "\n";
    return kExitOk;
}

int cmd_attack_aes(const std::string& in, int jam_word, const std::vector<std::size_t>& checkpoints,
                   const std::string& key_hex, std::optional<double> filter_radius, const std::string& out_path,
                   const std::string& history_path, std::ostream& out)
{
    TraceSet ts = load_input(in, filter_radius, out);
    AesAttackConfig cfg;
    cfg.jam_word = jam_word;
    cfg.checkpoints = checkpoints;
    std::optional<Block> truth;
    if (!key_hex.empty())
        truth = aes_key_schedule(CipherKey::from_hex(key_hex))[10];
    if (!checkpoints.empty() && !truth)
        throw std::invalid_argument("--checkpoints needs --key to rank the true candidates");

    RankReport report = attack_aes(ts, cfg, truth);
    const Block k10 = best_last_round_key(report);

    if (!out_path.empty())
        write_file(out_path, [&](std::ostream& o) { write_rank_csv(o, report); });
    if (!history_path.empty())
        write_file(history_path, [&](std::ostream& o) { write_history_csv(o, report); });

    out << "traces " << ts.size() << "\n";
    for (std::size_t b = 0; b < report.bytes.size(); ++b) {
        const auto& br = report.bytes[b];
        out << "byte " << b << " best " << to_hex(std::span<const std::uint8_t>(&k10[b], 1)) << " r "
            << fmt(br.sorted.front().correlation.r, 4);
        if (br.true_rank)
            out << " true-rank " << *br.true_rank;
        out << "\n";
    }
    out << "round-10 key " << to_hex(k10) << "\n";
    out << "master key " << aes_recover_master_key(k10).hex() << "\n";
    if (truth)
        out << "recovered " << report.recovered() << "/16, log2 rank sum " << fmt(report.log2_rank_sum(), 4) << "\n";
    return kExitOk;
}

int cmd_attack_sm4(const std::string& in, int jam_word, std::size_t per_round, std::size_t beam,
                   std::optional<double> filter_radius, const std::string& out_path, const std::string& history_path,
                   const std::vector<std::size_t>& checkpoints, std::ostream& out, std::ostream& err)
{
    TraceSet ts = load_input(in, filter_radius, out);
    Sm4AttackConfig cfg;
    cfg.jam_word = jam_word;
    cfg.traces_per_round = per_round;
    cfg.beam_width = beam;
    Sm4AttackOutcome res = sm4_full_attack(ts, cfg);

    const std::size_t used = std::min(ts.size(), per_round);
    std::vector<std::uint32_t> truth;
    if (res.candidate_key)
        for (int b = 0; b < 4; ++b)
            truth.push_back(k32_six_bit(*res.candidate_key, b));

    if (!out_path.empty()) {
        RankReport rr = make_report(sm4_round32_correlations(std::span(ts.records).first(used), jam_word), truth);
        write_file(out_path, [&](std::ostream& o) { write_rank_csv(o, rr); });
    }
    if (!history_path.empty()) {
        if (truth.empty())
            throw std::runtime_error("no candidate key to rank a history against");
        AttackFn fn = [jam_word](std::span<const TraceRecord> r) { return sm4_round32_correlations(r, jam_word); };
        RankReport hr = rank_history(ts, fn, checkpoints, truth);
        write_file(history_path, [&](std::ostream& o) { write_history_csv(o, hr); });
    }

    for (const auto& r : res.rounds) {
        out << "round " << r.round << " six-bit " << hex64(r.key.value).substr(8);
        if (r.completed_previous_key)
            out << " k" << (r.round + 1) << " " << hex64(*r.completed_previous_key).substr(8);
        out << "\n";
    }
    out << "verification z " << fmt(res.verification_z, 4) << ", schedule "
        << (res.schedule_consistent ? "consistent" : "inconsistent") << "\n";
    if (!res.success) {
        if (res.candidate_key)
            out << "candidate key " << res.candidate_key->hex() << "\n";
        err << "SM4 key recovery failed: " << res.diagnostic << "\n";
        return kExitRuntime;
    }
    out << "master key " << res.key->hex() << "\n";
    return kExitOk;
}

int cmd_scan(const std::string& cipher_name, std::size_t traces, std::uint64_t seed, const std::string& key_hex,
             const ModelFlags& mf, const std::string& out_path, std::ostream& out, std::ostream& err)
{
    const CipherId cipher = parse_cipher_id(cipher_name);
    const LeakModel model = mf.build(cipher);
    ScanReport rep = scan_jam_offsets(cipher, CipherKey::from_hex(key_hex), model, traces, seed);
    if (!out_path.empty())
        write_file(out_path, [&](std::ostream& o) {
            o << "jam_word,mean_cycles\n";
            for (std::size_t w = 0; w < rep.mean_time.size(); ++w)
                o << w << ',' << fmt(rep.mean_time[w], 17) << '\n';
            o << "baseline," << fmt(rep.baseline_mean, 17) << '\n';
        });
    std::size_t above = 0;
    for (double m : rep.mean_time)
        if (m > rep.baseline_mean)
            ++above;
    out << "baseline mean " << fmt(rep.baseline_mean, 8) << "\n";
    out << "best word " << rep.best_word << " mean " << fmt(rep.mean_time[rep.best_word], 8) << "\n";
    out << "words above baseline " << above << "/" << rep.mean_time.size() << "\n";
    if (rep.flat)
        err << "warning: flat profile, no offset is distinguishable\n";
    return kExitOk;
}

int cmd_rank_history(const std::string& in, int jam_word, const std::vector<std::size_t>& checkpoints,
                     const std::string& key_hex, std::optional<double> filter_radius, const std::string& out_path,
                     std::ostream& out)
{
    TraceSet ts = load_input(in, filter_radius, out);
    const CipherKey key = CipherKey::from_hex(key_hex);
    AttackFn fn;
    std::vector<std::uint32_t> truth;
    if (ts.cipher == CipherId::AesCt) {
        fn = [jam_word](std::span<const TraceRecord> r) { return aes_last_round_correlations(r, jam_word); };
        const Block k10 = aes_key_schedule(key)[10];
        truth.assign(k10.begin(), k10.end());
    } else {
        fn = [jam_word](std::span<const TraceRecord> r) { return sm4_round32_correlations(r, jam_word); };
        for (int b = 0; b < 4; ++b)
            truth.push_back(k32_six_bit(key, b));
    }
    RankReport rep = rank_history(ts, fn, checkpoints, truth);
    write_file(out_path, [&](std::ostream& o) { write_history_csv(o, rep); });
    for (const auto& p : rep.history) {
        double bits = 0.0;
        std::size_t first = 0;
        for (auto r : p.ranks) {
            bits += std::log2(static_cast<double>(r));
            first += r == 1;
        }
        out << "n " << p.observations << " rank-1 " << first << "/" << p.ranks.size() << " log2 rank sum "
            << fmt(bits, 4) << "\n";
    }
    return kExitOk;
}

#ifdef ALIASLAB_HAVE_PROBE
int cmd_probe(const std::string& mode, const std::string& offset_class, const std::vector<int>& cpus,
              std::size_t iterations, const std::string& out_path, std::ostream& out)
{
    probe::ProbeConfig cfg;
    cfg.mode = probe::parse_mode(mode);
    cfg.offset_class = probe::parse_offset_class(offset_class);
    cfg.iterations = iterations;
    if (cpus.size() == 2) {
        cfg.cpus = {cpus[0], cpus[1]};
    } else {
        auto pairs = probe::sibling_cpu_pairs();
        if (pairs.empty())
            throw probe::ProbeUnavailable("no hyper-thread sibling pair found");
        cfg.cpus = pairs.front();
    }
    out << "cpus " << cfg.cpus.probe_cpu << "," << cfg.cpus.sibling_cpu << "\n";
    if (cfg.mode == probe::Mode::ReadLatencyCurve) {
        auto curve = probe::read_latency_curve(cfg);
        if (!out_path.empty())
            write_file(out_path, [&](std::ostream& o) { write_curve_csv(o, curve); });
        out << "0 conflicts " << fmt(curve.front()) << " cycles, 64 conflicts " << fmt(curve.back()) << " cycles\n";
        return kExitOk;
    }
    auto h = probe::run_probe(cfg);
    if (!out_path.empty())
        write_file(out_path, [&](std::ostream& o) { write_histogram_csv(o, h); });
    out << "batches " << h.total << " median " << fmt(h.median) << " std " << fmt(h.stddev) << " cycles\n";
    return kExitOk;
}
#endif

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"4K-aliasing timing side-channel laboratory"};
    app.require_subcommand(1);

    std::string cipher;
    std::size_t traces = 1000;
    std::uint64_t seed = 0;
    std::string key = kDefaultKey;
    std::string in_path, out_path, history_path, csv_path;
    std::vector<std::size_t> checkpoints;
    std::optional<double> filter_radius;
    std::size_t beam = 32;
    ModelFlags mf;

    auto* gen = app.add_subcommand("gen", "Simulate a trace set");
    gen->add_option("--cipher", cipher, "Victim cipher")->required()->check(CLI::IsMember({"aes-ct", "sm4-cn"}));
    gen->add_option("--traces", traces, "Number of traces")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "Seed");
    gen->add_option("--key", key, "Victim key (32 hex digits)");
    gen->add_option("--out", out_path, "Output MJT1 file")->required();
    gen->add_option("--csv", csv_path, "Also export the records as CSV");
    mf.add_to(*gen);

    int jam_word = 0;
    auto* aes = app.add_subcommand("attack-aes", "Last-round key recovery on an AES-CT trace set");
    aes->add_option("--in", in_path, "Input MJT1 file")->required();
    aes->add_option("--jam-word", jam_word, "Jammed table word")->check(CLI::Range(0, 63));
    aes->add_option("--checkpoints", checkpoints, "Trace counts for the rank history")->delimiter(',');
    aes->add_option("--key", key, "True key, to report ranks");
    aes->add_option("--filter-radius", filter_radius, "Drop records further than this from the mean")
        ->check(CLI::NonNegativeNumber);
    aes->add_option("--out", out_path, "Rank report CSV");
    aes->add_option("--history", history_path, "Rank history CSV");

    std::size_t per_round = 40000;
    auto* sm4 = app.add_subcommand("attack-sm4", "Multi-round key recovery on an SM4-CN trace set");
    sm4->add_option("--in", in_path, "Input MJT1 file")->required();
    sm4->add_option("--jam-word", jam_word, "Jammed table word")->check(CLI::Range(0, 63));
    sm4->add_option("--traces", per_round, "Traces used per round")->check(CLI::PositiveNumber);
    sm4->add_option("--beam", beam, "Paths kept per round after a failed greedy pass")->check(CLI::PositiveNumber);
    sm4->add_option("--checkpoints", checkpoints, "Trace counts for the round-32 rank history")->delimiter(',');
    sm4->add_option("--filter-radius", filter_radius, "Drop records further than this from the mean")
        ->check(CLI::NonNegativeNumber);
    sm4->add_option("--out", out_path, "Round-32 rank report CSV");
    sm4->add_option("--history", history_path, "Round-32 rank history CSV");

    auto* scan = app.add_subcommand("scan", "Mean victim time for every jammed table word");
    scan->add_option("--cipher", cipher, "Victim cipher")->required()->check(CLI::IsMember({"aes-ct", "sm4-cn"}));
    scan->add_option("--traces", traces, "Traces per offset")->check(CLI::PositiveNumber);
    scan->add_option("--seed", seed, "Seed");
    scan->add_option("--key", key, "Victim key (32 hex digits)");
    scan->add_option("--out", out_path, "Per-offset CSV");
    mf.add_to(*scan);

    auto* hist = app.add_subcommand("rank-history", "Rank of the true key bytes against the trace count");
    hist->add_option("--in", in_path, "Input MJT1 file")->required();
    hist->add_option("--key", key, "True key")->required();
    hist->add_option("--checkpoints", checkpoints, "Trace counts")->required()->delimiter(',');
    hist->add_option("--jam-word", jam_word, "Jammed table word")->check(CLI::Range(0, 63));
    hist->add_option("--filter-radius", filter_radius, "Drop records further than this from the mean")
        ->check(CLI::NonNegativeNumber);
    hist->add_option("--out", out_path, "Rank history CSV")->required();

    std::string mode = "RaW", offset_class = "same-word";
    std::vector<int> cpus;
    std::size_t iterations = 100000;
    auto* probe_cmd = app.add_subcommand("probe", "Hardware latency probe (x86-64, build option)");
    probe_cmd->add_option("--mode", mode, "RaR, WaR, RaW, RawW or curve")
        ->check(CLI::IsMember({"RaR", "WaR", "RaW", "RawW", "curve"}));
    probe_cmd->add_option("--offset-class", offset_class, "Sibling offset relative to the probe")
        ->check(CLI::IsMember({"different-line", "same-line-different-word", "same-word"}));
    probe_cmd->add_option("--cpus", cpus, "Two sibling logical CPUs")->delimiter(',')->expected(2);
    probe_cmd->add_option("--iterations", iterations, "Probe batches")->check(CLI::PositiveNumber);
    probe_cmd->add_option("--out", out_path, "Histogram or curve CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(cipher, traces, seed, key, mf, out_path, csv_path, out);
        if (aes->parsed())
            return cmd_attack_aes(in_path, jam_word, checkpoints, aes->count("--key") ? key : "",
                                  filter_radius, out_path, history_path, out);
        if (sm4->parsed())
            return cmd_attack_sm4(in_path, jam_word, per_round, beam, filter_radius, out_path, history_path,
                                  checkpoints, out, err);
        if (scan->parsed())
            return cmd_scan(cipher, traces, seed, key, mf, out_path, out, err);
        if (hist->parsed())
            return cmd_rank_history(in_path, jam_word, checkpoints, key, filter_radius, out_path, out);
        if (probe_cmd->parsed()) {
#ifdef ALIASLAB_HAVE_PROBE
            return cmd_probe(mode, offset_class, cpus, iterations, out_path, out);
#else
            err << "probe unavailable: rebuild with -DALIASLAB_BUILD_PROBE=ON on x86-64 Linux\n";
            return kExitRuntime;
#endif
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace aliaslab
