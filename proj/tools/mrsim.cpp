// mrsim: generate workloads, run modeled MapReduce steps, sweep
// configurations, and verify the simulator's invariants from the shell.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsim/mrsim.hpp"

namespace {

using namespace mrsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEngine = 2;
constexpr int kExitVerify = 3;

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("MRSIM_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw ConfigError("MRSIM_SEED is not a number");
        }
    }
    return 1;
}

struct RunFlags {
    std::string workload;
    std::string scheduler = "bsp";
    std::string shuffle = "prefix";
    std::string remap = "off";
    std::string strike;
    double tau = 2.0;
    int p = 1;
    SimTime latency = 1;
    SimTime gap = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_events = 100'000'000;
    std::string out;
};

PipelineConfig pipeline_config(const RunFlags& flags, std::uint64_t seed)
{
    PipelineConfig cfg;
    cfg.machine = MachineConfig{flags.p, flags.latency, flags.gap, seed};
    if (flags.scheduler == "bsp") {
        cfg.scheduler = SchedulerKind::bsp;
    } else if (flags.scheduler == "steal" || flags.scheduler == "steal-strikes") {
        cfg.scheduler = SchedulerKind::steal;
        if (flags.scheduler == "steal-strikes") cfg.strike.enabled = true;
    } else {
        throw ConfigError("unknown scheduler '" + flags.scheduler + "'");
    }
    if (!flags.strike.empty()) {
        if (cfg.scheduler != SchedulerKind::steal)
            throw ConfigError("--strike needs --scheduler steal");
        cfg.strike.enabled = true;
        std::string spec = flags.strike;
        auto comma = spec.find(',');
        std::string b_part = spec.substr(0, comma);
        try {
            cfg.strike.b = std::stoll(b_part);
        } catch (...) {
            throw ConfigError("--strike: bad threshold '" + b_part + "'");
        }
        if (comma != std::string::npos) {
            std::string mode = spec.substr(comma + 1);
            if (mode == "known")
                cfg.strike.known_total = true;
            else if (mode == "est")
                cfg.strike.known_total = false;
            else
                throw ConfigError("--strike: mode must be 'known' or 'est'");
        }
        if (cfg.strike.b <= 1) throw ConfigError("--strike: threshold must be > 1");
    }
    if (flags.shuffle == "hash")
        cfg.shuffle = ShuffleKind::hash;
    else if (flags.shuffle == "prefix")
        cfg.shuffle = ShuffleKind::prefix;
    else
        throw ConfigError("unknown shuffle '" + flags.shuffle + "'");
    if (flags.remap == "off")
        cfg.remap = RemapKind::off;
    else if (flags.remap == "redundant")
        cfg.remap = RemapKind::redundant;
    else
        throw ConfigError("unknown remap '" + flags.remap + "'");
    cfg.remap_tau = flags.tau;
    cfg.max_events = flags.max_events;
    return cfg;
}

std::vector<RunRecord> run_workload_file(const std::string& path, const RunFlags& flags,
                                         std::uint64_t seed, std::vector<std::string>* warnings)
{
    WorkloadFile file = load_workload(path);
    PipelineConfig cfg = pipeline_config(flags, seed);
    std::vector<RunRecord> rows;
    StepResult previous;
    for (std::size_t i = 0; i < file.steps.size(); ++i) {
        const StepSpec& spec = file.steps[i];
        WorkloadStep step = spec.step;
        if (i > 0 && step.elements.empty() && spec.chain)
            step = chain_next(previous.placed_outputs, spec.step.reduce, *spec.chain);
        StepResult result = run_step(step, cfg);
        if (warnings)
            warnings->insert(warnings->end(), result.report.warnings.begin(),
                             result.report.warnings.end());
        rows.push_back(make_run_record(result, cfg));
        previous = std::move(result);
    }
    return rows;
}

void write_or_print(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << text;
}

//------------------------------------------------------------------ gen

int cmd_gen(const GeneratorSpec& spec, const std::string& out_path)
{
    WorkloadStep step = generate(spec);
    StepParameters params = compute_parameters(step);
    WorkloadFile file;
    file.steps.push_back(StepSpec{step, std::nullopt});
    save_workload(file, out_path);
    std::cout << "wrote " << out_path << " (" << step.elements.size() << " elements)\n"
              << "w=" << params.w << " w_hat=" << params.w_hat << " m=" << params.m
              << " m_hat=" << params.m_hat << '\n';
    return kExitOk;
}

//------------------------------------------------------------------ run

int cmd_run(const RunFlags& flags)
{
    std::vector<std::string> warnings;
    std::vector<RunRecord> rows = run_workload_file(flags.workload, flags, flags.seed, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
    write_or_print(emit_report(rows), flags.out);
    return kExitOk;
}

//------------------------------------------------------------------ sweep

int cmd_sweep(const RunFlags& flags, const std::vector<int>& p_values, int seed_count,
              const std::vector<std::string>& schedulers, const std::string& plot_path)
{
    if (p_values.empty()) throw ConfigError("sweep: --p list is empty");
    if (seed_count < 1) throw ConfigError("sweep: --seeds must be >= 1");

    std::vector<RunRecord> rows;
    std::map<std::string, std::vector<double>> work_ratios, comm_ratios, output_ratios;
    std::map<std::string, std::map<int, double>> mean_work, mean_comm;

    WorkloadFile file = load_workload(flags.workload);
    if (!file.steps[0].step.initial_placement.empty()) {
        // pinned placements cannot follow a p sweep; fall back to random
        std::cerr << "note: ignoring the workload's pinned placement while sweeping p\n";
        file.steps[0].step.initial_placement.clear();
    }
    for (const std::string& scheduler : schedulers) {
        RunFlags cell = flags;
        cell.scheduler = scheduler;
        for (int p : p_values) {
            cell.p = p;
            double work_sum = 0, comm_sum = 0;
            for (int s = 0; s < seed_count; ++s) {
                std::uint64_t seed = flags.seed + static_cast<std::uint64_t>(s);
                PipelineConfig cfg = pipeline_config(cell, seed);
                StepResult result = run_step(file.steps[0].step, cfg);
                rows.push_back(make_run_record(result, cfg));
                CostBoundChecks checks = check_cost_bounds(result.report, result.params, p);
                work_ratios[scheduler].push_back(checks.work.ratio);
                comm_ratios[scheduler].push_back(checks.comm.ratio);
                output_ratios[scheduler].push_back(checks.output.ratio);
                work_sum += static_cast<double>(result.report.bottleneck_work);
                comm_sum += static_cast<double>(result.report.bottleneck_comm);
            }
            mean_work[scheduler][p] = work_sum / seed_count;
            mean_comm[scheduler][p] = comm_sum / seed_count;
        }
    }

    write_or_print(emit_report(rows), flags.out);

    std::ostream& summary = flags.out.empty() ? std::cerr : std::cout;
    for (const std::string& scheduler : schedulers)
        summary << "fitted-C " << scheduler << ": work=" << fitted_constant(work_ratios[scheduler])
                << " comm=" << fitted_constant(comm_ratios[scheduler])
                << " output=" << fitted_constant(output_ratios[scheduler]) << '\n';

    if (!plot_path.empty()) {
        SvgPlot plot("bottleneck metrics vs p", "p", "words / work units");
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
        int c = 0;
        for (const std::string& scheduler : schedulers) {
            SvgPlot::Series work_series{scheduler + " work", colors[c++ % 6], {}};
            SvgPlot::Series comm_series{scheduler + " comm", colors[c++ % 6], {}};
            for (int p : p_values) {
                work_series.points.push_back({static_cast<double>(p), mean_work[scheduler][p]});
                comm_series.points.push_back({static_cast<double>(p), mean_comm[scheduler][p]});
            }
            plot.add_series(std::move(work_series));
            plot.add_series(std::move(comm_series));
        }
        plot.save(plot_path);
    }
    return kExitOk;
}

//------------------------------------------------------------------ verify

struct SuiteOutcome {
    int checked = 0;
    int failed = 0;

    void record(const std::string& name, bool ok)
    {
        ++checked;
        if (!ok) ++failed;
        std::cout << (ok ? "pass" : "FAIL") << "  " << name << '\n';
    }
};

void verify_oracle(SuiteOutcome& outcome, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 1));
    bool all_ok = true;
    for (int t = 0; t < 100; ++t) {
        GeneratorSpec gen_spec;
        gen_spec.kind = t % 2 == 0 ? WorkloadKind::zipf : WorkloadKind::expander;
        gen_spec.n = rng.next_int(0, 200);
        gen_spec.key_count = std::max<std::int64_t>(1, gen_spec.n / 3);
        gen_spec.zipf_theta = 1.0;
        gen_spec.seed = rng.next_u64();
        WorkloadStep step = generate(gen_spec);
        if (t % 3 == 0) step.reduce.output_sizes = {1, 2};
        OutputMultiset expected = sequential_reference(step);
        int p = 1 << (t % 4);
        for (SchedulerKind sched : {SchedulerKind::bsp, SchedulerKind::steal})
            for (ShuffleKind shuffle : {ShuffleKind::hash, ShuffleKind::prefix})
                for (RemapKind remap : {RemapKind::off, RemapKind::redundant}) {
                    PipelineConfig cfg;
                    cfg.machine = MachineConfig{p, 1, 1, rng.next_u64()};
                    cfg.scheduler = sched;
                    cfg.shuffle = shuffle;
                    cfg.remap = remap;
                    cfg.strike.enabled = sched == SchedulerKind::steal && t % 2 == 0;
                    StepResult result = run_step(step, cfg);
                    all_ok = all_ok && result.outputs == expected;
                }
    }
    outcome.record("oracle: 100 random steps, all scheduler/shuffle/remap combos", all_ok);
}

void verify_lemma_remap(SuiteOutcome& outcome, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 2));
    bool all_ok = true;
    for (int t = 0; t < 100 && all_ok; ++t) {
        int p = static_cast<int>(rng.next_int(1, 16));
        std::vector<MapTrace::Entry> entries;
        std::int64_t n = rng.next_int(1, 150);
        for (std::int64_t i = 0; i < n; ++i) {
            WorkUnits w = rng.next_int(0, 9);
            Words o = rng.next_int(0, 9);
            if (rng.next_below(8) == 0) o *= 100;
            if (rng.next_below(8) == 0) w *= 100;
            entries.push_back(MapTrace::Entry{static_cast<std::size_t>(i), w, o,
                                              rng.next_int(1, 5),
                                              static_cast<PeId>(1 + rng.next_below(p))});
        }
        MapTrace trace = MapTrace::from_entries(std::move(entries));
        CommLedger ledger(p);
        try {
            run_redundant_remap(trace, MachineConfig{p, 1, 1, rng.next_u64()}, ledger);
        } catch (const std::logic_error&) {
            all_ok = false;
        }
    }
    outcome.record("lemma-remap: weighted partition bounds on 100 random traces", all_ok);
}

void verify_strike(SuiteOutcome& outcome, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 3));
    bool all_ok = true;
    for (int t = 0; t < 20 && all_ok; ++t) {
        GeneratorSpec gen_spec;
        gen_spec.kind = WorkloadKind::zipf;
        gen_spec.n = 400;
        gen_spec.key_count = 30;
        gen_spec.zipf_theta = 1.3;
        gen_spec.seed = rng.next_u64();
        WorkloadStep step = generate(gen_spec);
        PipelineConfig cfg;
        int p = 4 << (t % 3);
        cfg.machine = MachineConfig{p, 1, 0, rng.next_u64()};
        cfg.scheduler = SchedulerKind::steal;
        cfg.strike.enabled = true;
        cfg.strike.b = 2;
        StepResult result = run_step(step, cfg);
        for (PeId pe = 1; pe <= p; ++pe)
            all_ok = all_ok && static_cast<__int128>(result.per_pe_map_output[pe]) * p <=
                                   static_cast<__int128>(2) * result.map_output_total +
                                       static_cast<__int128>(p) * result.map_output_max_call;
    }
    outcome.record("strike: per-PE output within 2m'/p + m_hat'", all_ok);
}

void verify_shuffle_bound(SuiteOutcome& outcome, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 4));
    bool all_ok = true;
    for (int t = 0; t < 40 && all_ok; ++t) {
        GeneratorSpec gen_spec;
        gen_spec.kind = t % 2 == 0 ? WorkloadKind::all_same_key : WorkloadKind::zipf;
        gen_spec.n = rng.next_int(1, 400);
        gen_spec.key_count = std::max<std::int64_t>(1, gen_spec.n / 4);
        gen_spec.zipf_theta = 1.5;
        gen_spec.seed = rng.next_u64();
        WorkloadStep step = generate(gen_spec);
        PipelineConfig cfg;
        cfg.machine = MachineConfig{static_cast<int>(1 + rng.next_below(12)), 1, 1,
                                    rng.next_u64()};
        cfg.shuffle = ShuffleKind::prefix;
        try {
            run_step(step, cfg);  // run_shuffle enforces the bound internally
        } catch (const std::logic_error&) {
            all_ok = false;
        }
    }
    outcome.record("shuffle-bound: received volume within m'/p + max group", all_ok);
}

void verify_occupancy(SuiteOutcome& outcome, std::uint64_t seed)
{
    bool all_ok = true;
    for (int p = 1; p <= 6 && all_ok; ++p)
        for (int b = 1; b <= 12 && all_ok; ++b) {
            Occupancy exact = occupancy_exact(b, p);
            OccupancyEstimate est = occupancy_mc(b, p, 100000, derive_seed(seed, b * 100 + p));
            double sigma = std::max(est.standard_error, 1e-9);
            all_ok = std::abs(est.mean - exact.value()) <= 3 * sigma;
        }
    outcome.record("occupancy: Monte Carlo within 3 sigma of exact, b<=12 p<=6", all_ok);
}

void verify_superstep(SuiteOutcome& outcome, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 5));
    bool all_ok = true;
    for (int t = 0; t < 1000; ++t) {
        MachineConfig cfg{1, rng.next_int(0, 50), rng.next_int(0, 50), 1};
        WorkUnits w = rng.next_int(0, 100000);
        Words h = rng.next_int(0, 100000);
        all_ok = all_ok && superstep_cost(w, h, cfg) == w + cfg.latency + h * cfg.gap;
    }
    outcome.record("superstep: w_x + L + h*g on 1000 random tuples", all_ok);
}

void verify_hash(SuiteOutcome& outcome, std::uint64_t seed)
{
    bool all_ok = true;
    for (std::uint64_t k = 0; k < 100; ++k)
        all_ok = all_ok && hash_range(k, seed, 64) == hash_range(k, seed, 64);
    const int buckets = 64;
    std::vector<std::int64_t> load(buckets, 0);
    const std::int64_t keys = 100000;
    for (std::int64_t k = 0; k < keys; ++k) load[hash_range(k, seed, buckets)] += 1;
    double expected = static_cast<double>(keys) / buckets;
    double chi2 = 0;
    for (std::int64_t l : load) chi2 += (l - expected) * (l - expected) / expected;
    double dof = buckets - 1;
    all_ok = all_ok && chi2 < dof + 5 * std::sqrt(2 * dof);
    outcome.record("hash: deterministic and chi-square uniform over 64 buckets", all_ok);
}

void verify_zipf(SuiteOutcome& outcome, std::uint64_t seed)
{
    GeneratorSpec gen_spec;
    gen_spec.kind = WorkloadKind::zipf;
    gen_spec.n = 40000;
    gen_spec.key_count = 50;
    gen_spec.zipf_theta = 0.0;
    gen_spec.seed = seed;
    WorkloadStep step = generate(gen_spec);
    std::map<KeyId, std::int64_t> histogram;
    for (const auto& e : step.elements) histogram[e.emissions[0].key] += 1;
    double expected = static_cast<double>(gen_spec.n) / gen_spec.key_count;
    double chi2 = 0;
    for (const auto& [key, count] : histogram)
        chi2 += (count - expected) * (count - expected) / expected;
    double dof = gen_spec.key_count - 1;
    outcome.record("zipf: theta=0 key histogram is uniform (chi-square)",
                   chi2 < dof + 5 * std::sqrt(2 * dof));
}

int cmd_verify(const std::string& suite, std::uint64_t seed)
{
    SuiteOutcome outcome;
    bool known = false;
    auto want = [&](const char* name) {
        bool match = suite == name || suite == "all";
        known = known || match;
        return match;
    };
    if (want("oracle")) verify_oracle(outcome, seed);
    if (want("lemma-remap")) verify_lemma_remap(outcome, seed);
    if (want("strike")) verify_strike(outcome, seed);
    if (want("shuffle-bound")) verify_shuffle_bound(outcome, seed);
    if (want("occupancy")) verify_occupancy(outcome, seed);
    if (want("superstep")) verify_superstep(outcome, seed);
    if (want("hash")) verify_hash(outcome, seed);
    if (want("zipf")) verify_zipf(outcome, seed);
    if (!known)
        throw ConfigError("unknown suite '" + suite +
                          "' (oracle, lemma-remap, strike, shuffle-bound, occupancy, "
                          "superstep, hash, zipf, all)");
    std::cout << outcome.checked - outcome.failed << "/" << outcome.checked << " properties ok\n";
    return outcome.failed == 0 ? kExitOk : kExitVerify;
}

//------------------------------------------------------------------ occupancy

int cmd_occupancy(double b, int p, std::int64_t trials, std::uint64_t seed, bool exact_only)
{
    if (exact_only) {
        Occupancy exact = occupancy_exact(static_cast<int>(b), p);
        std::cout << "exact " << exact.numerator << "/" << exact.denominator << " = "
                  << exact.value() << '\n';
        return kExitOk;
    }
    bool have_exact = false;
    try {
        Occupancy exact = occupancy_exact(static_cast<int>(b), p);
        std::cout << "exact " << exact.numerator << "/" << exact.denominator << " = "
                  << exact.value() << '\n';
        have_exact = true;
    } catch (const ConfigError&) {
        // fall through to the estimator
    }
    OccupancyEstimate est = occupancy_mc(b, p, trials, seed);
    std::cout << "mc " << est.mean << " +- " << est.standard_error << " (" << est.trials
              << " trials)" << '\n';
    (void)have_exact;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"deterministic MapReduce cost-model simulator"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic workload file");
    GeneratorSpec gen_spec;
    std::string gen_kind = "uniform";
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "uniform|zipf|single_heavy|heavy_reducer|expander|all_same_key");
    gen->add_option("--n", gen_spec.n, "element count")->required();
    gen->add_option("--keys", gen_spec.key_count, "key count (kind-specific default)");
    gen->add_option("--theta", gen_spec.zipf_theta, "zipf exponent");
    gen->add_option("--heavy-cost", gen_spec.heavy_cost, "single_heavy: explicit heavy cost");
    gen->add_option("--heavy-volume", gen_spec.heavy_volume, "heavy_reducer fan-in");
    gen->add_option("--degree", gen_spec.expander_degree, "expander degree");
    gen->add_option("--p", gen_spec.p, "PE count for placement-aware kinds");
    gen->add_option("--seed", gen_spec.seed, "generator seed");
    gen->add_option("--out", gen_out, "output workload file")->required();

    // run
    auto* run = app.add_subcommand("run", "run one workload through the pipeline");
    RunFlags run_flags;
    run->add_option("--workload", run_flags.workload, "workload JSON file")->required();
    run->add_option("--scheduler", run_flags.scheduler, "bsp|steal|steal-strikes");
    run->add_option("--strike", run_flags.strike, "b[,known|est] strike threshold");
    run->add_option("--shuffle", run_flags.shuffle, "hash|prefix");
    run->add_option("--remap", run_flags.remap, "off|redundant");
    run->add_option("--tau", run_flags.tau, "remap trigger factor");
    run->add_option("--p", run_flags.p, "PE count")->required();
    run->add_option("--L", run_flags.latency, "latency per superstep/message");
    run->add_option("--g", run_flags.gap, "gap per word");
    run->add_option("--seed", run_flags.seed, "run seed (default MRSIM_SEED or 1)");
    run->add_option("--max-events", run_flags.max_events, "event budget before diagnosing");
    run->add_option("--out", run_flags.out, "CSV output file (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "cartesian sweep over p, seeds, schedulers");
    RunFlags sweep_flags;
    std::vector<int> sweep_p;
    int sweep_seeds = 1;
    std::vector<std::string> sweep_schedulers{"bsp", "steal"};
    std::string sweep_plot;
    sweep->add_option("--workload", sweep_flags.workload, "workload JSON file")->required();
    sweep->add_option("--p", sweep_p, "PE counts (comma separated)")
        ->required()
        ->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "number of seeds per cell");
    sweep->add_option("--schedulers", sweep_schedulers, "schedulers to sweep")->delimiter(',');
    sweep->add_option("--shuffle", sweep_flags.shuffle, "hash|prefix");
    sweep->add_option("--remap", sweep_flags.remap, "off|redundant");
    sweep->add_option("--L", sweep_flags.latency, "latency");
    sweep->add_option("--g", sweep_flags.gap, "gap per word");
    sweep->add_option("--seed", sweep_flags.seed, "base seed");
    sweep->add_option("--out", sweep_flags.out, "CSV output file (default stdout)");
    sweep->add_option("--plot", sweep_plot, "SVG plot output file");

    // verify
    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string verify_suite;
    std::uint64_t verify_seed = 0;
    verify->add_option("--suite", verify_suite, "suite name or 'all'")->required();
    verify->add_option("--seed", verify_seed, "suite seed");

    // occupancy
    auto* occupancy = app.add_subcommand("occupancy", "query the occupancy oracle");
    double occ_b = 1;
    int occ_p = 1;
    std::int64_t occ_trials = 100000;
    std::uint64_t occ_seed = 0;
    bool occ_exact = false;
    occupancy->add_option("--b", occ_b, "balls")->required();
    occupancy->add_option("--p", occ_p, "bins")->required();
    occupancy->add_option("--trials", occ_trials, "Monte Carlo trials");
    occupancy->add_option("--seed", occ_seed, "estimator seed");
    occupancy->add_flag("--exact", occ_exact, "exact value only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::uint64_t base_seed = default_seed();
        if (gen->parsed()) {
            gen_spec.kind = workload_kind_from(gen_kind);
            if (gen->count("--seed") == 0) gen_spec.seed = base_seed;
            return cmd_gen(gen_spec, gen_out);
        }
        if (run->parsed()) {
            if (run->count("--seed") == 0) run_flags.seed = base_seed;
            return cmd_run(run_flags);
        }
        if (sweep->parsed()) {
            if (sweep->count("--seed") == 0) sweep_flags.seed = base_seed;
            return cmd_sweep(sweep_flags, sweep_p, sweep_seeds, sweep_schedulers, sweep_plot);
        }
        if (verify->parsed()) {
            if (verify->count("--seed") == 0) verify_seed = base_seed;
            return cmd_verify(verify_suite, verify_seed);
        }
        if (occupancy->parsed()) {
            if (occupancy->count("--seed") == 0) occ_seed = base_seed;
            return cmd_occupancy(occ_b, occ_p, occ_trials, occ_seed, occ_exact);
        }
    } catch (const EngineDiagnostic& e) {
        std::cerr << "engine diagnostic: " << e.what() << '\n';
        return kExitEngine;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitEngine;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
