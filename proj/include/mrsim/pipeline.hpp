#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mrsim/analysis.hpp"
#include "mrsim/core.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/remap.hpp"
#include "mrsim/sched_bsp.hpp"
#include "mrsim/sched_steal.hpp"
#include "mrsim/shuffle.hpp"
#include "mrsim/types.hpp"
#include "mrsim/workloads.hpp"

namespace mrsim {

enum class SchedulerKind { bsp, steal };
enum class ShuffleKind { hash, prefix };
enum class RemapKind { off, redundant };

struct PipelineConfig {
    MachineConfig machine;
    SchedulerKind scheduler = SchedulerKind::bsp;
    ShuffleKind shuffle = ShuffleKind::hash;
    RemapKind remap = RemapKind::off;
    double remap_tau = 2.0;
    bool remap_partial = false;  // placeholder: partial redistribution is not built
    StrikeConfig strike;                  // steal only
    StealOrder steal_order = StealOrder::sorted_desc;
    bool disperse_outputs = true;
    WorkUnits assembly_cost_per_word = 0;
    double precondition_factor = 4.0;
    double shuffle_c_exponent = 3.0;
    std::uint64_t hash_seed = 0;  // 0 = derive from machine.seed
    std::uint64_t max_events = 100'000'000;
    bool check_invariants = true;

    std::string scheduler_name() const
    {
        if (scheduler == SchedulerKind::bsp) return "bsp";
        return strike.enabled ? "steal-strikes" : "steal";
    }
    std::string shuffle_name() const { return shuffle == ShuffleKind::hash ? "hash" : "prefix"; }
    std::string remap_name() const { return remap == RemapKind::off ? "off" : "redundant"; }
};

namespace detail {

inline void add_phase(ExecutionReport& report, PhaseStats stats)
{
    report.bottleneck_work += stats.bottleneck_work;
    report.model_time += stats.time;
    report.phases.push_back(std::move(stats));
}

// every PE spends the whole stolen phase on it, busy or waiting
inline void credit_steal_phase(ExecutionReport& report, const StealOutcome& outcome)
{
    for (PeId pe = 1; pe <= report.p; ++pe) {
        report.per_pe_work[pe] += outcome.makespan;
        report.per_pe_busy[pe] += outcome.per_pe_busy[pe];
    }
}

}  // namespace detail

/// Execute one step against an explicit placement.
inline StepResult run_step(const WorkloadStep& step, const Placement& placement,
                           const PipelineConfig& cfg)
{
    cfg.machine.validate();
    if (cfg.remap_partial)
        throw ConfigError("partial redistribution is not implemented; use the redundant remap");
    const int p = cfg.machine.p;
    step.validate(p);
    if (placement.size() != step.elements.size())
        throw ConfigError("run_step: placement must cover every element");
    for (PeId pe : placement)
        if (pe < 1 || pe > p) throw ConfigError("run_step: placement PE outside 1..p");

    const StepTrace trace = expand_step(step);
    const std::uint64_t hash_seed =
        cfg.hash_seed ? cfg.hash_seed : derive_seed(cfg.machine.seed, 0xA5A5ULL);

    StepResult result;
    result.params = compute_parameters(step, trace);
    result.report.init(p);
    result.per_pe_map_calls.assign(p + 1, 0);
    result.per_pe_map_work.assign(p + 1, 0);
    result.per_pe_map_output.assign(p + 1, 0);
    result.per_pe_reduce_output.assign(p + 1, 0);
    result.per_pe_input_volume.assign(p + 1, 0);
    ExecutionReport& report = result.report;

    for (std::size_t i = 0; i < step.elements.size(); ++i)
        result.per_pe_input_volume[placement[i]] += step.elements[i].size_words;

    // input-balance precondition (violations degrade bounds, not correctness)
    {
        double cap = cfg.precondition_factor *
                     (static_cast<double>(result.params.m) / p +
                      static_cast<double>(result.params.m_hat));
        for (PeId pe = 1; pe <= p; ++pe)
            if (static_cast<double>(result.per_pe_input_volume[pe]) > cap) {
                report.warnings.push_back(
                    "input volume on PE " + std::to_string(pe) + " (" +
                    std::to_string(result.per_pe_input_volume[pe]) +
                    " words) exceeds the balance precondition " + std::to_string(cap));
                break;
            }
    }

    //---------------------------------------------------------------- map
    std::vector<PeId> exec_pe(step.elements.size(), 1);
    const bool merged_supersteps =
        cfg.scheduler == SchedulerKind::bsp && cfg.shuffle == ShuffleKind::hash;

    WorkUnits map_wx = 0;
    if (cfg.scheduler == SchedulerKind::bsp) {
        for (std::size_t i = 0; i < step.elements.size(); ++i) {
            PeId pe = placement[i];
            exec_pe[i] = pe;
            result.per_pe_map_calls[pe] += 1;
            result.per_pe_map_work[pe] += step.elements[i].map_cost;
        }
        for (PeId pe = 1; pe <= p; ++pe) {
            report.per_pe_work[pe] += result.per_pe_map_work[pe];
            report.per_pe_busy[pe] += result.per_pe_map_work[pe];
            map_wx = std::max(map_wx, result.per_pe_map_work[pe]);
        }
        if (!merged_supersteps)
            detail::add_phase(report, PhaseStats{"map", map_wx, 0,
                                                 superstep_cost(map_wx, 0, cfg.machine)});
    } else {
        std::vector<std::vector<Job>> jobs(p + 1);
        std::vector<std::vector<std::size_t>> job_elements(p + 1);
        for (std::size_t i = 0; i < step.elements.size(); ++i) {
            const InputElement& e = step.elements[i];
            jobs[placement[i]].push_back(
                Job{e.id, e.size_words, e.map_cost, trace.element_output_words[i]});
            job_elements[placement[i]].push_back(i);
        }
        StealConfig scfg;
        scfg.order = cfg.steal_order;
        scfg.strike = cfg.strike;
        scfg.max_events = cfg.max_events;
        scfg.check_invariants = cfg.check_invariants;
        int phase = report.ledger.begin_phase("map-steal");
        StealOutcome outcome = run_work_stealing(jobs, cfg.machine, scfg, report.ledger, phase);
        std::size_t flat = 0;
        for (PeId pe = 1; pe <= p; ++pe)
            for (std::size_t local = 0; local < job_elements[pe].size(); ++local, ++flat)
                exec_pe[job_elements[pe][local]] = outcome.executed_on[flat];
        for (std::size_t i = 0; i < step.elements.size(); ++i) {
            result.per_pe_map_calls[exec_pe[i]] += 1;
            result.per_pe_map_work[exec_pe[i]] += step.elements[i].map_cost;
        }
        detail::credit_steal_phase(report, outcome);
        detail::add_phase(report, PhaseStats{"map-steal", outcome.makespan,
                                             report.ledger.phase_h(phase), outcome.makespan});
    }

    for (std::size_t i = 0; i < step.elements.size(); ++i)
        result.per_pe_map_output[exec_pe[i]] += trace.element_output_words[i];
    result.map_output_total = trace.words_b;
    for (Words o : trace.element_output_words)
        result.map_output_max_call = std::max(result.map_output_max_call, o);

    //---------------------------------------------------------------- remap
    if (cfg.remap == RemapKind::redundant &&
        needs_remap(result.per_pe_map_output, result.map_output_total,
                    result.map_output_max_call, p, cfg.remap_tau)) {
        result.remap_triggered = true;
        std::vector<MapTrace::Entry> entries;
        entries.reserve(step.elements.size());
        for (std::size_t i = 0; i < step.elements.size(); ++i)
            entries.push_back(MapTrace::Entry{i, step.elements[i].map_cost,
                                              trace.element_output_words[i],
                                              step.elements[i].size_words, exec_pe[i]});
        std::stable_sort(entries.begin(), entries.end(),
                         [](const MapTrace::Entry& a, const MapTrace::Entry& b) {
                             if (a.pe != b.pe) return a.pe < b.pe;
                             return a.index < b.index;
                         });
        MapTrace map_trace = MapTrace::from_entries(std::move(entries));
        RemapOutcome remap = run_redundant_remap(map_trace, cfg.machine, report.ledger);
        for (std::size_t k = 0; k < map_trace.entries.size(); ++k)
            exec_pe[map_trace.entries[k].index] = remap.partition.new_pe[k];
        for (PhaseStats& ph : remap.phases) {
            if (ph.name == "remap-exec")
                for (PeId pe = 1; pe <= p; ++pe) {
                    report.per_pe_work[pe] += remap.partition.per_pe_work[pe];
                    report.per_pe_busy[pe] += remap.partition.per_pe_work[pe];
                }
            else if (ph.bottleneck_work > 0)
                // prefix-sum infrastructure: time, not mu/rho compute
                for (PeId pe = 1; pe <= p; ++pe) report.per_pe_work[pe] += ph.bottleneck_work;
            detail::add_phase(report, ph);
        }
        // production now happens at the remapped homes
        std::fill(result.per_pe_map_output.begin(), result.per_pe_map_output.end(), 0);
        for (std::size_t i = 0; i < step.elements.size(); ++i)
            result.per_pe_map_output[exec_pe[i]] += trace.element_output_words[i];
    }

    //---------------------------------------------------------------- shuffle
    // group index -> owning PE, plus the routing exchange(s)
    std::vector<PeId> group_owner(trace.groups.size(), 1);
    Words route_h = 0;
    if (cfg.shuffle == ShuffleKind::hash) {
        int phase = report.ledger.begin_phase(merged_supersteps ? "superstep1" : "route");
        for (std::size_t g = 0; g < trace.groups.size(); ++g)
            group_owner[g] =
                static_cast<PeId>(1 + hash_range(trace.groups[g].key, hash_seed, p));
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            const KeyGroup& grp = trace.groups[g];
            for (std::size_t k = 0; k < grp.source_elements.size(); ++k) {
                Words pair_words = grp.key_size_words + grp.value_sizes[k];
                report.ledger.add_message(phase, exec_pe[grp.source_elements[k]],
                                          group_owner[g], pair_words);
            }
        }
        route_h = report.ledger.phase_h(phase);
        if (merged_supersteps)
            detail::add_phase(report, PhaseStats{"superstep1", map_wx, route_h,
                                                 superstep_cost(map_wx, route_h, cfg.machine)});
        else
            detail::add_phase(report, PhaseStats{"route", 0, route_h,
                                                 superstep_cost(0, route_h, cfg.machine)});
    } else {
        std::vector<PlacedPair> pairs;
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            const KeyGroup& grp = trace.groups[g];
            for (std::size_t k = 0; k < grp.source_elements.size(); ++k)
                pairs.push_back(PlacedPair{grp.key, grp.key_size_words, grp.value_sizes[k],
                                           grp.source_elements[k],
                                           exec_pe[grp.source_elements[k]]});
        }
        ShuffleConfig scfg;
        scfg.c_exponent = cfg.shuffle_c_exponent;
        scfg.hash_seed = hash_seed;
        ShuffleResult shuffled =
            run_shuffle(pairs, cfg.machine, scfg, report.ledger, &report.warnings);
        result.shuffle_attempts = shuffled.assignment.attempts;
        for (PhaseStats& ph : shuffled.phases) {
            if (ph.bottleneck_work > 0)
                // prefix-sum infrastructure: time, not mu/rho compute
                for (PeId pe = 1; pe <= p; ++pe) report.per_pe_work[pe] += ph.bottleneck_work;
            detail::add_phase(report, ph);
        }
        if (!trace.groups.empty()) {
            std::map<KeyId, PeId> owner_by_key;
            for (const auto& e : shuffled.assignment.entries) owner_by_key[e.key] = e.owner;
            for (std::size_t g = 0; g < trace.groups.size(); ++g)
                group_owner[g] = owner_by_key.at(trace.groups[g].key);
        }
    }

    //---------------------------------------------------------------- reduce
    std::vector<PeId> reduce_pe(trace.groups.size(), 1);
    std::vector<WorkUnits> reduce_work(p + 1, 0);
    if (cfg.scheduler == SchedulerKind::bsp) {
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            reduce_pe[g] = group_owner[g];
            reduce_work[group_owner[g]] += trace.groups[g].reduce_cost;
            if (cfg.assembly_cost_per_word > 0)
                reduce_work[group_owner[g]] +=
                    cfg.assembly_cost_per_word * trace.groups[g].input_words;
        }
        WorkUnits reduce_wx = 0;
        for (PeId pe = 1; pe <= p; ++pe) {
            report.per_pe_work[pe] += reduce_work[pe];
            report.per_pe_busy[pe] += reduce_work[pe];
            reduce_wx = std::max(reduce_wx, reduce_work[pe]);
        }
        // dispersal of extra outputs rides on the reduce superstep
        int phase = report.ledger.begin_phase(merged_supersteps ? "superstep2" : "disperse");
        Rng disperse_rng(derive_seed(cfg.machine.seed, 0xD15BULL));
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            const KeyGroup& grp = trace.groups[g];
            result.per_pe_reduce_output[reduce_pe[g]] += grp.output_words;
            for (std::size_t k = 0; k < grp.output_sizes.size(); ++k) {
                PeId home = reduce_pe[g];
                if (cfg.disperse_outputs && k > 0) {
                    PeId target = static_cast<PeId>(1 + disperse_rng.next_below(p));
                    report.ledger.add_message(phase, home, target, grp.output_sizes[k]);
                    home = target;
                }
                result.placed_outputs.push_back(
                    PlacedOutput{grp.key, grp.output_sizes[k], home});
            }
        }
        Words disperse_h = report.ledger.phase_h(phase);
        detail::add_phase(report,
                          PhaseStats{merged_supersteps ? "superstep2" : "reduce", reduce_wx,
                                     disperse_h,
                                     superstep_cost(reduce_wx, disperse_h, cfg.machine)});
    } else {
        std::vector<std::vector<Job>> jobs(p + 1);
        std::vector<std::vector<std::size_t>> job_groups(p + 1);
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            const KeyGroup& grp = trace.groups[g];
            jobs[group_owner[g]].push_back(Job{static_cast<std::uint64_t>(g), grp.input_words,
                                               grp.reduce_cost, grp.output_words});
            job_groups[group_owner[g]].push_back(g);
        }
        StealConfig scfg;
        scfg.order = cfg.steal_order;
        scfg.strike = cfg.strike;
        scfg.max_events = cfg.max_events;
        scfg.check_invariants = cfg.check_invariants;
        int phase = report.ledger.begin_phase("reduce-steal");
        StealOutcome outcome = run_work_stealing(jobs, cfg.machine, scfg, report.ledger, phase);
        std::size_t flat = 0;
        for (PeId pe = 1; pe <= p; ++pe)
            for (std::size_t local = 0; local < job_groups[pe].size(); ++local, ++flat)
                reduce_pe[job_groups[pe][local]] = outcome.executed_on[flat];
        detail::credit_steal_phase(report, outcome);
        detail::add_phase(report, PhaseStats{"reduce-steal", outcome.makespan,
                                             report.ledger.phase_h(phase), outcome.makespan});

        int disperse_phase = report.ledger.begin_phase("disperse");
        Rng disperse_rng(derive_seed(cfg.machine.seed, 0xD15BULL));
        for (std::size_t g = 0; g < trace.groups.size(); ++g) {
            const KeyGroup& grp = trace.groups[g];
            result.per_pe_reduce_output[reduce_pe[g]] += grp.output_words;
            for (std::size_t k = 0; k < grp.output_sizes.size(); ++k) {
                PeId home = reduce_pe[g];
                if (cfg.disperse_outputs && k > 0) {
                    PeId target = static_cast<PeId>(1 + disperse_rng.next_below(p));
                    report.ledger.add_message(disperse_phase, home, target, grp.output_sizes[k]);
                    home = target;
                }
                result.placed_outputs.push_back(
                    PlacedOutput{grp.key, grp.output_sizes[k], home});
            }
        }
        Words disperse_h = report.ledger.phase_h(disperse_phase);
        detail::add_phase(report, PhaseStats{"disperse", 0, disperse_h,
                                             superstep_cost(0, disperse_h, cfg.machine)});
    }

    //---------------------------------------------------------------- report
    for (const PlacedOutput& d : result.placed_outputs) {
        auto& sizes = result.outputs[d.origin_key];
        sizes.push_back(d.size_words);
    }
    for (auto& [key, sizes] : result.outputs) std::sort(sizes.begin(), sizes.end());
    report.per_pe_output_words = result.per_pe_reduce_output;
    report.finish();
    return result;
}

/// Execute one step: pinned placement when complete, random otherwise.
inline StepResult run_step(const WorkloadStep& step, const PipelineConfig& cfg)
{
    Placement placement = resolve_placement(step, cfg.machine.p, cfg.machine.seed);
    return run_step(step, placement, cfg);
}

/// Run a chained pipeline; step i+1's inputs are step i's placed outputs.
inline std::vector<StepResult> run_chain(const ChainSpec& spec, const PipelineConfig& cfg)
{
    std::vector<StepResult> results;
    results.push_back(run_step(spec.first, cfg));
    WorkloadStep current;
    for (const ChainSpec::Stage& stage : spec.rest) {
        current = chain_next(results.back().placed_outputs, stage.reduce, stage.rule);
        results.push_back(run_step(current, cfg));
    }
    return results;
}

/// The plain two-superstep BSP execution with hash routing.
inline StepResult run_bsp_step(const WorkloadStep& step, const Placement& placement,
                               const BspRunConfig& cfg)
{
    PipelineConfig pc;
    pc.machine = cfg.machine;
    pc.scheduler = SchedulerKind::bsp;
    pc.shuffle = ShuffleKind::hash;
    pc.remap = RemapKind::off;
    pc.disperse_outputs = cfg.disperse_outputs;
    pc.assembly_cost_per_word = cfg.assembly_cost_per_word;
    pc.precondition_factor = cfg.precondition_factor;
    pc.hash_seed = cfg.hash_seed;
    return run_step(step, placement, pc);
}

inline RunRecord make_run_record(const StepResult& result, const PipelineConfig& cfg)
{
    RunRecord rec;
    rec.scheduler = cfg.scheduler_name();
    rec.shuffle = cfg.shuffle_name();
    rec.remap = cfg.remap_name();
    rec.p = cfg.machine.p;
    rec.seed = cfg.machine.seed;
    rec.params = result.params;
    rec.bottleneck_work = result.report.bottleneck_work;
    rec.bottleneck_comm = result.report.bottleneck_comm;
    rec.max_output_words = result.report.max_output_words;
    return rec;
}

}  // namespace mrsim
