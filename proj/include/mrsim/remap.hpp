#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Measured execution record of one phase's function calls: who ran what,
/// how long it took, and how much it emitted.
struct MapTrace {
    struct Entry {
        std::size_t index = 0;  // element (or job) index
        WorkUnits work = 0;     // w_a
        Words output = 0;       // o_a
        Words input_words = 1;  // migration cost of the input
        PeId pe = 1;
    };
    std::vector<Entry> entries;  // in (PE, local order) execution order
    WorkUnits w_prime = 0;       // total work
    Words m_prime = 0;           // total output
    WorkUnits w_hat_prime = 0;   // max single work
    Words m_hat_prime = 0;       // max single output

    static MapTrace from_entries(std::vector<Entry> entries)
    {
        MapTrace t;
        t.entries = std::move(entries);
        for (const Entry& e : t.entries) {
            t.w_prime += e.work;
            t.m_prime += e.output;
            t.w_hat_prime = std::max(t.w_hat_prime, e.work);
            t.m_hat_prime = std::max(t.m_hat_prime, e.output);
        }
        return t;
    }
};

/// W_a = w_a + o_a * w'/m'; collapses to w_a when nothing was emitted.
inline double compute_weight(WorkUnits w_a, Words o_a, WorkUnits w_prime, Words m_prime)
{
    if (m_prime == 0) {
        if (o_a != 0) throw ConfigError("compute_weight: o_a > 0 with m' = 0");
        return static_cast<double>(w_a);
    }
    return static_cast<double>(w_a) +
           static_cast<double>(o_a) * static_cast<double>(w_prime) / static_cast<double>(m_prime);
}

/// Remap trigger: some PE's output volume exceeds tau * (m'/p + m_hat').
inline bool needs_remap(const std::vector<Words>& per_pe_output, Words m_prime, Words m_hat_prime,
                        int p, double tau = 2.0)
{
    if (tau <= 1.0) throw ConfigError("needs_remap: tau must be > 1");
    double threshold =
        tau * (static_cast<double>(m_prime) / static_cast<double>(p) + static_cast<double>(m_hat_prime));
    for (PeId pe = 1; pe < static_cast<PeId>(per_pe_output.size()); ++pe)
        if (static_cast<double>(per_pe_output[pe]) > threshold) return true;
    return false;
}

/// The weighted prefix-sum partition. Weights are kept as scaled integers
/// (m'*w_a + o_a*w'), so every bound below is an exact integer statement.
struct WeightedPartition {
    std::vector<PeId> new_pe;          // by trace entry order
    std::vector<bool> overload;       // the last element landing on each PE
    std::vector<WorkUnits> per_pe_work;
    std::vector<Words> per_pe_output;
    std::vector<Words> per_pe_moved_words;  // input words that changed PE
    unsigned long long scaled_total = 0;    // = 2*w'*m' when both totals are positive
};

inline WeightedPartition partition_by_weight(const MapTrace& trace, int p)
{
    if (p < 1) throw ConfigError("partition: p must be >= 1");
    WeightedPartition part;
    const std::size_t n = trace.entries.size();
    part.new_pe.assign(n, 1);
    part.overload.assign(n, false);
    part.per_pe_work.assign(p + 1, 0);
    part.per_pe_output.assign(p + 1, 0);
    part.per_pe_moved_words.assign(p + 1, 0);
    if (n == 0) return part;

    // Scaled weight m'*w_a + w'*o_a. The degenerate totals fall back to the
    // surviving term so the partition still balances what is left to balance.
    auto weight_of = [&](const MapTrace::Entry& e) -> unsigned __int128 {
        if (trace.m_prime == 0) return static_cast<unsigned __int128>(e.work);
        if (trace.w_prime == 0) return static_cast<unsigned __int128>(e.output);
        return static_cast<unsigned __int128>(trace.m_prime) * e.work +
               static_cast<unsigned __int128>(e.output) * trace.w_prime;
    };

    unsigned __int128 total = 0;
    for (const auto& e : trace.entries) total += weight_of(e);
    part.scaled_total = static_cast<unsigned long long>(total);

    std::vector<std::size_t> last_on_pe(p + 1, n);  // n = none
    unsigned __int128 prefix = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = trace.entries[i];
        PeId dst = 1;
        if (total > 0)
            dst = static_cast<PeId>(1 + static_cast<unsigned __int128>(p) * prefix / total);
        if (dst > p) dst = p;  // prefix == total only when trailing weights are 0
        prefix += weight_of(e);
        part.new_pe[i] = dst;
        part.per_pe_work[dst] += e.work;
        part.per_pe_output[dst] += e.output;
        if (dst != e.pe) part.per_pe_moved_words[dst] += e.input_words;
        last_on_pe[dst] = i;
    }
    for (PeId pe = 1; pe <= p; ++pe)
        if (last_on_pe[pe] != n) part.overload[last_on_pe[pe]] = true;
    return part;
}

struct RemapOutcome {
    WeightedPartition partition;
    std::vector<PhaseStats> phases;
};

// Redundant remapping: weigh every executed call by work and output volume,
// cut the weight prefix into p even ranges, move the inputs, and run every
// call again at its new home. Exact consequences, checked here on each run:
//   per-PE re-executed work   <= 2w'/p + w_hat'
//   per-PE re-emitted output  <= 2m'/p + m_hat'
inline RemapOutcome run_redundant_remap(const MapTrace& trace, const MachineConfig& cfg,
                                        CommLedger& ledger)
{
    cfg.validate();
    const int p = cfg.p;
    RemapOutcome out;
    out.partition = partition_by_weight(trace, p);

    // prefix sum over the weights
    int ph_prefix = ledger.begin_phase("remap-prefix");
    Words lg = ceil_log2(p);
    ledger.charge_all(ph_prefix, lg);
    out.phases.push_back(PhaseStats{"remap-prefix", lg, ledger.phase_h(ph_prefix),
                                    superstep_cost(lg, ledger.phase_h(ph_prefix), cfg)});

    // move the input elements to their new homes
    int ph_move = ledger.begin_phase("remap-move");
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const auto& e = trace.entries[i];
        if (out.partition.new_pe[i] != e.pe)
            ledger.add_message(ph_move, e.pe, out.partition.new_pe[i], e.input_words);
    }
    out.phases.push_back(PhaseStats{"remap-move", 0, ledger.phase_h(ph_move),
                                    superstep_cost(0, ledger.phase_h(ph_move), cfg)});

    // second mapping pass
    WorkUnits wx = 0;
    for (PeId pe = 1; pe <= p; ++pe) wx = std::max(wx, out.partition.per_pe_work[pe]);
    out.phases.push_back(PhaseStats{"remap-exec", wx, 0, superstep_cost(wx, 0, cfg)});

    // exact bound checks (scaled-integer arithmetic, no floating point)
    for (PeId pe = 1; pe <= p; ++pe) {
        __int128 work_lhs = static_cast<__int128>(out.partition.per_pe_work[pe]) * p;
        __int128 work_rhs = static_cast<__int128>(2) * trace.w_prime +
                            static_cast<__int128>(p) * trace.w_hat_prime;
        __int128 outp_lhs = static_cast<__int128>(out.partition.per_pe_output[pe]) * p;
        __int128 outp_rhs = static_cast<__int128>(2) * trace.m_prime +
                            static_cast<__int128>(p) * trace.m_hat_prime;
        if (work_lhs > work_rhs || outp_lhs > outp_rhs)
            throw std::logic_error("remap invariant: PE " + std::to_string(pe) +
                                   " exceeds its weighted share");
    }
    return out;
}

}  // namespace mrsim
