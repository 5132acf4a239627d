#pragma once

#include <vector>

#include "mrsim/core.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Element index -> PE id.
using Placement = std::vector<PeId>;

/// Assign every element an independently uniform PE.
inline Placement distribute_randomly(const WorkloadStep& step, int p, std::uint64_t seed)
{
    if (p < 1) throw ConfigError("distribute_randomly: p must be >= 1");
    Rng rng(derive_seed(seed, 0xD157ULL));
    Placement placement(step.elements.size());
    for (std::size_t i = 0; i < placement.size(); ++i)
        placement[i] = static_cast<PeId>(1 + rng.next_below(p));
    return placement;
}

/// Pin elements the step places explicitly; anything unlisted is placed
/// uniformly at random.
inline Placement resolve_placement(const WorkloadStep& step, int p, std::uint64_t seed)
{
    Placement placement = distribute_randomly(step, p, seed);
    for (std::size_t i = 0; i < step.elements.size(); ++i) {
        auto it = step.initial_placement.find(step.elements[i].id);
        if (it == step.initial_placement.end()) continue;
        if (it->second < 1 || it->second > p)
            throw ConfigError("placement PE " + std::to_string(it->second) + " outside 1..p");
        placement[i] = it->second;
    }
    return placement;
}

struct BspRunConfig {
    MachineConfig machine;
    std::uint64_t hash_seed = 0;  // 0 = derive from machine.seed
    bool disperse_outputs = true;
    WorkUnits assembly_cost_per_word = 0;  // optional charge for building C
    double precondition_factor = 4.0;      // c_pre of the input-balance check
};

/// Everything a finished step reports.
struct StepResult {
    ExecutionReport report;
    StepParameters params;
    OutputMultiset outputs;                   // built from the executed reduces
    std::vector<PlacedOutput> placed_outputs; // post-dispersal layout of D
    std::vector<std::int64_t> per_pe_map_calls;
    std::vector<WorkUnits> per_pe_map_work;
    std::vector<Words> per_pe_map_output;     // B words produced per PE
    std::vector<Words> per_pe_reduce_output;  // D words produced per PE
    std::vector<Words> per_pe_input_volume;   // A words initially per PE
    Words map_output_total = 0;               // m' of the map phase
    Words map_output_max_call = 0;            // m_hat' of the map phase
    bool remap_triggered = false;
    int shuffle_attempts = 1;
};

}  // namespace mrsim
