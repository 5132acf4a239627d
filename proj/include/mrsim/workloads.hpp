#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrsim/core.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

enum class WorkloadKind {
    uniform,        // n unit elements, distinct keys
    zipf,           // keys drawn with probability proportional to rank^-theta
    single_heavy,   // one map call carries half the total work
    heavy_reducer,  // one key collects unit pairs from many distinct elements
    expander,       // random d-regular bipartite emission pattern
    all_same_key,   // every element emits to one key
};

inline const char* to_string(WorkloadKind k)
{
    switch (k) {
        case WorkloadKind::uniform: return "uniform";
        case WorkloadKind::zipf: return "zipf";
        case WorkloadKind::single_heavy: return "single_heavy";
        case WorkloadKind::heavy_reducer: return "heavy_reducer";
        case WorkloadKind::expander: return "expander";
        case WorkloadKind::all_same_key: return "all_same_key";
    }
    return "?";
}

inline WorkloadKind workload_kind_from(const std::string& s)
{
    if (s == "uniform") return WorkloadKind::uniform;
    if (s == "zipf") return WorkloadKind::zipf;
    if (s == "single_heavy") return WorkloadKind::single_heavy;
    if (s == "heavy_reducer") return WorkloadKind::heavy_reducer;
    if (s == "expander") return WorkloadKind::expander;
    if (s == "all_same_key") return WorkloadKind::all_same_key;
    throw ValidationError("unknown workload kind '" + s + "'");
}

struct GeneratorSpec {
    WorkloadKind kind = WorkloadKind::uniform;
    std::int64_t n = 0;          // element count
    std::int64_t key_count = 0;  // 0 = kind-specific default
    double zipf_theta = 1.0;
    WorkUnits heavy_cost = 0;   // single_heavy: explicit cost; 0 = half of total
    Words heavy_volume = 0;     // heavy_reducer: fan-in of the heavy key; 0 = n
    int expander_degree = 3;    // d
    int p = 0;                  // >0: emit a round-robin initial placement
    std::uint64_t seed = 1;
};

namespace detail {

inline InputElement unit_element(ElementId id, KeyId key)
{
    InputElement e;
    e.id = id;
    e.size_words = 1;
    e.map_cost = 1;
    e.emissions.push_back(EmittedPair{key, 1, 1});
    return e;
}

}  // namespace detail

/// Build a synthetic step. Deterministic given spec.seed.
inline WorkloadStep generate(const GeneratorSpec& spec)
{
    if (spec.n < 0) throw ValidationError("generator: n must be >= 0");
    if (spec.key_count < 0) throw ValidationError("generator: key_count must be >= 0");
    if (spec.key_count == 0 && spec.n > 0 &&
        (spec.kind == WorkloadKind::zipf))
        throw ValidationError("generator: zipf needs key_count > 0");
    if (spec.zipf_theta < 0) throw ValidationError("generator: zipf_theta must be >= 0");
    if (spec.expander_degree < 1) throw ValidationError("generator: degree must be >= 1");

    WorkloadStep step;
    step.elements.reserve(spec.n);
    Rng rng(derive_seed(spec.seed, 0xC0FFEEULL));

    switch (spec.kind) {
        case WorkloadKind::uniform: {
            for (std::int64_t i = 0; i < spec.n; ++i)
                step.elements.push_back(detail::unit_element(i, static_cast<KeyId>(i)));
            break;
        }
        case WorkloadKind::zipf: {
            // inverse-CDF sampling over ranked keys
            std::vector<double> cdf(spec.key_count);
            double total = 0;
            for (std::int64_t r = 0; r < spec.key_count; ++r) {
                total += std::pow(static_cast<double>(r + 1), -spec.zipf_theta);
                cdf[r] = total;
            }
            for (std::int64_t i = 0; i < spec.n; ++i) {
                double u = rng.next_real() * total;
                auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                KeyId key = static_cast<KeyId>(it - cdf.begin());
                step.elements.push_back(detail::unit_element(i, key));
            }
            break;
        }
        case WorkloadKind::single_heavy: {
            if (spec.n < 1) throw ValidationError("generator: single_heavy needs n >= 1");
            for (std::int64_t i = 0; i < spec.n; ++i)
                step.elements.push_back(detail::unit_element(i, static_cast<KeyId>(i)));
            // reduce is free so the heavy map call is exactly half of w
            step.reduce = ReduceRule{0, 0, {1}};
            WorkUnits heavy = spec.heavy_cost > 0 ? spec.heavy_cost : spec.n - 1;
            step.elements[0].map_cost = heavy;
            if (spec.heavy_volume > 0)
                step.elements[0].emissions[0].value_size_words = spec.heavy_volume;
            break;
        }
        case WorkloadKind::heavy_reducer: {
            Words fanin = spec.heavy_volume > 0 ? spec.heavy_volume : spec.n;
            if (fanin > spec.n)
                throw ValidationError("generator: heavy_reducer fan-in exceeds n");
            const KeyId heavy_key = 0;
            for (std::int64_t i = 0; i < spec.n; ++i) {
                KeyId key = i < fanin ? heavy_key : static_cast<KeyId>(i + 1);
                step.elements.push_back(detail::unit_element(i, key));
            }
            if (spec.p > 0) {
                // pair sources spread round-robin over the PEs
                for (std::int64_t i = 0; i < spec.n; ++i)
                    step.initial_placement[static_cast<ElementId>(i)] =
                        static_cast<PeId>(1 + i % spec.p);
            }
            break;
        }
        case WorkloadKind::expander: {
            std::int64_t keys = spec.key_count > 0 ? spec.key_count : spec.n;
            if (keys == 0 && spec.n > 0)
                throw ValidationError("generator: expander needs keys with n > 0");
            // configuration model: d stubs per element matched to key slots
            std::vector<KeyId> slots;
            slots.reserve(spec.n * spec.expander_degree);
            for (std::int64_t s = 0; s < spec.n * spec.expander_degree; ++s)
                slots.push_back(static_cast<KeyId>(s % keys));
            rng.shuffle(slots);
            for (std::int64_t i = 0; i < spec.n; ++i) {
                InputElement e;
                e.id = i;
                e.size_words = 1;
                e.map_cost = 1;
                for (int d = 0; d < spec.expander_degree; ++d)
                    e.emissions.push_back(
                        EmittedPair{slots[i * spec.expander_degree + d], 1, 1});
                step.elements.push_back(std::move(e));
            }
            break;
        }
        case WorkloadKind::all_same_key: {
            for (std::int64_t i = 0; i < spec.n; ++i)
                step.elements.push_back(detail::unit_element(i, 0));
            break;
        }
    }
    step.validate(spec.p);
    return step;
}

/// How a finished step's outputs become the next step's inputs.
struct ChainRule {
    WorkUnits cost_alpha = 1;  // map cost of a chained element = alpha + beta*size
    WorkUnits cost_beta = 0;
    bool rekey = false;  // true: rehash the origin key so groups reshuffle
    std::uint64_t rekey_salt = 0x9042ULL;
};

/// Materialize the next step of a chain from the previous step's placed
/// outputs. Placement carries over from where each output ended up.
inline WorkloadStep chain_next(const std::vector<PlacedOutput>& outputs,
                               const ReduceRule& next_reduce, const ChainRule& rule)
{
    WorkloadStep step;
    step.reduce = next_reduce;
    step.elements.reserve(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const PlacedOutput& d = outputs[i];
        InputElement e;
        e.id = static_cast<ElementId>(i);
        e.size_words = std::max<Words>(1, d.size_words);
        e.map_cost = rule.cost_alpha + rule.cost_beta * e.size_words;
        KeyId key = rule.rekey ? hash_mix(d.origin_key, rule.rekey_salt) : d.origin_key;
        e.emissions.push_back(EmittedPair{key, 1, e.size_words});
        step.initial_placement[e.id] = d.pe;
        step.elements.push_back(std::move(e));
    }
    return step;
}

/// A chained pipeline: the first step plus the rule for each follow-up step.
struct ChainSpec {
    struct Stage {
        ReduceRule reduce;
        ChainRule rule;
    };
    WorkloadStep first;
    std::vector<Stage> rest;
};

/// Assemble a chain from explicit steps: step i's outputs feed step i+1, so
/// of every step after the first only the reduce rule is kept.
inline ChainSpec chain(const std::vector<WorkloadStep>& steps, const ChainRule& rule = {})
{
    if (steps.empty()) throw ValidationError("chain: need at least one step");
    ChainSpec cs;
    cs.first = steps[0];
    for (std::size_t i = 1; i < steps.size(); ++i)
        cs.rest.push_back(ChainSpec::Stage{steps[i].reduce, rule});
    return cs;
}

}  // namespace mrsim
