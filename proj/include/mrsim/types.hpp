#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrsim {

// All data sizes are counted in machine words, all computation in abstract
// work units. Both stay integral so every simulation is exactly reproducible.
using Words = std::int64_t;
using WorkUnits = std::int64_t;
using SimTime = std::int64_t;
using KeyId = std::uint64_t;
using ElementId = std::uint64_t;
using PeId = int;  // PEs are numbered 1..p

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Diagnostic raised by the event engine when a run does not quiesce within
// its event budget (typically a livelocked configuration, e.g. zero delays).
struct EngineDiagnostic : std::runtime_error {
    explicit EngineDiagnostic(const std::string& what) : std::runtime_error(what) {}
};

/// One key-value pair emitted by a map call.
struct EmittedPair {
    KeyId key = 0;
    Words key_size_words = 1;    // >= 1
    Words value_size_words = 0;  // >= 0

    Words words() const { return key_size_words + value_size_words; }
};

/// One input element: its storage size, the cost of its map call, and the
/// pairs that call emits. Workloads are declarative, so emissions are data.
struct InputElement {
    ElementId id = 0;
    Words size_words = 1;    // >= 1
    WorkUnits map_cost = 0;  // w_a
    std::vector<EmittedPair> emissions;

    // o_a, the output volume of this element's map call
    Words output_words() const
    {
        Words total = 0;
        for (const auto& e : emissions) total += e.words();
        return total;
    }
};

// Cost and output shape of the reduction function. The cost of reducing a
// key group is affine in the group's input volume; the output is a fixed
// list of element sizes (default: a single one-word element).
struct ReduceRule {
    WorkUnits cost_alpha = 1;
    WorkUnits cost_beta = 0;
    std::vector<Words> output_sizes = {1};

    WorkUnits cost_of(Words group_input_words) const
    {
        return cost_alpha + cost_beta * group_input_words;
    }

    // Declarative rule: every group gets the same output shape regardless
    // of key, volume, or pair count.
    const std::vector<Words>& output_sizes_for(KeyId /*key*/, Words /*input_words*/,
                                               std::size_t /*pair_count*/) const
    {
        return output_sizes;
    }

    Words output_words() const
    {
        Words total = 0;
        for (Words s : output_sizes) total += s;
        return total;
    }
};

/// A single MapReduce step: the input multiset plus its reduction rule.
/// initial_placement optionally pins elements to PEs (used when chaining).
struct WorkloadStep {
    std::vector<InputElement> elements;
    ReduceRule reduce;
    std::map<ElementId, PeId> initial_placement;  // empty = place randomly

    // Throws ValidationError on duplicate ids, zero sizes, or (when p > 0)
    // placement targets outside 1..p.
    void validate(int p = 0) const;
};

/// One key group of C: the key, its collected values, and the reduce call
/// this group induces.
struct KeyGroup {
    KeyId key = 0;
    Words key_size_words = 1;
    std::vector<Words> value_sizes;
    std::vector<std::size_t> source_elements;  // element indexes, one per pair
    Words input_words = 0;                     // key + sum of values
    WorkUnits reduce_cost = 0;
    std::vector<Words> output_sizes;
    Words output_words = 0;
    std::size_t pair_count() const { return value_sizes.size(); }
};

/// Full expansion of a step: per-element map output volumes, the key groups
/// of C (sorted by key), and the word totals of the four sets.
struct StepTrace {
    std::vector<Words> element_output_words;  // o_a by element index
    std::vector<KeyGroup> groups;             // sorted by key id
    Words words_a = 0;
    Words words_b = 0;
    Words words_c = 0;
    Words words_d = 0;
};

/// The step's cost-model tuple.
struct StepParameters {
    WorkUnits w = 0;      // total map + reduce work
    WorkUnits w_hat = 0;  // max single call
    Words m = 0;          // words across input, pairs, groups, outputs
    Words m_hat = 0;      // max words consumed or produced by one call
};

// Canonical step output: per key, the sorted multiset of output element
// sizes. Placement-independent, so any two executions can be compared.
using OutputMultiset = std::map<KeyId, std::vector<Words>>;

/// One produced output element together with where it ended up.
struct PlacedOutput {
    KeyId origin_key = 0;
    Words size_words = 0;
    PeId pe = 1;
};

inline void WorkloadStep::validate(int p) const
{
    std::map<ElementId, bool> seen;
    for (const auto& e : elements) {
        if (e.size_words < 1)
            throw ValidationError("element " + std::to_string(e.id) + ": size_words must be >= 1");
        if (e.map_cost < 0)
            throw ValidationError("element " + std::to_string(e.id) + ": negative map_cost");
        if (seen.count(e.id))
            throw ValidationError("duplicate element id " + std::to_string(e.id));
        seen[e.id] = true;
        for (const auto& em : e.emissions) {
            if (em.key_size_words < 1)
                throw ValidationError("emission under key " + std::to_string(em.key) +
                                      ": key_size_words must be >= 1");
            if (em.value_size_words < 0)
                throw ValidationError("emission under key " + std::to_string(em.key) +
                                      ": negative value size");
        }
    }
    if (reduce.cost_alpha < 0 || reduce.cost_beta < 0)
        throw ValidationError("negative reduce cost");
    for (Words s : reduce.output_sizes)
        if (s < 0) throw ValidationError("negative reduce output size");
    for (const auto& [id, pe] : initial_placement) {
        if (!seen.count(id))
            throw ValidationError("placement references unknown element " + std::to_string(id));
        if (pe < 1 || (p > 0 && pe > p))
            throw ValidationError("placement PE " + std::to_string(pe) + " out of range");
    }
}

}  // namespace mrsim
