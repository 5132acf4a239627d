#pragma once

#include <algorithm>
#include <map>

#include "mrsim/types.hpp"

namespace mrsim {

/// Expand a step into its pair multiset, key groups, and outputs.
/// Groups come back sorted by key id; a group's word size is its key size
/// plus the sum of its value sizes (the key is stored once per group).
inline StepTrace expand_step(const WorkloadStep& step)
{
    StepTrace trace;
    trace.element_output_words.reserve(step.elements.size());

    std::map<KeyId, KeyGroup> groups;
    for (std::size_t i = 0; i < step.elements.size(); ++i) {
        const InputElement& e = step.elements[i];
        trace.words_a += e.size_words;
        Words o_a = 0;
        for (const auto& pair : e.emissions) {
            o_a += pair.words();
            auto [it, inserted] = groups.try_emplace(pair.key);
            KeyGroup& g = it->second;
            if (inserted) {
                g.key = pair.key;
                g.key_size_words = pair.key_size_words;
            }
            g.value_sizes.push_back(pair.value_size_words);
            g.source_elements.push_back(i);
        }
        trace.element_output_words.push_back(o_a);
        trace.words_b += o_a;
    }

    trace.groups.reserve(groups.size());
    for (auto& [key, g] : groups) {
        g.input_words = g.key_size_words;
        for (Words v : g.value_sizes) g.input_words += v;
        g.reduce_cost = step.reduce.cost_of(g.input_words);
        g.output_sizes = step.reduce.output_sizes_for(key, g.input_words, g.pair_count());
        g.output_words = 0;
        for (Words s : g.output_sizes) g.output_words += s;
        trace.words_c += g.input_words;
        trace.words_d += g.output_words;
        trace.groups.push_back(std::move(g));
    }
    return trace;
}

struct ParameterOptions {
    // When false, the pair data is counted once instead of separately as
    // emitted pairs and as collected groups (sensitivity variant).
    bool count_groups_separately = true;
};

/// Compute (w, w_hat, m, m_hat) from an expanded step.
inline StepParameters compute_parameters(const WorkloadStep& step, const StepTrace& trace,
                                         const ParameterOptions& opt = {})
{
    StepParameters p;
    for (std::size_t i = 0; i < step.elements.size(); ++i) {
        const InputElement& e = step.elements[i];
        p.w += e.map_cost;
        p.w_hat = std::max(p.w_hat, e.map_cost);
        Words call_words = std::max(e.size_words, trace.element_output_words[i]);
        p.m_hat = std::max(p.m_hat, call_words);
    }
    for (const KeyGroup& g : trace.groups) {
        p.w += g.reduce_cost;
        p.w_hat = std::max(p.w_hat, g.reduce_cost);
        p.m_hat = std::max(p.m_hat, std::max(g.input_words, g.output_words));
    }
    p.m = trace.words_a + trace.words_b + trace.words_d;
    if (opt.count_groups_separately) p.m += trace.words_c;
    return p;
}

inline StepParameters compute_parameters(const WorkloadStep& step, const ParameterOptions& opt = {})
{
    return compute_parameters(step, expand_step(step), opt);
}

inline OutputMultiset output_multiset_of(const StepTrace& trace)
{
    OutputMultiset out;
    for (const KeyGroup& g : trace.groups) {
        if (g.output_sizes.empty()) continue;
        auto& sizes = out[g.key];
        sizes.insert(sizes.end(), g.output_sizes.begin(), g.output_sizes.end());
        std::sort(sizes.begin(), sizes.end());
    }
    return out;
}

/// Single-PE in-order execution of a step; the correctness oracle every
/// scheduler's output multiset is compared against.
inline OutputMultiset sequential_reference(const WorkloadStep& step)
{
    return output_multiset_of(expand_step(step));
}

}  // namespace mrsim
