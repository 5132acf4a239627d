#include <doctest.h>

#include "mrsim/core.hpp"
#include "mrsim/hash.hpp"

using namespace mrsim;

namespace {

WorkloadStep single_element_step()
{
    // one element (size 2, cost 3) emitting one 1+1-word pair;
    // reducing the group costs 4 and outputs one word
    WorkloadStep step;
    InputElement e;
    e.id = 0;
    e.size_words = 2;
    e.map_cost = 3;
    e.emissions.push_back(EmittedPair{7, 1, 1});
    step.elements.push_back(e);
    step.reduce = ReduceRule{4, 0, {1}};
    return step;
}

WorkloadStep unit_elements(std::int64_t n)
{
    WorkloadStep step;
    for (std::int64_t i = 0; i < n; ++i) {
        InputElement e;
        e.id = i;
        e.size_words = 1;
        e.map_cost = 1;
        e.emissions.push_back(EmittedPair{static_cast<KeyId>(i), 1, 1});
        step.elements.push_back(e);
    }
    step.reduce = ReduceRule{1, 0, {1}};
    return step;
}

}  // namespace

TEST_CASE("expand_step: empty step expands to nothing")
{
    WorkloadStep step;
    StepTrace trace = expand_step(step);
    CHECK(trace.groups.empty());
    CHECK(trace.words_a == 0);
    CHECK(trace.words_b == 0);
    CHECK(trace.words_c == 0);
    CHECK(trace.words_d == 0);
}

TEST_CASE("expand_step: two emitters under one key collect into one group")
{
    WorkloadStep step;
    for (int i = 0; i < 2; ++i) {
        InputElement e;
        e.id = i;
        e.size_words = 1;
        e.map_cost = 1;
        e.emissions.push_back(EmittedPair{1, 1, i == 0 ? 1 : 2});
        step.elements.push_back(e);
    }
    StepTrace trace = expand_step(step);
    REQUIRE(trace.groups.size() == 1);
    const KeyGroup& g = trace.groups[0];
    CHECK(g.key == 1);
    CHECK(g.pair_count() == 2);
    CHECK(g.input_words == 1 + 1 + 2);  // key once plus both values
    CHECK(trace.words_b == 2 + 3);      // each pair carries its own key copy
}

TEST_CASE("expand_step: distinct keys stay singleton groups")
{
    WorkloadStep step = unit_elements(3);
    StepTrace trace = expand_step(step);
    CHECK(trace.groups.size() == 3);
    for (const KeyGroup& g : trace.groups) CHECK(g.pair_count() == 1);
}

TEST_CASE("compute_parameters: empty trace is all zeros")
{
    WorkloadStep step;
    StepParameters params = compute_parameters(step);
    CHECK(params.w == 0);
    CHECK(params.w_hat == 0);
    CHECK(params.m == 0);
    CHECK(params.m_hat == 0);
}

TEST_CASE("compute_parameters: one-element hand count")
{
    StepParameters params = compute_parameters(single_element_step());
    CHECK(params.w == 7);      // map 3 + reduce 4
    CHECK(params.w_hat == 4);  // the reduce call
    CHECK(params.m == 2 + 2 + 2 + 1);
    CHECK(params.m_hat == 2);
}

TEST_CASE("compute_parameters: n unit elements in closed form")
{
    const std::int64_t n = 57;
    StepParameters params = compute_parameters(unit_elements(n));
    CHECK(params.w == 2 * n);
    CHECK(params.w_hat == 1);
    CHECK(params.m == 6 * n);
    CHECK(params.m_hat == 2);
}

TEST_CASE("compute_parameters: group-copy counting flag drops words(C)")
{
    WorkloadStep step = unit_elements(10);
    StepTrace trace = expand_step(step);
    StepParameters with = compute_parameters(step, trace);
    StepParameters without = compute_parameters(step, trace, ParameterOptions{false});
    CHECK(with.m - without.m == trace.words_c);
}

TEST_CASE("parameters are placement-independent and internally consistent")
{
    Rng rng(99);
    for (int t = 0; t < 30; ++t) {
        WorkloadStep step;
        std::int64_t n = rng.next_int(0, 40);
        for (std::int64_t i = 0; i < n; ++i) {
            InputElement e;
            e.id = i;
            e.size_words = rng.next_int(1, 4);
            e.map_cost = rng.next_int(0, 9);
            std::int64_t emits = rng.next_int(0, 4);
            for (std::int64_t k = 0; k < emits; ++k)
                e.emissions.push_back(EmittedPair{static_cast<KeyId>(rng.next_int(0, 12)),
                                                  rng.next_int(1, 2), rng.next_int(0, 3)});
            step.elements.push_back(e);
        }
        step.reduce = ReduceRule{rng.next_int(0, 5), rng.next_int(0, 2),
                                 {rng.next_int(1, 3), rng.next_int(1, 3)}};

        StepTrace trace = expand_step(step);
        StepParameters params = compute_parameters(step, trace);
        CHECK(params.w_hat <= params.w);
        CHECK(params.m_hat <= params.m);
        CHECK(params.m >= trace.words_a);

        // words(B) is the sum of the per-element output volumes
        Words sum_o = 0;
        for (Words o : trace.element_output_words) sum_o += o;
        CHECK(trace.words_b == sum_o);

        // words(C) re-derived group by group
        Words c = 0;
        for (const KeyGroup& g : trace.groups) {
            Words vals = 0;
            for (Words v : g.value_sizes) vals += v;
            c += g.key_size_words + vals;
        }
        CHECK(trace.words_c == c);

        // placement must not matter
        WorkloadStep placed = step;
        for (const auto& e : placed.elements)
            placed.initial_placement[e.id] = 1 + static_cast<PeId>(e.id % 4);
        StepParameters params2 = compute_parameters(placed);
        CHECK(params2.w == params.w);
        CHECK(params2.w_hat == params.w_hat);
        CHECK(params2.m == params.m);
        CHECK(params2.m_hat == params.m_hat);
    }
}

TEST_CASE("sequential_reference: empty step, single element, determinism")
{
    CHECK(sequential_reference(WorkloadStep{}).empty());

    OutputMultiset out = sequential_reference(single_element_step());
    REQUIRE(out.size() == 1);
    CHECK(out.begin()->first == 7);
    CHECK(out.begin()->second == std::vector<Words>{1});
}

TEST_CASE("validate rejects malformed steps")
{
    WorkloadStep step;
    InputElement e;
    e.id = 1;
    e.size_words = 0;
    step.elements.push_back(e);
    CHECK_THROWS_AS(step.validate(), ValidationError);

    step.elements[0].size_words = 1;
    step.elements.push_back(step.elements[0]);  // duplicate id
    CHECK_THROWS_AS(step.validate(), ValidationError);

    step.elements.pop_back();
    step.initial_placement[1] = 9;
    CHECK_THROWS_AS(step.validate(4), ValidationError);
}
