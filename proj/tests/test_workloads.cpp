#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "mrsim/core.hpp"
#include "mrsim/workload_io.hpp"
#include "mrsim/workloads.hpp"

using namespace mrsim;

TEST_CASE("uniform generator matches its closed form")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::uniform;
    spec.n = 123;
    WorkloadStep step = generate(spec);
    REQUIRE(step.elements.size() == 123);
    StepParameters params = compute_parameters(step);
    CHECK(params.w == 2 * spec.n);
    CHECK(params.w_hat == 1);
    CHECK(params.m == 6 * spec.n);
    CHECK(params.m_hat == 2);
}

TEST_CASE("generators are deterministic given the seed")
{
    for (WorkloadKind kind : {WorkloadKind::zipf, WorkloadKind::expander}) {
        GeneratorSpec spec;
        spec.kind = kind;
        spec.n = 200;
        spec.key_count = 50;
        spec.seed = 42;
        WorkloadStep a = generate(spec);
        WorkloadStep b = generate(spec);
        REQUIRE(a.elements.size() == b.elements.size());
        for (std::size_t i = 0; i < a.elements.size(); ++i) {
            CHECK(a.elements[i].emissions.size() == b.elements[i].emissions.size());
            for (std::size_t k = 0; k < a.elements[i].emissions.size(); ++k)
                CHECK(a.elements[i].emissions[k].key == b.elements[i].emissions[k].key);
        }
    }
}

TEST_CASE("zipf with theta 0 degenerates to a uniform key histogram")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::zipf;
    spec.n = 40000;
    spec.key_count = 40;
    spec.zipf_theta = 0.0;
    spec.seed = 7;
    WorkloadStep step = generate(spec);

    std::map<KeyId, std::int64_t> histogram;
    for (const auto& e : step.elements) histogram[e.emissions[0].key] += 1;
    double expected = static_cast<double>(spec.n) / spec.key_count;
    double chi2 = 0;
    for (const auto& [key, count] : histogram)
        chi2 += (count - expected) * (count - expected) / expected;
    double dof = spec.key_count - 1;
    CHECK(chi2 < dof + 5 * std::sqrt(2 * dof));
}

TEST_CASE("zipf with large theta skews hard toward the top rank")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::zipf;
    spec.n = 10000;
    spec.key_count = 100;
    spec.zipf_theta = 2.0;
    spec.seed = 3;
    WorkloadStep step = generate(spec);
    std::int64_t top = 0;
    for (const auto& e : step.elements)
        if (e.emissions[0].key == 0) ++top;
    CHECK(top > spec.n / 2);  // rank 1 holds ~61% of the mass at theta=2
}

TEST_CASE("single_heavy pins half the work on one call")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::single_heavy;
    spec.n = 100;
    WorkloadStep step = generate(spec);
    StepParameters params = compute_parameters(step);
    CHECK(params.w_hat * 2 == params.w);
}

TEST_CASE("heavy_reducer builds one group spanning the PEs round robin")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::heavy_reducer;
    spec.n = 8;
    spec.heavy_volume = 8;
    spec.p = 4;
    WorkloadStep step = generate(spec);
    StepTrace trace = expand_step(step);
    REQUIRE(trace.groups.size() == 1);
    CHECK(trace.groups[0].pair_count() == 8);

    std::map<PeId, int> sources;
    for (std::size_t i : trace.groups[0].source_elements)
        sources[step.initial_placement.at(step.elements[i].id)] += 1;
    CHECK(sources.size() == 4);
}

TEST_CASE("expander emits d pairs per element with balanced key degrees")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::expander;
    spec.n = 300;
    spec.expander_degree = 3;
    spec.seed = 11;
    WorkloadStep step = generate(spec);
    std::map<KeyId, std::int64_t> degree;
    for (const auto& e : step.elements) {
        CHECK(e.emissions.size() == 3);
        for (const auto& pr : e.emissions) degree[pr.key] += 1;
    }
    CHECK(degree.size() == 300);  // key_count defaults to n
    for (const auto& [key, d] : degree) CHECK(d == 3);
}

TEST_CASE("all_same_key funnels everything into one group")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::all_same_key;
    spec.n = 17;
    WorkloadStep step = generate(spec);
    StepTrace trace = expand_step(step);
    REQUIRE(trace.groups.size() == 1);
    CHECK(trace.groups[0].pair_count() == 17);
}

TEST_CASE("inconsistent generator specs are rejected")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::zipf;
    spec.n = 10;
    spec.key_count = 0;
    CHECK_THROWS_AS(generate(spec), ValidationError);

    spec.kind = WorkloadKind::heavy_reducer;
    spec.key_count = 1;
    spec.heavy_volume = 20;  // fan-in larger than n
    CHECK_THROWS_AS(generate(spec), ValidationError);
}

TEST_CASE("chain_next turns placed outputs into the next step's elements")
{
    std::vector<PlacedOutput> outputs = {{5, 3, 2}, {9, 1, 1}};
    ChainRule rule;
    rule.cost_alpha = 2;
    rule.cost_beta = 1;
    WorkloadStep next = chain_next(outputs, ReduceRule{}, rule);
    REQUIRE(next.elements.size() == 2);
    CHECK(next.elements[0].size_words == 3);
    CHECK(next.elements[0].map_cost == 2 + 3);
    CHECK(next.elements[0].emissions[0].key == 5);
    CHECK(next.initial_placement.at(0) == 2);
    CHECK(next.initial_placement.at(1) == 1);
}

TEST_CASE("chain keeps the reduce rule of every later step")
{
    std::vector<WorkloadStep> steps(3);
    steps[0] = generate(GeneratorSpec{WorkloadKind::uniform, 10});
    steps[1].reduce = ReduceRule{5, 0, {2}};
    steps[2].reduce = ReduceRule{7, 1, {1, 1}};
    ChainSpec spec = chain(steps);
    CHECK(spec.first.elements.size() == 10);
    REQUIRE(spec.rest.size() == 2);
    CHECK(spec.rest[0].reduce.cost_alpha == 5);
    CHECK(spec.rest[1].reduce.output_sizes.size() == 2);
}

TEST_CASE("workload files survive a save/load round trip")
{
    GeneratorSpec spec;
    spec.kind = WorkloadKind::heavy_reducer;
    spec.n = 50;
    spec.heavy_volume = 20;
    spec.p = 4;
    spec.seed = 6;
    WorkloadStep step = generate(spec);
    step.reduce = ReduceRule{3, 1, {2, 1}};

    WorkloadFile file;
    file.steps.push_back(StepSpec{step, std::nullopt});
    file.steps.push_back(StepSpec{WorkloadStep{ {}, ReduceRule{1, 0, {1}}, {} },
                                  ChainRule{2, 1, true}});
    const std::string path = "workload_io_roundtrip.json";
    save_workload(file, path);
    WorkloadFile loaded = load_workload(path);
    std::remove(path.c_str());

    REQUIRE(loaded.steps.size() == 2);
    const WorkloadStep& back = loaded.steps[0].step;
    REQUIRE(back.elements.size() == step.elements.size());
    for (std::size_t i = 0; i < step.elements.size(); ++i) {
        CHECK(back.elements[i].id == step.elements[i].id);
        CHECK(back.elements[i].size_words == step.elements[i].size_words);
        CHECK(back.elements[i].map_cost == step.elements[i].map_cost);
        REQUIRE(back.elements[i].emissions.size() == step.elements[i].emissions.size());
        for (std::size_t k = 0; k < step.elements[i].emissions.size(); ++k) {
            CHECK(back.elements[i].emissions[k].key == step.elements[i].emissions[k].key);
            CHECK(back.elements[i].emissions[k].words() == step.elements[i].emissions[k].words());
        }
    }
    CHECK(back.initial_placement == step.initial_placement);
    CHECK(back.reduce.cost_alpha == 3);
    CHECK(back.reduce.cost_beta == 1);
    CHECK(back.reduce.output_sizes == std::vector<Words>{2, 1});

    // the expansion parameters agree, so nothing semantic was lost
    StepParameters a = compute_parameters(step);
    StepParameters b = compute_parameters(back);
    CHECK(a.w == b.w);
    CHECK(a.m == b.m);
    CHECK(a.m_hat == b.m_hat);

    REQUIRE(loaded.steps[1].chain.has_value());
    CHECK(loaded.steps[1].chain->cost_alpha == 2);
    CHECK(loaded.steps[1].chain->cost_beta == 1);
    CHECK(loaded.steps[1].chain->rekey);
}

TEST_CASE("malformed workload files raise IO errors")
{
    CHECK_THROWS_AS(load_workload("no_such_workload_file.json"), IoError);

    const std::string path = "workload_io_bad.json";
    {
        std::ofstream out(path);
        out << "{\"version\":1,\"steps\":[]}";
    }
    CHECK_THROWS_AS(load_workload(path), IoError);
    {
        std::ofstream out(path);
        out << "{\"version\":1,\"steps\":[{\"elements\":[]},{\"elements\":[]}]}";
    }
    // a later step with no elements needs a chain rule
    CHECK_THROWS_AS(load_workload(path), IoError);
    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS_AS(load_workload(path), IoError);
    std::remove(path.c_str());
}
