#include <doctest.h>

#include <numeric>

#include "mrsim/sched_steal.hpp"

using namespace mrsim;

namespace {

std::vector<std::vector<Job>> concentrated(int p, const std::vector<Job>& jobs)
{
    std::vector<std::vector<Job>> per_pe(p + 1);
    per_pe[1] = jobs;
    return per_pe;
}

std::vector<Job> unit_jobs(std::int64_t n, WorkUnits cost = 1)
{
    std::vector<Job> jobs(n);
    for (std::int64_t i = 0; i < n; ++i) jobs[i] = Job{static_cast<std::uint64_t>(i), 1, cost, 0};
    return jobs;
}

}  // namespace

TEST_CASE("sort_jobs_desc_length: bucket order with stability")
{
    auto lengths = [](const std::vector<Job>& jobs) {
        std::vector<Words> out;
        for (const Job& j : jobs) out.push_back(j.description_words);
        return out;
    };

    std::vector<Job> jobs{{0, 5, 0, 0}, {1, 1, 0, 0}, {2, 16, 0, 0}, {3, 2, 0, 0}};
    CHECK(lengths(sort_jobs_desc_length(jobs)) == std::vector<Words>{16, 5, 2, 1});

    std::vector<Job> one{{0, 9, 0, 0}};
    CHECK(lengths(sort_jobs_desc_length(one)) == std::vector<Words>{9});

    std::vector<Job> same{{0, 4, 0, 0}, {1, 4, 0, 0}, {2, 4, 0, 0}};
    std::vector<Job> sorted = sort_jobs_desc_length(same);
    CHECK(sorted[0].id == 0);
    CHECK(sorted[1].id == 1);
    CHECK(sorted[2].id == 2);

    // 5 and 7 share bucket 2: input order preserved inside the bucket
    std::vector<Job> mixed{{0, 5, 0, 0}, {1, 7, 0, 0}, {2, 8, 0, 0}};
    sorted = sort_jobs_desc_length(mixed);
    CHECK(sorted[0].id == 2);
    CHECK(sorted[1].id == 0);
    CHECK(sorted[2].id == 1);
}

TEST_CASE("split_subarray sends the floor-half tail and rejects short queues")
{
    CHECK(split_subarray({}).second.empty());

    std::vector<Job> one{{0, 3, 0, 0}};
    auto [kept1, sent1] = split_subarray(one);
    CHECK(sent1.empty());
    CHECK(kept1.size() == 1);

    std::vector<Job> four{{2, 8, 0, 0}, {3, 4, 0, 0}, {4, 2, 0, 0}, {5, 1, 0, 0}};
    auto [kept, sent] = split_subarray(four);
    REQUIRE(kept.size() == 2);
    REQUIRE(sent.size() == 2);
    CHECK(kept[0].id == 2);
    CHECK(kept[1].id == 3);
    CHECK(sent[0].id == 4);
    CHECK(sent[1].id == 5);
}

TEST_CASE("p=1: everything runs locally with zero communication")
{
    MachineConfig cfg{1, 2, 1, 9};
    CommLedger ledger(1);
    int phase = ledger.begin_phase("steal");
    StealOutcome out = run_work_stealing(concentrated(1, unit_jobs(20, 3)), cfg, StealConfig{},
                                         ledger, phase);
    CHECK(out.makespan == 60);
    CHECK(out.per_pe_busy[1] == 60);
    CHECK(ledger.phase_h(phase) == 0);
    for (PeId pe = 1; pe <= 1; ++pe) CHECK(out.per_pe_output[pe] == 0);
}

TEST_CASE("no jobs: immediate quiescence")
{
    MachineConfig cfg{4, 1, 1, 9};
    CommLedger ledger(4);
    int phase = ledger.begin_phase("steal");
    StealOutcome out =
        run_work_stealing(std::vector<std::vector<Job>>(5), cfg, StealConfig{}, ledger, phase);
    CHECK(out.makespan == 0);
}

TEST_CASE("eight heavy jobs on one PE spread across workers")
{
    // regression-pinned trace: p unit-description jobs of cost 100 on PE 1,
    // p=8, L=0, g=1
    MachineConfig cfg{8, 0, 1, 1};
    CommLedger ledger(8);
    int phase = ledger.begin_phase("steal");
    StealOutcome out = run_work_stealing(concentrated(8, unit_jobs(8, 100)), cfg, StealConfig{},
                                         ledger, phase);

    int executors = 0;
    std::int64_t executed = 0;
    for (PeId pe = 1; pe <= 8; ++pe)
        if (out.per_pe_busy[pe] > 0) {
            ++executors;
            executed += out.per_pe_busy[pe] / 100;
        }
    CHECK(executed == 8);
    // floor-half splitting of 7 stealable jobs caps the spread at 5 PEs
    CHECK(executors == 5);
    CHECK(out.makespan <= 3 * 100);
    CHECK(out.makespan == 204);  // pinned
}

TEST_CASE("every job executes exactly once")
{
    MachineConfig cfg{6, 1, 1, 123};
    std::vector<std::vector<Job>> jobs(7);
    std::uint64_t id = 0;
    for (PeId pe = 1; pe <= 6; ++pe)
        for (int k = 0; k < (pe % 3) * 5; ++k)
            jobs[pe].push_back(Job{id++, static_cast<Words>(1 + id % 7), static_cast<WorkUnits>(1 + id % 5),
                                   static_cast<Words>(id % 3)});
    CommLedger ledger(6);
    int phase = ledger.begin_phase("steal");
    StealOutcome out = run_work_stealing(jobs, cfg, StealConfig{}, ledger, phase);
    REQUIRE(out.executed_on.size() == id);
    WorkUnits busy_total = 0;
    for (PeId pe = 1; pe <= 6; ++pe) busy_total += out.per_pe_busy[pe];
    WorkUnits cost_total = 0;
    for (PeId pe = 1; pe <= 6; ++pe)
        for (const Job& j : jobs[pe]) cost_total += j.exec_cost;
    CHECK(busy_total == cost_total);
    for (PeId pe : out.executed_on) {
        CHECK(pe >= 1);
        CHECK(pe <= 6);
    }
}

TEST_CASE("migration ledger records the exact description words moved")
{
    // one victim with 4 two-word jobs, one initially idle thief
    MachineConfig cfg{2, 1, 0, 5};
    std::vector<std::vector<Job>> jobs(3);
    for (int i = 0; i < 4; ++i)
        jobs[1].push_back(Job{static_cast<std::uint64_t>(i), 2, 50, 0});
    CommLedger ledger(2);
    int phase = ledger.begin_phase("steal");
    StealOutcome out = run_work_stealing(jobs, cfg, StealConfig{}, ledger, phase);
    CHECK(ledger.conserved());
    std::int64_t executed = 0;
    for (PeId pe = 1; pe <= 2; ++pe) executed += out.per_pe_busy[pe] / 50;
    CHECK(executed == 4);
    // the thief's first slice is floor(3/2) = 1 job of 2 description words
    CHECK(out.per_pe_received[2] >= 2);
    CHECK(out.per_pe_busy[2] >= 50);
}

TEST_CASE("determinism: identical seeds give identical outcomes")
{
    MachineConfig cfg{8, 1, 1, 77};
    std::vector<std::vector<Job>> jobs(9);
    for (std::uint64_t i = 0; i < 50; ++i)
        jobs[1 + i % 3].push_back(Job{i, static_cast<Words>(1 + i % 9),
                                      static_cast<WorkUnits>(1 + i % 4),
                                      static_cast<Words>(i % 2)});
    CommLedger ledger_a(8), ledger_b(8);
    StealOutcome a = run_work_stealing(jobs, cfg, StealConfig{}, ledger_a,
                                       ledger_a.begin_phase("steal"));
    StealOutcome b = run_work_stealing(jobs, cfg, StealConfig{}, ledger_b,
                                       ledger_b.begin_phase("steal"));
    CHECK(a.makespan == b.makespan);
    CHECK(a.executed_on == b.executed_on);
    CHECK(a.per_pe_sent == b.per_pe_sent);
}

TEST_CASE("strikes cap per-PE output at b*m'/p plus one job")
{
    MachineConfig cfg{4, 1, 0, 31};
    std::vector<std::vector<Job>> jobs(5);
    // skewed outputs so some PE would otherwise blow the output budget
    for (std::uint64_t i = 0; i < 64; ++i)
        jobs[1 + i % 4].push_back(Job{i, 1, 1, static_cast<Words>(i % 8 == 0 ? 40 : 1)});
    Words m_prime = 0, m_hat = 0;
    for (PeId pe = 1; pe <= 4; ++pe)
        for (const Job& j : jobs[pe]) {
            m_prime += j.output_words;
            m_hat = std::max(m_hat, j.output_words);
        }

    StealConfig scfg;
    scfg.strike.enabled = true;
    scfg.strike.b = 2;
    CommLedger ledger(4);
    StealOutcome out = run_work_stealing(jobs, cfg, scfg, ledger, ledger.begin_phase("steal"));
    CHECK(out.m_prime_used == m_prime);
    for (PeId pe = 1; pe <= 4; ++pe)
        CHECK(static_cast<__int128>(out.per_pe_output[pe]) * 4 <=
              static_cast<__int128>(2) * m_prime + static_cast<__int128>(4) * m_hat);
}

TEST_CASE("estimated strike mode still finishes every job")
{
    MachineConfig cfg{4, 1, 0, 13};
    std::vector<std::vector<Job>> jobs(5);
    for (std::uint64_t i = 0; i < 200; ++i)
        jobs[1 + i % 4].push_back(Job{i, 1, 1, static_cast<Words>(1 + i % 3)});
    StealConfig scfg;
    scfg.strike.enabled = true;
    scfg.strike.b = 2;
    scfg.strike.known_total = false;
    scfg.strike.sample_fraction = 0.2;
    CommLedger ledger(4);
    StealOutcome out = run_work_stealing(jobs, cfg, scfg, ledger, ledger.begin_phase("steal"));
    CHECK(out.m_prime_used > 0);
    std::int64_t executed = 0;
    for (PeId pe = 1; pe <= 4; ++pe) executed += out.per_pe_busy[pe];
    CHECK(executed == 200);
}

TEST_CASE("random permutation order is accepted as an alternative")
{
    MachineConfig cfg{4, 1, 1, 3};
    StealConfig scfg;
    scfg.order = StealOrder::random_permutation;
    CommLedger ledger(4);
    StealOutcome out = run_work_stealing(concentrated(4, unit_jobs(40)), cfg, scfg, ledger,
                                         ledger.begin_phase("steal"));
    std::int64_t executed = 0;
    for (PeId pe = 1; pe <= 4; ++pe) executed += out.per_pe_busy[pe];
    CHECK(executed == 40);
}

TEST_CASE("zero-delay machines trip the engine budget, not a hang")
{
    MachineConfig cfg{4, 0, 0, 1};
    StealConfig scfg;
    scfg.max_events = 5000;
    CommLedger ledger(4);
    // one endless job keeps the others polling with zero round-trip time
    std::vector<std::vector<Job>> jobs(5);
    jobs[1].push_back(Job{0, 1, 1000000, 0});
    CHECK_THROWS_AS(
        run_work_stealing(jobs, cfg, scfg, ledger, ledger.begin_phase("steal")),
        EngineDiagnostic);
}
