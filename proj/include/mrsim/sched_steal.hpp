#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "mrsim/event_engine.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// One schedulable function evaluation: migrating it costs its description
/// length in words, executing it takes exec_cost and emits output_words.
struct Job {
    std::uint64_t id = 0;
    Words description_words = 1;  // >= 1
    WorkUnits exec_cost = 0;
    Words output_words = 0;
};

enum class StealOrder {
    sorted_desc,         // bucket sort by floor(log2(description)), descending
    random_permutation,  // the footnote alternative; no bound claimed
};

struct StrikeConfig {
    bool enabled = false;
    std::int64_t b = 2;  // threshold factor, > 1
    bool known_total = true;      // false: estimate m' from a Bernoulli sample
    double sample_fraction = 0.05;
};

struct StealConfig {
    StealOrder order = StealOrder::sorted_desc;
    StrikeConfig strike;
    Words request_words = 1;  // steal request / reject reply size
    std::uint64_t max_events = 100'000'000;
    bool check_invariants = true;
};

/// Outcome of one work-stealing phase.
struct StealOutcome {
    std::vector<PeId> executed_on;       // by job index in the flattened input
    std::vector<WorkUnits> per_pe_busy;  // execution time per PE
    std::vector<Words> per_pe_output;    // output words produced per PE
    std::vector<Words> per_pe_sent;      // migration + request words
    std::vector<Words> per_pe_received;
    SimTime makespan = 0;         // completion time of the last job
    SimTime quiesce_time = 0;     // when the last message settled
    Words max_initial_volume = 0; // largest initial per-PE description volume
    Words m_prime_used = 0;       // strike reference volume (known or estimated)
    Words max_job_output = 0;
    int strikers = 0;
};

/// Stable bucket sort by floor(log2(description_words)), largest bucket
/// first; within a bucket the input order is preserved.
inline std::vector<Job> sort_jobs_desc_length(std::vector<Job> jobs)
{
    if (jobs.empty()) return jobs;
    int max_bucket = 0;
    for (const Job& j : jobs) {
        if (j.description_words < 1) throw ValidationError("job description must be >= 1 word");
        int b = 63 - __builtin_clzll(static_cast<unsigned long long>(j.description_words));
        max_bucket = std::max(max_bucket, b);
    }
    std::vector<std::vector<Job>> buckets(max_bucket + 1);
    for (Job& j : jobs) {
        int b = 63 - __builtin_clzll(static_cast<unsigned long long>(j.description_words));
        buckets[b].push_back(std::move(j));
    }
    std::vector<Job> out;
    out.reserve(jobs.size());
    for (int b = max_bucket; b >= 0; --b)
        for (Job& j : buckets[b]) out.push_back(std::move(j));
    return out;
}

/// Split an ordered queue of unstarted jobs: the requester gets the last
/// floor(u/2) jobs (the short-description tail). u <= 1 rejects the request.
inline std::pair<std::vector<Job>, std::vector<Job>> split_subarray(const std::vector<Job>& queue)
{
    std::size_t u = queue.size();
    std::size_t sent_count = u / 2;
    std::vector<Job> kept(queue.begin(), queue.end() - sent_count);
    std::vector<Job> sent(queue.end() - sent_count, queue.end());
    return {std::move(kept), std::move(sent)};
}

namespace detail {

struct StealJob {
    Job job;
    std::size_t flat_index = 0;   // position in the flattened input
    int migrations = 0;
    std::size_t origin_queue_len = 1;
};

struct PeState {
    std::deque<StealJob> queue;           // unstarted, long descriptions first
    bool executing = false;
    bool request_outstanding = false;
    bool striking = false;
    Words output_words = 0;
    WorkUnits busy = 0;
    Words last_inbound_slice_volume = 0;  // 0 = original local queue
    bool has_inbound_slice = false;
};

}  // namespace detail

// Distributed-memory work stealing over job subarrays inside the event
// engine. Deterministic per seed. jobs_per_pe is 1-based (index 0 ignored).
inline StealOutcome run_work_stealing(const std::vector<std::vector<Job>>& jobs_per_pe,
                                      const MachineConfig& cfg, const StealConfig& scfg,
                                      CommLedger& ledger, int phase)
{
    cfg.validate();
    if (static_cast<int>(jobs_per_pe.size()) != cfg.p + 1)
        throw ConfigError("work stealing: jobs_per_pe must have p+1 entries (index 0 unused)");
    if (scfg.strike.enabled && scfg.strike.b <= 1)
        throw ConfigError("strike: b must be > 1");

    const int p = cfg.p;
    std::size_t total_jobs = 0;
    Words total_output = 0;
    Words max_job_output = 0;
    for (PeId pe = 1; pe <= p; ++pe)
        for (const Job& j : jobs_per_pe[pe]) {
            ++total_jobs;
            total_output += j.output_words;
            max_job_output = std::max(max_job_output, j.output_words);
        }

    StealOutcome out;
    out.executed_on.assign(total_jobs, 0);
    out.per_pe_busy.assign(p + 1, 0);
    out.per_pe_output.assign(p + 1, 0);
    out.per_pe_sent.assign(p + 1, 0);
    out.per_pe_received.assign(p + 1, 0);

    Rng rng(derive_seed(cfg.seed, 0x57EA1ULL + static_cast<std::uint64_t>(phase)));

    // Strike reference volume: given, or extrapolated from a Bernoulli
    // sample of the jobs (their outputs are measured up front).
    Words m_prime = total_output;
    if (scfg.strike.enabled && !scfg.strike.known_total) {
        Words sampled = 0;
        std::size_t hits = 0;
        for (PeId pe = 1; pe <= p; ++pe)
            for (const Job& j : jobs_per_pe[pe])
                if (rng.next_real() < scfg.strike.sample_fraction) {
                    sampled += j.output_words;
                    ++hits;
                }
        if (hits > 0 && scfg.strike.sample_fraction > 0)
            m_prime = static_cast<Words>(static_cast<double>(sampled) / scfg.strike.sample_fraction);
        else
            m_prime = total_output;  // degenerate sample, fall back
    }
    out.m_prime_used = m_prime;

    std::vector<detail::PeState> pes(p + 1);
    std::size_t flat = 0;
    for (PeId pe = 1; pe <= p; ++pe) {
        const std::vector<Job>& init = jobs_per_pe[pe];
        std::vector<std::size_t> order(init.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (scfg.order == StealOrder::sorted_desc) {
            // same stable bucket order as sort_jobs_desc_length, by index
            auto bucket = [&](std::size_t i) {
                if (init[i].description_words < 1)
                    throw ValidationError("job description must be >= 1 word");
                return 63 - __builtin_clzll(
                                static_cast<unsigned long long>(init[i].description_words));
            };
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return bucket(a) > bucket(b); });
        } else {
            rng.shuffle(order);
        }
        Words volume = 0;
        for (std::size_t i : order) {
            detail::StealJob sj;
            sj.job = init[i];
            sj.flat_index = flat + i;
            sj.origin_queue_len = init.size();
            volume += init[i].description_words;
            pes[pe].queue.push_back(std::move(sj));
        }
        flat += init.size();
        out.max_initial_volume = std::max(out.max_initial_volume, volume);
    }

    EventEngine engine(scfg.max_events);
    std::size_t jobs_remaining = total_jobs;  // not yet finished (incl. in flight)
    SimTime last_job_done = 0;

    auto strike_threshold_crossed = [&](const detail::PeState& st) {
        // strikes when produced output exceeds b*m'/p (exact integer compare)
        return scfg.strike.enabled &&
               static_cast<__int128>(st.output_words) * p >
                   static_cast<__int128>(scfg.strike.b) * m_prime;
    };

    // forward declarations via std::function so handlers can recurse
    std::function<void(PeId)> activate;
    std::function<void(PeId, PeId)> request_arrive;

    auto send_request = [&](PeId thief) {
        if (jobs_remaining == 0) return;  // quiesce: nothing left to steal
        detail::PeState& st = pes[thief];
        if (st.request_outstanding || st.striking) return;
        if (p == 1) return;
        st.request_outstanding = true;
        PeId victim = static_cast<PeId>(1 + rng.next_below(p - 1));
        if (victim >= thief) ++victim;  // uniform over the other p-1 PEs
        ledger.add_message(phase, thief, victim, scfg.request_words);
        out.per_pe_sent[thief] += scfg.request_words;
        out.per_pe_received[victim] += scfg.request_words;
        engine.schedule_after(message_delay(cfg, scfg.request_words),
                              [&, victim, thief] { request_arrive(victim, thief); });
    };

    std::function<void(PeId)> job_finished = [&](PeId pe) {
        detail::PeState& st = pes[pe];
        st.executing = false;
        --jobs_remaining;
        last_job_done = engine.now();
        if (strike_threshold_crossed(st)) {
            st.striking = true;
            ++out.strikers;
        }
        activate(pe);
    };

    activate = [&](PeId pe) {
        detail::PeState& st = pes[pe];
        if (st.executing) return;
        if (st.striking) return;  // strikers stop local work and requests
        if (st.queue.empty()) {
            send_request(pe);
            return;
        }
        detail::StealJob sj = std::move(st.queue.front());
        st.queue.pop_front();
        st.executing = true;
        st.busy += sj.job.exec_cost;
        st.output_words += sj.job.output_words;
        out.executed_on[sj.flat_index] = pe;
        engine.schedule_after(sj.job.exec_cost, [&, pe] { job_finished(pe); });
    };

    request_arrive = [&](PeId victim, PeId thief) {
        detail::PeState& vs = pes[victim];
        std::size_t u = vs.queue.size();
        // a striker hands over the ceiling half: it will never execute its
        // remaining jobs itself, so a lone job must be allowed to leave
        std::size_t give = vs.striking ? (u + 1) / 2 : u / 2;
        if (give == 0) {
            ledger.add_message(phase, victim, thief, scfg.request_words);
            out.per_pe_sent[victim] += scfg.request_words;
            out.per_pe_received[thief] += scfg.request_words;
            // the reject's transit already spans the retry delay L, so the
            // requester polls a fresh victim the moment it lands
            engine.schedule_after(message_delay(cfg, scfg.request_words), [&, thief] {
                pes[thief].request_outstanding = false;
                activate(thief);
            });
            return;
        }
        std::vector<detail::StealJob> slice;
        slice.reserve(give);
        Words volume = 0;
        for (std::size_t i = 0; i < give; ++i) {
            slice.push_back(std::move(vs.queue.back()));
            vs.queue.pop_back();
            volume += slice.back().job.description_words;
        }
        std::reverse(slice.begin(), slice.end());  // keep descending order
        if (scfg.check_invariants && vs.has_inbound_slice &&
            volume > vs.last_inbound_slice_volume)
            // re-migrated slices shrink: the tail of a received subarray
            // never outweighs the subarray it came from
            throw std::logic_error("steal invariant: re-migrated slice grew from " +
                                   std::to_string(vs.last_inbound_slice_volume) + " to " +
                                   std::to_string(volume) + " words");
        for (detail::StealJob& sj : slice) {
            sj.migrations += 1;
            if (scfg.check_invariants) {
                Words cap = ceil_log2(static_cast<int>(std::min<std::size_t>(
                                sj.origin_queue_len, 1ULL << 30))) +
                            1;
                if (sj.migrations > cap)
                    throw std::logic_error("steal invariant: job " + std::to_string(sj.job.id) +
                                           " migrated " + std::to_string(sj.migrations) +
                                           " times (cap " + std::to_string(cap) + ")");
            }
        }
        ledger.add_message(phase, victim, thief, volume);
        out.per_pe_sent[victim] += volume;
        out.per_pe_received[thief] += volume;
        engine.schedule_after(message_delay(cfg, volume),
                              [&, thief, volume, moved = std::move(slice)]() mutable {
                                  detail::PeState& ts = pes[thief];
                                  ts.request_outstanding = false;
                                  ts.has_inbound_slice = true;
                                  ts.last_inbound_slice_volume = volume;
                                  for (detail::StealJob& sj : moved)
                                      ts.queue.push_back(std::move(sj));
                                  activate(thief);
                              });
    };

    for (PeId pe = 1; pe <= p; ++pe) engine.schedule(0, [&, pe] { activate(pe); });
    engine.run();

    if (jobs_remaining != 0)
        throw EngineDiagnostic("work stealing stalled with " + std::to_string(jobs_remaining) +
                               " jobs left (all holders on strike?)");

    // Quiescence doubles as termination detection; its tree is modeled as a
    // flat 2*ceil(log2 p) words charged to every PE.
    ledger.charge_all(phase, 2 * ceil_log2(p));

    for (PeId pe = 1; pe <= p; ++pe) {
        out.per_pe_busy[pe] = pes[pe].busy;
        out.per_pe_output[pe] = pes[pe].output_words;
    }
    out.max_job_output = max_job_output;
    out.makespan = last_job_done;
    out.quiesce_time = engine.now();
    return out;
}

}  // namespace mrsim
