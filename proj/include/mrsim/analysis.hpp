#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// One measured value against one bound expression.
struct BoundCheck {
    std::string name;
    double measured = 0;
    double bound = 0;
    double ratio = 0;

    static BoundCheck of(std::string name, double measured, double bound)
    {
        BoundCheck c;
        c.name = std::move(name);
        c.measured = measured;
        c.bound = bound;
        c.ratio = bound > 0 ? measured / bound : 0;
        return c;
    }

    bool pass(double constant) const { return ratio <= constant; }
};

struct CostBoundChecks {
    BoundCheck work;    // w/p + w_hat + max(1, log2 p)
    BoundCheck comm;    // m/p + m_hat + max(1, log2 p)
    BoundCheck output;  // m/p + m_hat
};

inline CostBoundChecks check_cost_bounds(const ExecutionReport& report, const StepParameters& params,
                                     int p)
{
    double lg = log2_floor1(p);
    double dp = static_cast<double>(p);
    CostBoundChecks checks;
    checks.work = BoundCheck::of("work", static_cast<double>(report.bottleneck_work),
                                 static_cast<double>(params.w) / dp +
                                     static_cast<double>(params.w_hat) + lg);
    checks.comm = BoundCheck::of("comm", static_cast<double>(report.bottleneck_comm),
                                 static_cast<double>(params.m) / dp +
                                     static_cast<double>(params.m_hat) + lg);
    checks.output = BoundCheck::of("output", static_cast<double>(report.max_output_words),
                                   static_cast<double>(params.m) / dp +
                                       static_cast<double>(params.m_hat));
    return checks;
}

/// Exact expected maximum bin occupancy, as a rational number.
struct Occupancy {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;  // p^b
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

// Exact E[max load] of b balls thrown into p bins, by dynamic programming
// over placement counts: for each cap k, count placements with every bin
// <= k, then E = b - sum_{k=0}^{b-1} N_<=k / p^b. Guarded so the counts
// stay exact in 128-bit arithmetic.
inline Occupancy occupancy_exact(int b, int p)
{
    if (b < 0 || p < 1) throw ConfigError("occupancy: need b >= 0 and p >= 1");
    if (b == 0) return Occupancy{0, 1};
    long double total_ld = std::pow(static_cast<long double>(p), static_cast<long double>(b));
    if (total_ld > 1e12L)
        throw ConfigError("occupancy_exact: p^b too large for exact computation; "
                          "use the Monte Carlo estimator");

    // binomials C(b, i)
    std::vector<std::vector<unsigned long long>> choose(b + 1,
                                                        std::vector<unsigned long long>(b + 1, 0));
    for (int i = 0; i <= b; ++i) {
        choose[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }

    unsigned __int128 total = 1;
    for (int i = 0; i < b; ++i) total *= static_cast<unsigned>(p);

    // N_<=k: placements of b labeled balls into p bins, every bin <= k
    auto count_capped = [&](int cap) -> unsigned __int128 {
        // ways[j] = placements of j labeled balls into the bins seen so far
        std::vector<unsigned __int128> ways(b + 1, 0);
        ways[0] = 1;
        for (int bin = 0; bin < p; ++bin) {
            std::vector<unsigned __int128> next(b + 1, 0);
            for (int j = 0; j <= b; ++j) {
                if (ways[j] == 0) continue;
                for (int c = 0; c <= cap && j + c <= b; ++c)
                    next[j + c] += ways[j] * choose[j + c][c];
            }
            ways = std::move(next);
        }
        return ways[b];
    };

    unsigned __int128 sum = 0;
    for (int k = 0; k < b; ++k) sum += count_capped(k);
    unsigned __int128 numerator = static_cast<unsigned __int128>(b) * total - sum;
    return Occupancy{static_cast<std::uint64_t>(numerator), static_cast<std::uint64_t>(total)};
}

struct OccupancyEstimate {
    double mean = 0;
    double standard_error = 0;
    std::int64_t trials = 0;
};

/// Monte Carlo estimate of the expected maximum occupancy placing ceil(b)
/// balls into p bins. Deterministic per seed.
inline OccupancyEstimate occupancy_mc(double b, int p, std::int64_t trials, std::uint64_t seed)
{
    if (trials < 1) throw ConfigError("occupancy_mc: trials must be >= 1");
    if (p < 1) throw ConfigError("occupancy_mc: p must be >= 1");
    std::int64_t balls = static_cast<std::int64_t>(std::ceil(b));
    Rng rng(derive_seed(seed, 0x0CCB175ULL));
    std::vector<std::int32_t> bins(p);
    double sum = 0, sum_sq = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::fill(bins.begin(), bins.end(), 0);
        std::int32_t max_load = 0;
        for (std::int64_t i = 0; i < balls; ++i)
            max_load = std::max(max_load, ++bins[rng.next_below(p)]);
        sum += max_load;
        sum_sq += static_cast<double>(max_load) * max_load;
    }
    OccupancyEstimate est;
    est.trials = trials;
    est.mean = sum / static_cast<double>(trials);
    double variance = std::max(0.0, sum_sq / trials - est.mean * est.mean);
    est.standard_error = std::sqrt(variance / static_cast<double>(trials));
    return est;
}

struct OccupancyBoundChecks {
    BoundCheck time;       // superstep time vs w_hat*o(w/w_hat,p) + L + g*m_hat*o(m/m_hat,p)
    BoundCheck map_calls;  // bottleneck call count vs o(calls, p)
};

inline OccupancyBoundChecks check_occupancy_bound(SimTime measured_superstep_time,
                                     std::int64_t bottleneck_map_calls, std::int64_t total_calls,
                                     const StepParameters& params, const MachineConfig& cfg,
                                     std::int64_t trials = 2000)
{
    if (params.w_hat <= 0 || params.m_hat <= 0)
        throw ConfigError("check_occupancy_bound: needs w_hat > 0 and m_hat > 0");
    double o_work = occupancy_mc(static_cast<double>(params.w) / params.w_hat, cfg.p, trials,
                                 derive_seed(cfg.seed, 1))
                        .mean;
    double o_volume = occupancy_mc(static_cast<double>(params.m) / params.m_hat, cfg.p, trials,
                                   derive_seed(cfg.seed, 2))
                          .mean;
    double bound_time = static_cast<double>(params.w_hat) * o_work +
                        static_cast<double>(cfg.latency) +
                        static_cast<double>(cfg.gap) * params.m_hat * o_volume;
    double o_calls =
        occupancy_mc(static_cast<double>(total_calls), cfg.p, trials, derive_seed(cfg.seed, 3))
            .mean;
    OccupancyBoundChecks checks;
    checks.time = BoundCheck::of("superstep-time", static_cast<double>(measured_superstep_time),
                                 bound_time);
    checks.map_calls =
        BoundCheck::of("map-calls", static_cast<double>(bottleneck_map_calls), o_calls);
    return checks;
}

/// One CSV row of a run.
struct RunRecord {
    std::string scheduler;
    std::string shuffle;
    std::string remap;
    int p = 1;
    std::uint64_t seed = 0;
    StepParameters params;
    WorkUnits bottleneck_work = 0;
    Words bottleneck_comm = 0;
    Words max_output_words = 0;
};

inline const char* kCsvHeader =
    "scheduler,shuffle,remap,p,seed,w,w_hat,m,m_hat,bottleneck_work,bottleneck_comm,"
    "max_output_words";

/// Render run records as CSV, sorted by (scheduler, p, seed); ties (e.g.
/// the steps of one chained run) keep their input order.
inline std::string emit_report(std::vector<RunRecord> rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.scheduler != b.scheduler) return a.scheduler < b.scheduler;
        if (a.p != b.p) return a.p < b.p;
        return a.seed < b.seed;
    });
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const RunRecord& r : rows) {
        os << r.scheduler << ',' << r.shuffle << ',' << r.remap << ',' << r.p << ',' << r.seed
           << ',' << r.params.w << ',' << r.params.w_hat << ',' << r.params.m << ','
           << r.params.m_hat << ',' << r.bottleneck_work << ',' << r.bottleneck_comm << ','
           << r.max_output_words << '\n';
    }
    return os.str();
}

/// Largest ratio of measured to bound across a sweep: the fitted constant.
inline double fitted_constant(const std::vector<double>& ratios)
{
    double c = 0;
    for (double r : ratios) c = std::max(c, r);
    return c;
}

}  // namespace mrsim
