#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

/// The modeled machine: p PEs, BSP latency L and gap g, and the run seed.
struct MachineConfig {
    int p = 1;
    SimTime latency = 0;  // L
    SimTime gap = 0;      // g, time per word
    std::uint64_t seed = 1;

    void validate() const
    {
        if (p < 1) throw ConfigError("machine: p must be >= 1");
        if (latency < 0 || gap < 0) throw ConfigError("machine: L and g must be >= 0");
    }
};

/// Time of one superstep with bottleneck work w_x and bottleneck volume h.
inline SimTime superstep_cost(WorkUnits w_x, Words h, const MachineConfig& cfg)
{
    return w_x + cfg.latency + h * cfg.gap;
}

struct Message {
    PeId src = 1;
    PeId dst = 1;
    Words words = 0;
};

// Per-phase, per-PE word counters. Self-messages are counted as messages
// but carry zero words: communication volume is inter-PE traffic only.
class CommLedger {
public:
    struct Phase {
        std::string name;
        std::vector<Words> sent;      // index 0 unused
        std::vector<Words> received;
        std::vector<std::int64_t> message_count;
    };

    explicit CommLedger(int p = 1) : p_(p) {}

    int begin_phase(std::string name)
    {
        Phase ph;
        ph.name = std::move(name);
        ph.sent.assign(p_ + 1, 0);
        ph.received.assign(p_ + 1, 0);
        ph.message_count.assign(p_ + 1, 0);
        phases_.push_back(std::move(ph));
        return static_cast<int>(phases_.size()) - 1;
    }

    void add_message(int phase, PeId src, PeId dst, Words words)
    {
        if (src < 1 || src > p_ || dst < 1 || dst > p_)
            throw ConfigError("ledger: PE id out of 1..p");
        Phase& ph = phases_.at(phase);
        ph.message_count[src] += 1;
        if (src == dst) return;  // local delivery is free
        ph.sent[src] += words;
        ph.received[dst] += words;
    }

    // Symmetric per-PE charge, e.g. for a prefix-sum or termination tree.
    void charge_all(int phase, Words words_each)
    {
        Phase& ph = phases_.at(phase);
        if (words_each == 0) return;
        for (PeId pe = 1; pe <= p_; ++pe) {
            ph.sent[pe] += words_each;
            ph.received[pe] += words_each;
            ph.message_count[pe] += 1;
        }
    }

    /// Bottleneck volume of one phase: max over PEs of max(sent, received).
    Words phase_h(int phase) const
    {
        const Phase& ph = phases_.at(phase);
        Words h = 0;
        for (PeId pe = 1; pe <= p_; ++pe)
            h = std::max(h, std::max(ph.sent[pe], ph.received[pe]));
        return h;
    }

    /// Bottleneck communication volume across all phases: for each PE sum
    /// max(sent, received) over phases, then take the max over PEs.
    Words bottleneck_comm() const
    {
        Words best = 0;
        for (PeId pe = 1; pe <= p_; ++pe) {
            Words total = 0;
            for (const Phase& ph : phases_) total += std::max(ph.sent[pe], ph.received[pe]);
            best = std::max(best, total);
        }
        return best;
    }

    Words total_sent(int phase) const
    {
        const Phase& ph = phases_.at(phase);
        Words s = 0;
        for (PeId pe = 1; pe <= p_; ++pe) s += ph.sent[pe];
        return s;
    }

    Words total_received(int phase) const
    {
        const Phase& ph = phases_.at(phase);
        Words r = 0;
        for (PeId pe = 1; pe <= p_; ++pe) r += ph.received[pe];
        return r;
    }

    bool conserved() const
    {
        for (int i = 0; i < static_cast<int>(phases_.size()); ++i)
            if (total_sent(i) != total_received(i)) return false;
        return true;
    }

    int p() const { return p_; }
    const std::vector<Phase>& phases() const { return phases_; }

private:
    int p_ = 1;
    std::vector<Phase> phases_;
};

/// Record a message exchange in the ledger and return its bottleneck volume.
inline Words exchange(std::span<const Message> messages, CommLedger& ledger, int phase)
{
    for (const Message& msg : messages) ledger.add_message(phase, msg.src, msg.dst, msg.words);
    return ledger.phase_h(phase);
}

struct PhaseStats {
    std::string name;
    WorkUnits bottleneck_work = 0;  // max over PEs within this phase
    Words h = 0;
    SimTime time = 0;
};

/// What one executed phase pipeline reports back.
struct ExecutionReport {
    int p = 1;
    std::vector<WorkUnits> per_pe_work;        // includes waiting; index 0 unused
    std::vector<WorkUnits> per_pe_busy;        // pure compute share
    std::vector<Words> per_pe_output_words;    // step output produced per PE
    WorkUnits bottleneck_work = 0;
    Words bottleneck_comm = 0;
    Words max_output_words = 0;
    SimTime model_time = 0;
    std::vector<PhaseStats> phases;
    CommLedger ledger{1};
    std::vector<std::string> warnings;

    void init(int p_count)
    {
        p = p_count;
        per_pe_work.assign(p + 1, 0);
        per_pe_busy.assign(p + 1, 0);
        per_pe_output_words.assign(p + 1, 0);
        ledger = CommLedger(p);
    }

    void finish()
    {
        if (!ledger.conserved())
            throw std::logic_error("ledger invariant: sent and received words diverge");
        bottleneck_comm = ledger.bottleneck_comm();
        max_output_words = 0;
        for (PeId pe = 1; pe <= p; ++pe)
            max_output_words = std::max(max_output_words, per_pe_output_words[pe]);
    }
};

inline double log2_floor1(int p)
{
    return std::max(1.0, std::log2(static_cast<double>(p)));
}

inline Words ceil_log2(int p)
{
    Words bits = 0;
    while ((1LL << bits) < p) ++bits;
    return bits;
}

}  // namespace mrsim
