#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "mrsim/core.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

struct ShuffleConfig {
    double c_exponent = 3.0;  // hash range 1..m^c, c > 2
    std::uint64_t hash_seed = 1;
    int retry_limit = 10;  // restarts on a detected hash collision

    void validate() const
    {
        if (c_exponent <= 2.0) throw ConfigError("shuffle: c_exponent must be > 2");
        if (retry_limit < 1) throw ConfigError("shuffle: retry_limit must be >= 1");
    }
};

/// Owner of a prefix interval: PE 1 + floor(p*n/m') for prefix offset n.
inline PeId assign_key(Words prefix_words, Words m_prime, int p)
{
    if (m_prime <= 0) throw ConfigError("assign_key: m' must be positive");
    if (prefix_words < 0 || prefix_words >= m_prime)
        throw ConfigError("assign_key: prefix offset out of 0..m'-1");
    return static_cast<PeId>(
        1 + static_cast<__int128>(p) * prefix_words / m_prime);
}

/// Where each key group went, with the volumes the assignment was based on.
struct KeyAssignment {
    struct Entry {
        KeyId key = 0;
        std::uint64_t hash_value = 0;
        Words volume = 0;        // v(c): routed pair volume of this group
        Words prefix_words = 0;  // n: exclusive prefix in hash order
        PeId owner = 1;
    };
    std::vector<Entry> entries;  // sorted by hash value
    Words m_prime = 0;
    int attempts = 1;

    PeId owner_of(KeyId key) const
    {
        for (const Entry& e : entries)
            if (e.key == key) return e.owner;
        throw ConfigError("owner_of: unknown key");
    }
};

/// One pair of B sitting on a PE, ready to be shuffled.
struct PlacedPair {
    KeyId key = 0;
    Words key_size_words = 1;
    Words value_size_words = 0;
    std::size_t source_element = 0;
    PeId pe = 1;

    Words words() const { return key_size_words + value_size_words; }
};

struct ShuffleResult {
    KeyAssignment assignment;
    std::vector<Words> per_pe_received_volume;  // delivered pair words per PE
    std::vector<PhaseStats> phases;
    Words m_hat_groups = 0;  // largest single group volume
};

// Prefix-sum shuffling: count per-hash volumes with 2-word tuples, assign
// owners by a global prefix sum over the volumes in hash order, answer the
// counting tuples with the assignments, then deliver the pair data straight
// to the owners. Four exchanges; the prefix sum is charged ceil(log2 p)
// words and time per PE.
inline ShuffleResult run_shuffle(const std::vector<PlacedPair>& pairs, const MachineConfig& cfg,
                                 const ShuffleConfig& scfg, CommLedger& ledger,
                                 std::vector<std::string>* warnings = nullptr)
{
    cfg.validate();
    scfg.validate();
    const int p = cfg.p;

    Words total_pair_words = 0;
    for (const PlacedPair& pr : pairs) total_pair_words += pr.words();

    ShuffleResult result;
    result.per_pe_received_volume.assign(p + 1, 0);
    if (pairs.empty()) return result;

    // hash range 1..ceil(m^c), capped so arithmetic stays in 64 bits
    long double range_ld = std::pow(static_cast<long double>(std::max<Words>(total_pair_words, 2)),
                                    static_cast<long double>(scfg.c_exponent));
    std::uint64_t range = range_ld >= 9.0e18L ? 9'000'000'000'000'000'000ULL
                                              : static_cast<std::uint64_t>(range_ld) + 1;

    std::uint64_t seed = scfg.hash_seed;
    for (int attempt = 1;; ++attempt) {
        if (attempt > scfg.retry_limit)
            throw EngineDiagnostic("shuffle: hash collisions persisted through " +
                                   std::to_string(scfg.retry_limit) + " seeds");
        result.assignment = KeyAssignment{};
        result.assignment.attempts = attempt;

        // detect true collisions: two distinct keys on one hash value
        std::map<std::uint64_t, KeyId> owner_key;
        std::map<std::uint64_t, Words> volume_by_hash;
        bool collision = false;
        for (const PlacedPair& pr : pairs) {
            std::uint64_t h = 1 + hash_range(pr.key, seed, range);
            auto [it, inserted] = owner_key.try_emplace(h, pr.key);
            if (!inserted && it->second != pr.key) {
                collision = true;
                break;
            }
            volume_by_hash[h] += pr.words();
        }
        if (collision) {
            seed = derive_seed(seed, 0xC011ULL);
            if (warnings)
                warnings->push_back("shuffle: hash collision, restarting with a fresh seed");
            continue;
        }

        Words m_prime = 0;
        for (const auto& [h, v] : volume_by_hash) m_prime += v;
        result.assignment.m_prime = m_prime;
        result.assignment.entries.reserve(volume_by_hash.size());
        Words prefix = 0;
        for (const auto& [h, v] : volume_by_hash) {  // std::map iterates in hash order
            KeyAssignment::Entry e;
            e.key = owner_key[h];
            e.hash_value = h;
            e.volume = v;
            e.prefix_words = prefix;
            e.owner = assign_key(prefix, m_prime, p);
            prefix += v;
            result.m_hat_groups = std::max(result.m_hat_groups, v);
            result.assignment.entries.push_back(e);
        }
        break;
    }

    std::map<KeyId, PeId> owner_by_key;
    for (const auto& e : result.assignment.entries) owner_by_key[e.key] = e.owner;

    // phase 1: counting tuples, 2 words per local pair, to PE h mod p
    int ph_count = ledger.begin_phase("shuffle-count");
    std::map<KeyId, PeId> counting_pe;
    for (const auto& e : result.assignment.entries)
        counting_pe[e.key] = static_cast<PeId>(1 + e.hash_value % p);
    for (const PlacedPair& pr : pairs)
        ledger.add_message(ph_count, pr.pe, counting_pe.at(pr.key), 2);
    result.phases.push_back(PhaseStats{"shuffle-count", 0, ledger.phase_h(ph_count),
                                       superstep_cost(0, ledger.phase_h(ph_count), cfg)});

    // phase 2: global prefix sum over the aggregated volumes
    int ph_prefix = ledger.begin_phase("shuffle-prefix");
    Words lg = ceil_log2(p);
    ledger.charge_all(ph_prefix, lg);
    result.phases.push_back(
        PhaseStats{"shuffle-prefix", lg, ledger.phase_h(ph_prefix),
                   superstep_cost(lg, ledger.phase_h(ph_prefix), cfg)});

    // phase 3: assignments travel back along the reversed counting routes
    int ph_reply = ledger.begin_phase("shuffle-assign");
    for (const PlacedPair& pr : pairs)
        ledger.add_message(ph_reply, counting_pe.at(pr.key), pr.pe, 2);
    result.phases.push_back(PhaseStats{"shuffle-assign", 0, ledger.phase_h(ph_reply),
                                       superstep_cost(0, ledger.phase_h(ph_reply), cfg)});

    // phase 4: the pair data goes straight to its owner
    int ph_data = ledger.begin_phase("shuffle-deliver");
    for (const PlacedPair& pr : pairs) {
        PeId owner = owner_by_key.at(pr.key);
        ledger.add_message(ph_data, pr.pe, owner, pr.words());
        result.per_pe_received_volume[owner] += pr.words();
    }
    result.phases.push_back(PhaseStats{"shuffle-deliver", 0, ledger.phase_h(ph_data),
                                       superstep_cost(0, ledger.phase_h(ph_data), cfg)});

    // assignment-rule consequence, checked on every run: received volume
    // stays below m'/p + max group volume (exact integer comparison)
    for (PeId pe = 1; pe <= p; ++pe) {
        __int128 lhs = static_cast<__int128>(result.per_pe_received_volume[pe]) * p;
        __int128 rhs = static_cast<__int128>(result.assignment.m_prime) +
                       static_cast<__int128>(p) * result.m_hat_groups;
        if (lhs > rhs)
            throw std::logic_error("shuffle invariant: PE " + std::to_string(pe) +
                                   " received more than m'/p + max group volume");
    }

    return result;
}

}  // namespace mrsim
