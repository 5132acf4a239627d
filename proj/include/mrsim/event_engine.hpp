#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "mrsim/machine.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

// Single-threaded discrete-event core. Events fire in (time, insertion id)
// order, which makes every run bit-reproducible; the id also breaks ties
// between events scheduled for the same instant. A budget guards against
// configurations that never quiesce (e.g. zero-delay retry loops).
class EventEngine {
public:
    using Handler = std::function<void()>;

    explicit EventEngine(std::uint64_t max_events = 100'000'000) : max_events_(max_events) {}

    void schedule(SimTime at, Handler fn)
    {
        if (at < now_) at = now_;
        queue_.push(Item{at, next_id_++, std::move(fn)});
    }

    void schedule_after(SimTime delay, Handler fn) { schedule(now_ + delay, std::move(fn)); }

    /// Run to quiescence. Throws EngineDiagnostic when the budget runs out.
    void run()
    {
        while (!queue_.empty()) {
            if (processed_ >= max_events_)
                throw EngineDiagnostic(
                    "event budget exhausted after " + std::to_string(processed_) +
                    " events at model time " + std::to_string(now_) +
                    " (a zero-delay configuration can livelock)");
            // top() is const; move the handler out via a copy of the shared state
            Item item = queue_.top();
            queue_.pop();
            now_ = item.time;
            ++processed_;
            item.fn();
        }
    }

    SimTime now() const { return now_; }
    std::uint64_t processed() const { return processed_; }

private:
    struct Item {
        SimTime time;
        std::uint64_t id;
        Handler fn;
        bool operator>(const Item& other) const
        {
            if (time != other.time) return time > other.time;
            return id > other.id;
        }
    };

    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue_;
    SimTime now_ = 0;
    std::uint64_t next_id_ = 0;
    std::uint64_t processed_ = 0;
    std::uint64_t max_events_;
};

/// Delivery delay of one message of the given size.
inline SimTime message_delay(const MachineConfig& cfg, Words words)
{
    return cfg.latency + cfg.gap * words;
}

}  // namespace mrsim
