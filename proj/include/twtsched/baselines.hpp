#ifndef TWTSCHED_BASELINES_HPP
#define TWTSCHED_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "twtsched/energy.hpp"
#include "twtsched/model.hpp"
#include "twtsched/rng.hpp"

// Comparison schedulers sharing the Schedule output contract: greedy
// shortest-first, generation-order FIFO, priority-first, seeded random,
// and a slotted greedy scheduler carried over from WirelessHART-style
// TDMA (HSA).

namespace twtsched {

enum class Strategy { Tasper, Exact, ShortestFirst, Fifo, PriorityFirst, Random, Hsa };

struct StrategyConfig {
    Strategy strategy = Strategy::Tasper;
    std::uint64_t seed = 0;
    Micros hsa_slot_us = 1024;
};

struct BaselineResult {
    Schedule schedule;
    // TXs that were given airtime but finished past their deadline. Such a
    // TX delivers stale data: it is tallied here and lands in the rejected
    // set so that the schedule itself stays feasible. Only FIFO can commit
    // airtime this way; the other strategies check completion first.
    int deadline_misses = 0;
};

namespace detail {

struct GreedyPick {
    std::vector<int> remaining;  // indexes into Instance::txs
    Micros t0 = 0;
};

inline bool fits(const Instance& in, const TransmissionRequest& tx, Micros t0) {
    const Micros done = std::max(t0, tx.gen_time_us) + tx.duration_us;
    return done <= tx.deadline_us && done <= in.beacon_interval_us;
}

// Shared greedy loop: repeatedly pick among currently feasible TXs with a
// strategy-specific choice function, place at the earliest time, advance.
template <typename PickFn>
Schedule greedy_schedule(const Instance& in, PickFn&& pick) {
    Schedule s;
    std::vector<int> remaining(in.txs.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<int>(i);
    Micros t0 = 0;
    while (true) {
        std::vector<int> cands;
        for (int i : remaining)
            if (fits(in, in.txs[i], t0)) cands.push_back(i);
        if (cands.empty()) break;
        const int chosen = pick(cands, t0);
        const auto& tx = in.txs[chosen];
        const Micros start = std::max(t0, tx.gen_time_us);
        s.accepted.push_back({tx.id, start, start + tx.duration_us});
        t0 = start + tx.duration_us;
        remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
    }
    for (int i : remaining) s.rejected.push_back(in.txs[i].id);
    std::sort(s.rejected.begin(), s.rejected.end());
    return s;
}

// Picks the minimum under `key`; full ties are broken by a seeded draw.
template <typename KeyFn>
int pick_min(const Instance& in, const std::vector<int>& cands, KeyFn&& key, Rng& rng) {
    std::vector<int> best;
    for (int i : cands) {
        if (best.empty()) {
            best.push_back(i);
            continue;
        }
        auto ka = key(in.txs[i]);
        auto kb = key(in.txs[best.front()]);
        if (ka < kb) {
            best.clear();
            best.push_back(i);
        } else if (!(kb < ka)) {
            best.push_back(i);
        }
    }
    if (best.size() == 1) return best.front();
    return best[rng.below(best.size())];
}

}  // namespace detail

// Shortest TXOP first; ties by earliest deadline, highest priority, oldest
// generation time, then a seeded draw.
inline BaselineResult solve_shortest_first(const Instance& in, std::uint64_t seed = 0) {
    require_valid(in);
    Rng rng(derive_seed(seed, 0x5f5f));
    BaselineResult res;
    res.schedule = detail::greedy_schedule(in, [&](const std::vector<int>& cands, Micros) {
        return detail::pick_min(
            in, cands,
            [](const TransmissionRequest& t) {
                return std::make_tuple(t.duration_us, t.deadline_us, -t.priority, t.gen_time_us);
            },
            rng);
    });
    return res;
}

// Highest priority first; ties by nearest deadline, shortest duration,
// oldest generation time, then a seeded draw.
inline BaselineResult solve_priority_first(const Instance& in, std::uint64_t seed = 0) {
    require_valid(in);
    Rng rng(derive_seed(seed, 0x9f9f));
    BaselineResult res;
    res.schedule = detail::greedy_schedule(in, [&](const std::vector<int>& cands, Micros) {
        return detail::pick_min(
            in, cands,
            [](const TransmissionRequest& t) {
                return std::make_tuple(-t.priority, t.deadline_us, t.duration_us, t.gen_time_us);
            },
            rng);
    });
    return res;
}

// Uniform choice among currently feasible TXs; fully determined by seed.
inline BaselineResult solve_random(const Instance& in, std::uint64_t seed) {
    require_valid(in);
    Rng rng(derive_seed(seed, 0xa5a5));
    BaselineResult res;
    res.schedule = detail::greedy_schedule(in, [&](const std::vector<int>& cands, Micros) {
        return cands[rng.below(cands.size())];
    });
    return res;
}

// Serves TXs in generation order. A request whose deadline has already
// passed when its turn comes is dropped without airtime; one that can
// start in time but cannot finish by its deadline is transmitted anyway
// and recorded as a deadline miss (the data arrives stale, so the TX
// still counts as rejected traffic).
inline BaselineResult solve_fifo(const Instance& in, std::uint64_t seed = 0) {
    require_valid(in);
    Rng rng(derive_seed(seed, 0xf1f0));
    BaselineResult res;

    std::vector<int> order(in.txs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<std::uint64_t> rank(in.txs.size());
    for (auto& r : rank) r = rng.next_u64();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ta = in.txs[a];
        const auto& tb = in.txs[b];
        auto ka = std::make_tuple(ta.gen_time_us, ta.duration_us, -ta.priority, rank[a]);
        auto kb = std::make_tuple(tb.gen_time_us, tb.duration_us, -tb.priority, rank[b]);
        return ka < kb;
    });

    Micros t0 = 0;
    for (int i : order) {
        const auto& tx = in.txs[i];
        const Micros start = std::max(t0, tx.gen_time_us);
        const Micros done = start + tx.duration_us;
        if (start >= tx.deadline_us) {
            res.schedule.rejected.push_back(tx.id);  // expired before service
        } else if (done > in.beacon_interval_us) {
            res.schedule.rejected.push_back(tx.id);  // no room left this interval
        } else if (done > tx.deadline_us) {
            ++res.deadline_misses;  // served, but the data arrives late
            res.schedule.rejected.push_back(tx.id);
            t0 = done;
        } else {
            res.schedule.accepted.push_back({tx.id, start, done});
            t0 = done;
        }
    }
    std::sort(res.schedule.rejected.begin(), res.schedule.rejected.end());
    return res;
}

// Weight of a pending TX when a slot starting at `now` is up for grabs.
// The default is deadline-urgency-weighted priority: p_hat divided by the
// slots remaining until the deadline.
using HsaWeightFn = double (*)(const TransmissionRequest&, Micros now, Micros slot_us,
                               const NormalizationContext&);

inline double hsa_urgency_weight(const TransmissionRequest& tx, Micros now, Micros slot_us,
                                 const NormalizationContext& ctx) {
    const double slack_slots =
        static_cast<double>(tx.deadline_us - now) / static_cast<double>(slot_us);
    return ctx.p_hat(tx.priority) / slack_slots;
}

// Slotted greedy scheduler: time is gridded into fixed slots and each free
// slot goes to the pending TX with the highest weight. The winner keeps
// the channel for ceil(tau/slot) consecutive slots, which keeps every
// accepted TX a single contiguous airtime grant.
inline BaselineResult solve_hsa(const Instance& in, Micros slot_us = 1024,
                                HsaWeightFn weight = hsa_urgency_weight) {
    require_valid(in);
    if (slot_us <= 0 || in.beacon_interval_us % slot_us != 0)
        throw std::invalid_argument("hsa slot must divide the beacon interval");
    BaselineResult res;
    if (in.txs.empty()) return res;

    const NormalizationContext ctx = normalize(in);
    const std::int64_t n_slots = in.beacon_interval_us / slot_us;

    std::vector<int> remaining(in.txs.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<int>(i);

    std::int64_t slot = 0;
    while (slot < n_slots && !remaining.empty()) {
        const Micros now = slot * slot_us;
        int winner = -1;
        double w_best = -1.0;
        for (int i : remaining) {
            const auto& tx = in.txs[i];
            if (tx.gen_time_us > now) continue;
            const std::int64_t need = (tx.duration_us + slot_us - 1) / slot_us;
            const Micros done_grid = now + need * slot_us;
            if (done_grid > tx.deadline_us || done_grid > in.beacon_interval_us) continue;
            const double w = weight(tx, now, slot_us, ctx);
            if (winner < 0 || w > w_best) {
                winner = i;
                w_best = w;
            } else if (w == w_best) {
                const auto& cur = in.txs[winner];
                auto ki = std::make_tuple(tx.deadline_us, -tx.priority, tx.duration_us, tx.id);
                auto kc = std::make_tuple(cur.deadline_us, -cur.priority, cur.duration_us, cur.id);
                if (ki < kc) winner = i;
            }
        }
        if (winner < 0) {
            ++slot;
            continue;
        }
        const auto& tx = in.txs[winner];
        const std::int64_t need = (tx.duration_us + slot_us - 1) / slot_us;
        res.schedule.accepted.push_back({tx.id, now, now + tx.duration_us});
        slot += need;
        remaining.erase(std::find(remaining.begin(), remaining.end(), winner));
    }
    for (int i : remaining) res.schedule.rejected.push_back(in.txs[i].id);
    std::sort(res.schedule.rejected.begin(), res.schedule.rejected.end());
    return res;
}

}  // namespace twtsched

#endif
