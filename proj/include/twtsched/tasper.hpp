#ifndef TWTSCHED_TASPER_HPP
#define TWTSCHED_TASPER_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "twtsched/energy.hpp"
#include "twtsched/model.hpp"
#include "twtsched/objective.hpp"

// TASPER: best-path search over the transmission decision graph. TXs are
// ordered by latest start time; paths grow from one seed per TX,
// restricted to an index neighborhood of size eta, with Pareto dominance
// (higher cumulative reward, earlier completion) pruning paths that meet
// at the same vertex with the same visited set inside the window.

namespace twtsched {

// TXs sorted ascending by latest start time d - tau. Ties break on
// (deadline, duration, id) so the order is a deterministic total order.
struct OrderedTxList {
    std::vector<int> order;   // position -> index into Instance::txs
    std::vector<int> ind_of;  // index into Instance::txs -> position

    int size() const { return static_cast<int>(order.size()); }
};

inline OrderedTxList latest_start_order(const Instance& in) {
    OrderedTxList lst;
    lst.order.resize(in.txs.size());
    for (std::size_t i = 0; i < in.txs.size(); ++i) lst.order[i] = static_cast<int>(i);
    std::sort(lst.order.begin(), lst.order.end(), [&](int a, int b) {
        const auto& ta = in.txs[a];
        const auto& tb = in.txs[b];
        auto ka = std::make_tuple(ta.latest_start_us(), ta.deadline_us, ta.duration_us, ta.id);
        auto kb = std::make_tuple(tb.latest_start_us(), tb.deadline_us, tb.duration_us, tb.id);
        return ka < kb;
    });
    lst.ind_of.resize(in.txs.size());
    for (int pos = 0; pos < lst.size(); ++pos) lst.ind_of[lst.order[pos]] = pos;
    return lst;
}

// A TX can follow a partial schedule ending at t0 iff it can still finish
// by its deadline (and within the interval) when started as early as
// possible.
inline bool is_feasible_next(Micros t0, const TransmissionRequest& tx, Micros horizon_us) {
    const Micros completion = std::max(t0, tx.gen_time_us) + tx.duration_us;
    return completion <= tx.deadline_us && completion <= horizon_us;
}

// Unvisited TXs whose list index differs from `ind` by at most eta and
// whose deadline is still reachable from `now`. Returns indexes into
// Instance::txs in list order.
inline std::vector<int> find_neighbors(const Instance& in, const OrderedTxList& lst, int ind,
                                       int eta, const std::vector<bool>& visited, Micros now) {
    std::vector<int> out;
    const int lo = std::max(0, ind - eta);
    const int hi = std::min(lst.size() - 1, ind + eta);
    for (int pos = lo; pos <= hi; ++pos) {
        const int txi = lst.order[pos];
        if (visited[txi]) continue;
        if (!is_feasible_next(now, in.txs[txi], in.beacon_interval_us)) continue;
        out.push_back(txi);
    }
    return out;
}

// Edge value toward `next` when the path so far ends at time t0 with a TX
// of station prev_sta: v = beta*p_hat + (1-beta)*(1-e_hat), evaluated for
// the tentative placement start = max(t0, g).
inline double edge_value(const CostModel& model, Micros t0, StaId prev_sta,
                         const TransmissionRequest& next, double beta) {
    const Micros start = std::max(t0, next.gen_time_us);
    const double e_hat = model.cost_hat(t0, start, next, prev_sta);
    return beta * model.p_hat(next) + (1.0 - beta) * (1.0 - e_hat);
}

// Search state: the visited TX ids (the virtual head is implicit), the
// summed edge values, and the completion time of the last TX.
struct SearchPath {
    std::vector<TxId> visited;
    double cumulative_reward = 0.0;
    Micros time = 0;
};

// Pareto dominance between paths ending at the same vertex: no worse
// reward, no later completion, at least one strict. Equal pairs do not
// dominate each other.
inline bool dominates(const SearchPath& a, const SearchPath& b) {
    if (a.visited.empty() || b.visited.empty() || a.visited.back() != b.visited.back())
        throw std::invalid_argument(
            "dominance is defined only between paths ending at the same vertex");
    const bool no_worse = a.cumulative_reward >= b.cumulative_reward && a.time <= b.time;
    const bool strict = a.cumulative_reward > b.cumulative_reward || a.time < b.time;
    return no_worse && strict;
}

struct SearchStats {
    std::uint64_t paths_created = 0;
    std::uint64_t paths_pruned = 0;
    int max_slack_observed = 0;
    std::int64_t wall_time_us = 0;
    bool truncated = false;  // path budget hit; result is still feasible
};

struct TasperResult {
    Schedule schedule;
    SearchStats stats;
};

// Maximum number of TXs simultaneously available for scheduling: the peak
// overlap of the [g, d - tau] start windows.
inline int observed_slack(const Instance& in) {
    std::vector<std::pair<Micros, int>> events;
    events.reserve(in.txs.size() * 2);
    for (const auto& t : in.txs) {
        events.push_back({t.gen_time_us, +1});
        events.push_back({t.latest_start_us() + 1, -1});
    }
    std::sort(events.begin(), events.end());
    int cur = 0, best = 0;
    for (const auto& [at, delta] : events) {
        cur += delta;
        best = std::max(best, cur);
    }
    return best;
}

namespace detail {

class TasperSearch {
public:
    TasperSearch(const Instance& in, const SolveConfig& cfg)
        : in_(in), cfg_(cfg), model_(in), order_(latest_start_order(in)) {
        const std::size_t n = in.txs.size();
        scratch_visited_.assign(n, false);
        vertex_paths_.assign(n, {});
    }

    TasperResult run() {
        const auto t_start = std::chrono::steady_clock::now();
        SearchStats stats;
        stats.max_slack_observed = observed_slack(in_);

        // one seed path per TX, processed level-synchronously: every path
        // retained at length L is expanded once before any path of length
        // L+1, so dominance removals land before the victims spawn work
        std::vector<int> frontier;
        for (int pos = 0; pos < order_.size(); ++pos) {
            const int txi = order_.order[pos];
            const auto& tx = in_.txs[txi];
            Label seed;
            seed.txi = txi;
            seed.parent = -1;
            seed.length = 1;
            seed.reward = edge_value(model_, 0, CostModel::kNoSta, tx, cfg_.beta);
            seed.time = tx.gen_time_us + tx.duration_us;
            for (int i : scratch_marks_) scratch_visited_[i] = false;
            scratch_marks_.clear();
            scratch_visited_[txi] = true;
            scratch_marks_.push_back(txi);
            insert_label(seed, frontier);
        }

        while (!frontier.empty() && !truncated_) {
            std::vector<int> next_frontier;
            for (int li : frontier) {
                if (!pool_[li].alive) continue;
                expand(li, next_frontier);
                if (truncated_) break;
            }
            throttle(next_frontier);
            frontier = std::move(next_frontier);
        }

        TasperResult res;
        res.schedule = materialize(select_best());
        stats.paths_created = static_cast<std::uint64_t>(pool_.size());
        stats.paths_pruned = pruned_;
        stats.truncated = truncated_ || throttled_;
        stats.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                                 std::chrono::steady_clock::now() - t_start)
                                 .count();
        res.stats = stats;
        return res;
    }

private:
    struct Label {
        int txi;     // last visited tx (index into Instance::txs)
        int parent;  // index into pool_, -1 for a seed
        int length;
        double reward;
        Micros time;
        bool alive = true;
        bool maximal = true;
    };

    // Paths meeting at a vertex are comparable only when they also agree
    // on which TXs inside the index window [ind-eta, ind+eta] they have
    // visited: outside the window the visited set cannot influence the
    // remaining choices, inside it it determines them. This keying is what
    // bounds the retained paths by 4^eta per vertex. Windows wider than 64
    // positions fold onto the low bits, which only coarsens the grouping.
    std::uint64_t window_mask(int txi) const {
        const int ind = order_.ind_of[txi];
        const int lo = std::max(0, ind - cfg_.eta);
        const int hi = std::min(order_.size() - 1, ind + cfg_.eta);
        std::uint64_t mask = 0;
        for (int pos = lo; pos <= hi; ++pos)
            if (scratch_visited_[order_.order[pos]]) mask |= 1ULL << ((pos - lo) & 63);
        return mask;
    }

    // fills scratch_visited_ with the label's visited set
    void load_visited(int li) {
        for (int i : scratch_marks_) scratch_visited_[i] = false;
        scratch_marks_.clear();
        for (int cur = li; cur >= 0; cur = pool_[cur].parent) {
            scratch_visited_[pool_[cur].txi] = true;
            scratch_marks_.push_back(pool_[cur].txi);
        }
    }

    // dominance-filtered insertion; returns false when the candidate died
    bool insert_label(const Label& cand, std::vector<int>& frontier) {
        // scratch_visited_ must already describe cand's visited set
        const std::uint64_t key = window_mask(cand.txi);
        auto& bucket = vertex_paths_[cand.txi][key];
        for (int qi : bucket) {
            const Label& q = pool_[qi];
            if (!q.alive) continue;
            const bool no_worse = q.reward >= cand.reward && q.time <= cand.time;
            const bool strict = q.reward > cand.reward || q.time < cand.time;
            if (no_worse && strict) {
                ++pruned_;
                return false;
            }
        }
        bool removed = false;
        for (int qi : bucket) {
            Label& q = pool_[qi];
            if (!q.alive) continue;
            const bool no_worse = cand.reward >= q.reward && cand.time <= q.time;
            const bool strict = cand.reward > q.reward || cand.time < q.time;
            if (no_worse && strict) {
                q.alive = false;
                removed = true;
                ++pruned_;
            }
        }
        if (removed)
            bucket.erase(std::remove_if(bucket.begin(), bucket.end(),
                                        [&](int qi) { return !pool_[qi].alive; }),
                         bucket.end());
        if (pool_.size() >= kMaxLabels) {
            truncated_ = true;
            return false;
        }
        const int idx = static_cast<int>(pool_.size());
        pool_.push_back(cand);
        bucket.push_back(idx);
        frontier.push_back(idx);
        if (cand.parent >= 0) pool_[cand.parent].maximal = false;
        return true;
    }

    // Expansion budget per level. Levels below the budget are searched
    // exhaustively (with dominance); above it only the most promising
    // labels grow further. Unexpanded labels still compete for the final
    // answer, so the search degrades gracefully on overloaded instances
    // instead of blowing the per-beacon time budget.
    void throttle(std::vector<int>& level) {
        const std::size_t cap = cfg_.max_frontier > 0 ? static_cast<std::size_t>(cfg_.max_frontier)
                                                      : kDefaultFrontier;
        if (level.size() <= cap) return;
        std::sort(level.begin(), level.end(), [&](int a, int b) {
            const Label& la = pool_[a];
            const Label& lb = pool_[b];
            if (la.reward != lb.reward) return la.reward > lb.reward;
            if (la.time != lb.time) return la.time < lb.time;
            return a < b;
        });
        level.resize(cap);
        throttled_ = true;
    }

    struct Candidate {
        int txi;
        double value;
        Micros completion;
        TxId id;
    };

    void expand(int li, std::vector<int>& frontier) {
        load_visited(li);
        const Label lab = pool_[li];
        const int ind = order_.ind_of[lab.txi];
        const StaId prev_sta = in_.txs[lab.txi].sta_id;

        std::vector<Candidate> cands;
        const int lo = std::max(0, ind - cfg_.eta);
        const int hi = std::min(order_.size() - 1, ind + cfg_.eta);
        for (int pos = lo; pos <= hi; ++pos) {
            const int txi = order_.order[pos];
            if (scratch_visited_[txi]) continue;
            const auto& tx = in_.txs[txi];
            if (!is_feasible_next(lab.time, tx, in_.beacon_interval_us)) continue;
            Candidate c;
            c.txi = txi;
            c.value = edge_value(model_, lab.time, prev_sta, tx, cfg_.beta);
            c.completion = std::max(lab.time, tx.gen_time_us) + tx.duration_us;
            c.id = tx.id;
            cands.push_back(c);
        }
        // dominant choice first: higher value, then earlier completion, then id
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.value != b.value) return a.value > b.value;
            if (a.completion != b.completion) return a.completion < b.completion;
            return a.id < b.id;
        });

        for (const Candidate& c : cands) {
            Label ext;
            ext.txi = c.txi;
            ext.parent = li;
            ext.length = lab.length + 1;
            ext.reward = lab.reward + c.value;
            ext.time = c.completion;

            scratch_visited_[c.txi] = true;
            scratch_marks_.push_back(c.txi);
            const bool inserted = insert_label(ext, frontier);
            scratch_visited_[c.txi] = false;
            scratch_marks_.pop_back();
            if (truncated_) return;
            if (inserted && cfg_.first_extension_only) return;
        }
    }

    // Highest cumulative reward wins; ties prefer earlier completion, then
    // more accepted TXs, then the lexicographically smallest id sequence.
    int select_best() {
        int best = -1;
        std::vector<TxId> best_ids;
        for (int li = 0; li < static_cast<int>(pool_.size()); ++li) {
            const Label& p = pool_[li];
            if (!p.alive || !p.maximal) continue;
            if (best < 0) {
                best = li;
                best_ids.clear();
                continue;
            }
            const Label& b = pool_[best];
            bool better = false;
            bool tie = false;
            if (p.reward != b.reward) {
                better = p.reward > b.reward;
            } else if (p.time != b.time) {
                better = p.time < b.time;
            } else if (p.length != b.length) {
                better = p.length > b.length;
            } else {
                tie = true;
            }
            if (tie) {
                if (best_ids.empty()) best_ids = id_sequence(best);
                std::vector<TxId> ids = id_sequence(li);
                if (ids < best_ids) {
                    best = li;
                    best_ids = std::move(ids);
                }
            } else if (better) {
                best = li;
                best_ids.clear();
            }
        }
        return best;
    }

    std::vector<TxId> id_sequence(int li) const {
        std::vector<TxId> ids;
        for (int cur = li; cur >= 0; cur = pool_[cur].parent) ids.push_back(in_.txs[pool_[cur].txi].id);
        std::reverse(ids.begin(), ids.end());
        return ids;
    }

    Schedule materialize(int li) const {
        Schedule s;
        std::vector<bool> taken(in_.txs.size(), false);
        if (li >= 0) {
            std::vector<int> seq;
            for (int cur = li; cur >= 0; cur = pool_[cur].parent) seq.push_back(pool_[cur].txi);
            std::reverse(seq.begin(), seq.end());
            Micros t = 0;
            for (int txi : seq) {
                const auto& tx = in_.txs[txi];
                const Micros start = std::max(t, tx.gen_time_us);
                s.accepted.push_back({tx.id, start, start + tx.duration_us});
                t = start + tx.duration_us;
                taken[txi] = true;
            }
        }
        for (std::size_t i = 0; i < in_.txs.size(); ++i)
            if (!taken[i]) s.rejected.push_back(in_.txs[i].id);
        std::sort(s.rejected.begin(), s.rejected.end());
        return s;
    }

    static constexpr std::size_t kMaxLabels = 4u << 20;   // absolute label backstop
    static constexpr std::size_t kDefaultFrontier = 1024;  // per-level expansion budget

    const Instance& in_;
    SolveConfig cfg_;
    CostModel model_;
    OrderedTxList order_;
    std::vector<bool> scratch_visited_;
    std::vector<int> scratch_marks_;
    std::vector<Label> pool_;
    // per end-vertex, buckets of comparable paths keyed by the visited set
    // within the eta-window around that vertex
    std::vector<std::unordered_map<std::uint64_t, std::vector<int>>> vertex_paths_;
    std::uint64_t pruned_ = 0;
    bool truncated_ = false;
    bool throttled_ = false;
};

}  // namespace detail

inline TasperResult solve_tasper(const Instance& in, const SolveConfig& cfg) {
    if (cfg.eta < 1) throw std::invalid_argument("eta must be at least 1");
    if (cfg.beta < 0.0 || cfg.beta > 1.0) throw std::invalid_argument("beta must lie in [0,1]");
    require_valid(in);
    if (in.txs.empty()) {
        TasperResult r;
        r.stats.max_slack_observed = 0;
        return r;
    }
    detail::TasperSearch search(in, cfg);
    return search.run();
}

}  // namespace twtsched

#endif
