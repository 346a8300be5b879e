#ifndef TWTSCHED_EXACT_HPP
#define TWTSCHED_EXACT_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "twtsched/energy.hpp"
#include "twtsched/model.hpp"
#include "twtsched/objective.hpp"

// Exact solver for small instances: search over acceptance subsets and
// orderings, with start times optimized per sequence, plus a deliberately
// naive exhaustive enumeration used as an independent cross-check.
//
// Placement matters beyond "as early as possible": delaying a TX can close
// the idle gap to a same-station successor and save energy. For a fixed
// sequence the energy is concave piecewise-linear in the completion times
// over a chain polytope, so an optimal placement sits at a polytope vertex,
// and every vertex lies on a small anchor grid (release- and deadline-
// anchored packed runs). optimal_placement runs a DP over that grid. When
// every TX belongs to a distinct station no gap term exists, earliest
// placement is optimal, and a faster label search handles the instance.

namespace twtsched {

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExactResult {
    Schedule schedule;
    double objective = 0.0;
    bool proven = false;
    std::uint64_t nodes_expanded = 0;
};

struct EnumResult {
    Schedule schedule;
    double objective = 0.0;
    std::uint64_t sequences_visited = 0;
};

namespace detail {

inline std::vector<TxId> ids_of(const Instance& in, const std::vector<int>& seq_idx) {
    std::vector<TxId> ids;
    ids.reserve(seq_idx.size());
    for (int i : seq_idx) ids.push_back(in.txs[i].id);
    return ids;
}

struct Placement {
    double energy_j = 0.0;
    std::vector<Micros> completions;
};

// Energy of a fixed accepted sequence under earliest placement.
inline Placement earliest_placement(const Instance& in, const CostModel& model,
                                    const std::vector<int>& seq) {
    Placement p;
    Micros t = 0;
    StaId prev = CostModel::kNoSta;
    for (int txi : seq) {
        const auto& tx = in.txs[txi];
        const Micros start = std::max(t, tx.gen_time_us);
        p.energy_j += model.cost_j(t, start, tx, prev);
        t = start + tx.duration_us;
        p.completions.push_back(t);
        prev = tx.sta_id;
    }
    return p;
}

// Minimal energy of a fixed accepted sequence over all feasible start
// times. Candidate completions per position combine left-packed chains
// (anchored at releases or time zero) with right-packed chains (anchored
// at a successor's release or a deadline); a concave objective over the
// chain polytope is minimized at one of these vertices.
inline Placement optimal_placement(const Instance& in, const CostModel& model,
                                   const std::vector<int>& seq) {
    const int L = static_cast<int>(seq.size());
    bool coupled = false;
    for (int i = 1; i < L; ++i)
        if (in.txs[seq[i]].sta_id == in.txs[seq[i - 1]].sta_id) coupled = true;
    if (!coupled) return earliest_placement(in, model, seq);

    // earliest and latest feasible completion per position
    std::vector<Micros> earliest(L), latest(L);
    {
        Micros t = 0;
        for (int i = 0; i < L; ++i) {
            const auto& tx = in.txs[seq[i]];
            t = std::max(t, tx.gen_time_us) + tx.duration_us;
            earliest[i] = t;
        }
        Micros lim = in.beacon_interval_us;
        for (int i = L - 1; i >= 0; --i) {
            const auto& tx = in.txs[seq[i]];
            lim = std::min(lim, tx.deadline_us);
            latest[i] = lim;
            lim -= tx.duration_us;
        }
    }

    // candidate grids: left-packed images forward, right-packed pins backward
    std::vector<std::vector<Micros>> cand(L);
    {
        std::set<Micros> fwd{0};
        for (int i = 0; i < L; ++i) {
            const auto& tx = in.txs[seq[i]];
            std::set<Micros> next;
            for (Micros f : fwd) next.insert(std::max(f, tx.gen_time_us) + tx.duration_us);
            fwd = std::move(next);
            cand[i].assign(fwd.begin(), fwd.end());
        }
        std::set<Micros> rgt;
        for (int i = L - 1; i >= 0; --i) {
            const auto& tx = in.txs[seq[i]];
            std::set<Micros> next;
            rgt.insert(tx.deadline_us);
            for (Micros r : rgt) cand[i].push_back(r);
            for (Micros r : rgt) next.insert(r - tx.duration_us);
            next.insert(tx.gen_time_us);  // successor start pinned at this release
            rgt = std::move(next);
        }
        for (int i = 0; i < L; ++i) {
            auto& zs = cand[i];
            std::sort(zs.begin(), zs.end());
            zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
            zs.erase(std::remove_if(zs.begin(), zs.end(),
                                    [&](Micros z) { return z < earliest[i] || z > latest[i]; }),
                     zs.end());
        }
    }

    // DP over (position, candidate completion)
    const double inf = 1e300;
    std::vector<std::vector<double>> cost(L);
    std::vector<std::vector<int>> from(L);
    for (int i = 0; i < L; ++i) {
        cost[i].assign(cand[i].size(), inf);
        from[i].assign(cand[i].size(), -1);
    }
    for (int i = 0; i < L; ++i) {
        const auto& tx = in.txs[seq[i]];
        const StaId prev_sta = i > 0 ? in.txs[seq[i - 1]].sta_id : CostModel::kNoSta;
        for (std::size_t a = 0; a < cand[i].size(); ++a) {
            const Micros z = cand[i][a];
            const Micros start = z - tx.duration_us;
            if (start < tx.gen_time_us) continue;
            if (i == 0) {
                cost[0][a] = model.cost_j(0, start, tx, prev_sta);
                continue;
            }
            for (std::size_t b = 0; b < cand[i - 1].size(); ++b) {
                const Micros zp = cand[i - 1][b];
                if (cost[i - 1][b] >= inf || zp > start) continue;
                const double c = cost[i - 1][b] + model.cost_j(zp, start, tx, prev_sta);
                if (c < cost[i][a]) {
                    cost[i][a] = c;
                    from[i][a] = static_cast<int>(b);
                }
            }
        }
    }

    Placement p;
    int best = -1;
    for (std::size_t a = 0; a < cand[L - 1].size(); ++a)
        if (cost[L - 1][a] < (best < 0 ? inf : cost[L - 1][best]))
            best = static_cast<int>(a);
    p.energy_j = cost[L - 1][best];
    p.completions.assign(L, 0);
    for (int i = L - 1, a = best; i >= 0; a = from[i][a], --i) p.completions[i] = cand[i][a];
    return p;
}

inline Schedule schedule_from_placement(const Instance& in, const std::vector<int>& seq,
                                        const std::vector<Micros>& completions) {
    Schedule s;
    std::vector<bool> taken(in.txs.size(), false);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& tx = in.txs[seq[i]];
        s.accepted.push_back({tx.id, completions[i] - tx.duration_us, completions[i]});
        taken[seq[i]] = true;
    }
    for (std::size_t i = 0; i < in.txs.size(); ++i)
        if (!taken[i]) s.rejected.push_back(in.txs[i].id);
    std::sort(s.rejected.begin(), s.rejected.end());
    return s;
}

// ----------------------------------------------------------------------
// fast path: all TXs on distinct stations, so the energy of a sequence is
// placement-independent and earliest placement is optimal. Label search
// over (accepted set, last TX) with Pareto dominance and an admissible
// bound.

class DistinctStaSearch {
public:
    DistinctStaSearch(const Instance& in, double beta, bool prune)
        : in_(in), beta_(beta), prune_(prune), model_(in) {
        const int n = static_cast<int>(in.txs.size());
        p_hat_.resize(n);
        min_cost_hat_.resize(n);
        const double slot = static_cast<double>(in.slot_us());
        for (int i = 0; i < n; ++i) {
            const auto& tx = in_.txs[i];
            p_hat_[i] = model_.p_hat(tx);
            p_all_ += p_hat_[i];
            const auto& e = model_.sta_energies(tx.sta_id);
            min_cost_hat_[i] =
                model_.ctx().e_hat(static_cast<double>(tx.duration_us) / slot * e.e_tx);
        }
    }

    ExactResult run() {
        ExactResult res;
        best_obj_ = beta_ * p_all_;  // reject everything
        best_seq_.clear();

        arena_.push_back({0, 0.0, 0.0, 0u, -1, -1, true});
        std::deque<int> queue{0};
        while (!queue.empty()) {
            const int ei = queue.front();
            queue.pop_front();
            if (!arena_[ei].alive) continue;
            Entry ent = arena_[ei];
            ++res.nodes_expanded;
            consider(ei, ent);
            expand(ei, ent, queue);
        }

        std::vector<Micros> completions;
        {
            Micros t = 0;
            for (int txi : best_seq_) {
                const auto& tx = in_.txs[txi];
                t = std::max(t, tx.gen_time_us) + tx.duration_us;
                completions.push_back(t);
            }
        }
        res.schedule = schedule_from_placement(in_, best_seq_, completions);
        res.objective = schedule_objective(in_, res.schedule, beta_);
        res.proven = true;
        return res;
    }

private:
    struct Entry {
        Micros t;
        double e_raw;
        double p_acc;
        std::uint32_t mask;
        int last;
        int parent;
        bool alive;
    };

    double objective_of(const Entry& ent) const {
        return beta_ * (p_all_ - ent.p_acc) + (1.0 - beta_) * model_.ctx().e_hat(ent.e_raw);
    }

    void consider(int ei, const Entry& ent) {
        const double obj = objective_of(ent);
        if (obj < best_obj_ - kTieTol) {
            best_obj_ = obj;
            best_seq_ = sequence_of(ei);
        } else if (obj <= best_obj_ + kTieTol) {
            std::vector<int> seq = sequence_of(ei);
            if (ids_of(in_, seq) < ids_of(in_, best_seq_)) {
                best_obj_ = std::min(best_obj_, obj);
                best_seq_ = std::move(seq);
            }
        }
    }

    std::vector<int> sequence_of(int ei) const {
        std::vector<int> seq;
        for (int cur = ei; cur > 0; cur = arena_[cur].parent) seq.push_back(arena_[cur].last);
        std::reverse(seq.begin(), seq.end());
        return seq;
    }

    double lower_bound(const Entry& ent) const {
        double lb = (1.0 - beta_) * model_.ctx().e_hat(ent.e_raw);
        for (std::size_t k = 0; k < in_.txs.size(); ++k) {
            if (ent.mask & (1u << k)) continue;
            const auto& tx = in_.txs[k];
            if (std::max(ent.t, tx.gen_time_us) + tx.duration_us > tx.deadline_us)
                lb += beta_ * p_hat_[k];
            else
                lb += std::min(beta_ * p_hat_[k], (1.0 - beta_) * min_cost_hat_[k]);
        }
        return lb;
    }

    void expand(int ei, const Entry& ent, std::deque<int>& queue) {
        const StaId prev_sta = ent.last < 0 ? CostModel::kNoSta : in_.txs[ent.last].sta_id;
        for (std::size_t k = 0; k < in_.txs.size(); ++k) {
            if (ent.mask & (1u << k)) continue;
            const auto& tx = in_.txs[k];
            const Micros start = std::max(ent.t, tx.gen_time_us);
            const Micros done = start + tx.duration_us;
            if (done > tx.deadline_us || done > in_.beacon_interval_us) continue;

            Entry nxt;
            nxt.t = done;
            nxt.e_raw = ent.e_raw + model_.cost_j(ent.t, start, tx, prev_sta);
            nxt.p_acc = ent.p_acc + p_hat_[k];
            nxt.mask = ent.mask | (1u << k);
            nxt.last = static_cast<int>(k);
            nxt.parent = ei;
            nxt.alive = true;

            if (prune_ && lower_bound(nxt) >= best_obj_ - kTieTol) continue;
            if (!insert_frontier(nxt)) continue;

            arena_.push_back(nxt);
            queue.push_back(static_cast<int>(arena_.size()) - 1);
        }
    }

    // With distinct stations the future cost depends only on the completion
    // time, so plain (time, energy) Pareto dominance is sound.
    bool insert_frontier(const Entry& nxt) {
        if (!prune_) return true;
        const std::uint64_t key =
            (static_cast<std::uint64_t>(nxt.mask) << 5) | static_cast<std::uint64_t>(nxt.last);
        auto& lst = frontier_[key];
        for (int qi : lst) {
            const Entry& q = arena_[qi];
            if (q.alive && q.t <= nxt.t && q.e_raw <= nxt.e_raw) return false;
        }
        for (int qi : lst) {
            Entry& q = arena_[qi];
            if (q.alive && nxt.t <= q.t && nxt.e_raw <= q.e_raw) q.alive = false;
        }
        lst.erase(std::remove_if(lst.begin(), lst.end(),
                                 [&](int qi) { return !arena_[qi].alive; }),
                  lst.end());
        lst.push_back(static_cast<int>(arena_.size()));  // index the caller will use
        return true;
    }

    static constexpr double kTieTol = 1e-12;

    const Instance& in_;
    double beta_;
    bool prune_;
    CostModel model_;
    std::vector<double> p_hat_;
    std::vector<double> min_cost_hat_;
    double p_all_ = 0.0;

    std::vector<Entry> arena_;
    std::unordered_map<std::uint64_t, std::vector<int>> frontier_;
    double best_obj_ = 0.0;
    std::vector<int> best_seq_;
};

// ----------------------------------------------------------------------
// general path: repeated stations couple placement and order, so the
// search walks sequences depth-first and prices promising terminals with
// the exact placement DP. Dominance between partials with the same
// (accepted set, last TX) compares A's earliest-placement energy (an upper
// bound on what A needs) against B's gap-free energy floor, padded by the
// worst idle drain over the completion-time difference.

class CoupledSearch {
public:
    CoupledSearch(const Instance& in, double beta, bool prune)
        : in_(in), beta_(beta), prune_(prune), model_(in) {
        const int n = static_cast<int>(in.txs.size());
        p_hat_.resize(n);
        min_cost_hat_.resize(n);
        const double slot = static_cast<double>(in.slot_us());
        for (int i = 0; i < n; ++i) {
            const auto& tx = in_.txs[i];
            p_hat_[i] = model_.p_hat(tx);
            p_all_ += p_hat_[i];
            const auto& e = model_.sta_energies(tx.sta_id);
            min_cost_hat_[i] =
                model_.ctx().e_hat(static_cast<double>(tx.duration_us) / slot * e.e_tx);
        }
        idle_rate_ = model_.max_idle_rate_per_us();
    }

    ExactResult run() {
        ExactResult res;
        best_obj_ = beta_ * p_all_;
        best_seq_.clear();
        best_completions_.clear();

        std::vector<int> seq;
        dfs(seq, /*t=*/0, /*e_earliest=*/0.0, /*e_floor=*/0.0, /*p_acc=*/0.0, /*mask=*/0,
            res.nodes_expanded);

        res.schedule = schedule_from_placement(in_, best_seq_, best_completions_);
        res.objective = schedule_objective(in_, res.schedule, beta_);
        res.proven = true;
        return res;
    }

private:
    void consider_terminal(const std::vector<int>& seq, double e_floor, double p_acc) {
        // cheap screen before the placement DP
        const double screen =
            beta_ * (p_all_ - p_acc) + (1.0 - beta_) * model_.ctx().e_hat(e_floor);
        if (screen > best_obj_ + kTieTol) return;
        Placement p = optimal_placement(in_, model_, seq);
        const double obj =
            beta_ * (p_all_ - p_acc) + (1.0 - beta_) * model_.ctx().e_hat(p.energy_j);
        if (obj < best_obj_ - kTieTol) {
            best_obj_ = obj;
            best_seq_ = seq;
            best_completions_ = std::move(p.completions);
        } else if (obj <= best_obj_ + kTieTol &&
                   ids_of(in_, seq) < ids_of(in_, best_seq_)) {
            best_obj_ = std::min(best_obj_, obj);
            best_seq_ = seq;
            best_completions_ = std::move(p.completions);
        }
    }

    double lower_bound(Micros t, double e_floor, double /*p_acc*/, std::uint32_t mask) const {
        double lb = (1.0 - beta_) * model_.ctx().e_hat(e_floor);
        for (std::size_t k = 0; k < in_.txs.size(); ++k) {
            if (mask & (1u << k)) continue;
            const auto& tx = in_.txs[k];
            if (std::max(t, tx.gen_time_us) + tx.duration_us > tx.deadline_us)
                lb += beta_ * p_hat_[k];
            else
                lb += std::min(beta_ * p_hat_[k], (1.0 - beta_) * min_cost_hat_[k]);
        }
        return lb;
    }

    // A registered partial dominates a new one when, replaying any
    // continuation of the new one after A's earliest placement, A cannot
    // cost more. The only term that can differ is the junction gap into the
    // continuation's first TX, and it is capped by the transition energy of
    // the shared last station: earliest(A) + E_st(last) <= floor(B).
    bool dominated(std::uint32_t mask, int last, Micros t, double e_earliest, double e_floor) {
        if (!prune_) return false;
        const std::uint64_t key =
            (static_cast<std::uint64_t>(mask) << 5) | static_cast<std::uint64_t>(last);
        const double cap = model_.sta_energies(in_.txs[last].sta_id).e_transition;
        auto& lst = frontier_[key];
        for (const auto& q : lst) {
            if (q.t <= t && q.e_earliest + cap <= e_floor) return true;
        }
        lst.push_back({t, e_earliest, e_floor});
        return false;
    }

    void dfs(std::vector<int>& seq, Micros t, double e_earliest, double e_floor, double p_acc,
             std::uint32_t mask, std::uint64_t& nodes) {
        ++nodes;
        if (!seq.empty()) consider_terminal(seq, e_floor, p_acc);

        const StaId prev_sta = seq.empty() ? CostModel::kNoSta : in_.txs[seq.back()].sta_id;
        for (std::size_t k = 0; k < in_.txs.size(); ++k) {
            if (mask & (1u << k)) continue;
            const auto& tx = in_.txs[k];
            const Micros start = std::max(t, tx.gen_time_us);
            const Micros done = start + tx.duration_us;
            if (done > tx.deadline_us || done > in_.beacon_interval_us) continue;

            const bool same = prev_sta == tx.sta_id;
            const auto& pe = model_.sta_energies(tx.sta_id);
            const double slot = static_cast<double>(pe.slot_us);
            const double fixed = static_cast<double>(tx.duration_us) / slot * pe.e_tx +
                                 (same ? 0.0 : pe.e_transition);
            const double e2_earliest = e_earliest + model_.cost_j(t, start, tx, prev_sta);
            const double e2_floor = e_floor + fixed;  // gap term can reach zero
            const double p2 = p_acc + p_hat_[k];
            const std::uint32_t mask2 = mask | (1u << k);

            if (prune_ && lower_bound(done, e2_floor, p2, mask2) >= best_obj_ - kTieTol)
                continue;
            if (dominated(mask2, static_cast<int>(k), done, e2_earliest, e2_floor)) continue;

            seq.push_back(static_cast<int>(k));
            dfs(seq, done, e2_earliest, e2_floor, p2, mask2, nodes);
            seq.pop_back();
        }
    }

    struct Mark {
        Micros t;
        double e_earliest;
        double e_floor;
    };

    static constexpr double kTieTol = 1e-12;

    const Instance& in_;
    double beta_;
    bool prune_;
    CostModel model_;
    std::vector<double> p_hat_;
    std::vector<double> min_cost_hat_;
    double p_all_ = 0.0;
    double idle_rate_ = 0.0;

    std::unordered_map<std::uint64_t, std::vector<Mark>> frontier_;
    double best_obj_ = 0.0;
    std::vector<int> best_seq_;
    std::vector<Micros> best_completions_;
};

}  // namespace detail

inline ExactResult solve_exact(const Instance& in, double beta, int limit_n = 14,
                               bool enable_pruning = true) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0,1]");
    require_valid(in);
    if (static_cast<int>(in.txs.size()) > limit_n)
        throw CapacityError("instance too large for the exact solver (" +
                            std::to_string(in.txs.size()) + " > " + std::to_string(limit_n) +
                            " txs)");
    if (in.txs.empty()) {
        ExactResult r;
        r.proven = true;
        return r;
    }
    std::set<StaId> stas;
    bool repeated = false;
    for (const auto& tx : in.txs)
        if (!stas.insert(tx.sta_id).second) repeated = true;
    if (repeated) {
        detail::CoupledSearch search(in, beta, enable_pruning);
        return search.run();
    }
    detail::DistinctStaSearch search(in, beta, enable_pruning);
    return search.run();
}

// Exhaustive scoring of every acceptance subset and permutation, each at
// its optimal placement. No pruning beyond feasibility; serves as the
// independent oracle for the solver above.
inline EnumResult enumerate_all(const Instance& in, double beta) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0,1]");
    require_valid(in);
    if (static_cast<int>(in.txs.size()) > 8)
        throw CapacityError("instance too large for exhaustive enumeration");

    EnumResult res;
    if (in.txs.empty()) {
        res.sequences_visited = 1;
        return res;
    }

    CostModel model(in);
    const int n = static_cast<int>(in.txs.size());
    std::vector<double> p_hat(n);
    double p_all = 0.0;
    for (int i = 0; i < n; ++i) {
        p_hat[i] = model.p_hat(in.txs[i]);
        p_all += p_hat[i];
    }

    double best_obj = beta * p_all;
    std::vector<int> best_seq;
    std::vector<Micros> best_completions;
    std::vector<int> seq;
    std::vector<bool> used(n, false);
    std::uint64_t visited = 1;  // the empty sequence

    // every sequence is visited; the placement DP only runs when the
    // sequence's energy floor leaves it a chance against the incumbent
    auto evaluate = [&](double p_acc, double e_floor) {
        const double screen =
            beta * (p_all - p_acc) + (1.0 - beta) * model.ctx().e_hat(e_floor);
        if (screen > best_obj + 1e-12) return;
        detail::Placement p = detail::optimal_placement(in, model, seq);
        const double obj =
            beta * (p_all - p_acc) + (1.0 - beta) * model.ctx().e_hat(p.energy_j);
        if (obj < best_obj - 1e-12) {
            best_obj = obj;
            best_seq = seq;
            best_completions = std::move(p.completions);
        } else if (obj <= best_obj + 1e-12 &&
                   detail::ids_of(in, seq) < detail::ids_of(in, best_seq)) {
            best_obj = std::min(best_obj, obj);
            best_seq = seq;
            best_completions = std::move(p.completions);
        }
    };

    auto dfs = [&](auto&& self, Micros t, double p_acc, double e_floor, StaId prev_sta) -> void {
        for (int k = 0; k < n; ++k) {
            if (used[k]) continue;
            const auto& tx = in.txs[k];
            const Micros start = std::max(t, tx.gen_time_us);
            const Micros done = start + tx.duration_us;
            if (done > tx.deadline_us || done > in.beacon_interval_us) continue;
            ++visited;
            used[k] = true;
            seq.push_back(k);
            const auto& pe = model.sta_energies(tx.sta_id);
            const double fixed =
                static_cast<double>(tx.duration_us) / static_cast<double>(pe.slot_us) * pe.e_tx +
                (prev_sta == tx.sta_id ? 0.0 : pe.e_transition);
            evaluate(p_acc + p_hat[k], e_floor + fixed);
            self(self, done, p_acc + p_hat[k], e_floor + fixed, tx.sta_id);
            seq.pop_back();
            used[k] = false;
        }
    };
    dfs(dfs, 0, 0.0, 0.0, CostModel::kNoSta);

    res.schedule = detail::schedule_from_placement(in, best_seq, best_completions);
    res.objective = schedule_objective(in, res.schedule, beta);
    res.sequences_visited = visited;
    return res;
}

}  // namespace twtsched

#endif
