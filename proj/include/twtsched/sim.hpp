#ifndef TWTSCHED_SIM_HPP
#define TWTSCHED_SIM_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "twtsched/baselines.hpp"
#include "twtsched/energy.hpp"
#include "twtsched/exact.hpp"
#include "twtsched/model.hpp"
#include "twtsched/objective.hpp"
#include "twtsched/rng.hpp"
#include "twtsched/tasper.hpp"

// Evaluation harness: per-station power-state timelines, run metrics for
// single intervals and concatenated multi-beacon scenarios, and the
// mean/confidence-interval aggregation used for reporting.

namespace twtsched {

enum class PowerState { Tx, Rx, Idle, Cca, Sleep, Transition };

inline const char* power_state_name(PowerState s) {
    switch (s) {
        case PowerState::Tx: return "tx";
        case PowerState::Rx: return "rx";
        case PowerState::Idle: return "idle";
        case PowerState::Cca: return "cca";
        case PowerState::Sleep: return "sleep";
        case PowerState::Transition: return "transition";
    }
    return "?";
}

struct Segment {
    PowerState state;
    Micros start_us;
    Micros end_us;
};

// Per-station power-state trace over one horizon. Segments partition
// [0, horizon) exactly. State energies are power * time except for the
// transition state, which is charged as one lump per sleep<->active pair
// (its segments exist for the trace but the pair energy is fixed).
struct StaTimeline {
    StaId sta_id = 0;
    std::vector<Segment> segments;
    double energy_tx = 0.0;
    double energy_rx = 0.0;
    double energy_idle = 0.0;
    double energy_cca = 0.0;
    double energy_sleep = 0.0;
    double energy_transition = 0.0;
    int transition_pairs = 0;
    bool active = false;  // transmitted at least once

    double total_j() const {
        return energy_tx + energy_rx + energy_idle + energy_cca + energy_sleep +
               energy_transition;
    }
};

struct TimelineOptions {
    // Optional receive segment after each TXOP for the acknowledgment;
    // off by default to match the cost model, which ignores ACK energy.
    Micros ack_rx_us = 0;
};

namespace detail {

struct AnnotatedEntry {
    ScheduleEntry entry;
    bool burst_start = true;  // false when continuing an idle-joined burst
};

}  // namespace detail

// Builds the per-station power traces for a feasible schedule. A station
// transmits during its entries; between two of its entries that are
// adjacent in the global order it idles when that is the cheaper branch of
// the energy model, otherwise it sleeps through a transition pair. All
// remaining time is sleep, with transition segments (half a slot per side
// where room allows) flanking each activity burst.
inline std::vector<StaTimeline> power_timeline(const Instance& in, const Schedule& sched,
                                               Micros horizon_us,
                                               const TimelineOptions& opts = {}) {
    auto rep = check_schedule_feasibility(in, sched);
    if (!rep.empty())
        throw std::invalid_argument("infeasible schedule: " + rep.front().str());
    if (horizon_us < in.beacon_interval_us)
        throw std::invalid_argument("horizon shorter than the beacon interval");

    CostModel model(in);
    const Micros half_slot = in.slot_us() / 2;

    // Group entries into bursts following the global order.
    std::map<StaId, std::vector<detail::AnnotatedEntry>> per_sta;
    StaId prev_sta = CostModel::kNoSta;
    Micros prev_end = 0;
    for (const auto& e : sched.accepted) {
        const TransmissionRequest* tx = in.find_tx(e.tx_id);
        detail::AnnotatedEntry ann{e, true};
        if (tx->sta_id == prev_sta) {
            const auto& pe = model.sta_energies(tx->sta_id);
            const double gap_slots = static_cast<double>(e.start_time_us - prev_end) /
                                     static_cast<double>(pe.slot_us);
            if (pe.e_idle * gap_slots <= pe.e_transition) ann.burst_start = false;
        }
        per_sta[tx->sta_id].push_back(ann);
        prev_sta = tx->sta_id;
        prev_end = e.end_time_us;
    }

    std::vector<StaTimeline> out;
    for (const auto& sta : in.stations) {
        StaTimeline tl;
        tl.sta_id = sta.sta_id;
        const PerSlotEnergies pe = per_slot_energies(sta.profile, in.slot_us());
        const double per_us = 1.0 / static_cast<double>(pe.slot_us);

        auto push = [&tl](PowerState st, Micros a, Micros b) {
            if (b > a) tl.segments.push_back({st, a, b});
        };

        auto it = per_sta.find(sta.sta_id);
        if (it == per_sta.end() || it->second.empty()) {
            push(PowerState::Sleep, 0, horizon_us);
        } else {
            const auto& entries = it->second;
            Micros cursor = 0;
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto& e = entries[k].entry;
                if (entries[k].burst_start) {
                    // close to the upcoming burst: sleep, then wake transition
                    const Micros gap = e.start_time_us - cursor;
                    Micros trail = 0;
                    if (k > 0) trail = std::min(half_slot, gap / 2);
                    const Micros lead = std::min(half_slot, gap - trail);
                    push(PowerState::Transition, cursor, cursor + trail);
                    push(PowerState::Sleep, cursor + trail, e.start_time_us - lead);
                    push(PowerState::Transition, e.start_time_us - lead, e.start_time_us);
                    ++tl.transition_pairs;
                } else {
                    Micros idle_from = cursor;
                    if (opts.ack_rx_us > 0) {
                        const Micros rx_end =
                            std::min(cursor + opts.ack_rx_us, e.start_time_us);
                        push(PowerState::Rx, cursor, rx_end);
                        idle_from = rx_end;
                    }
                    push(PowerState::Idle, idle_from, e.start_time_us);
                }
                push(PowerState::Tx, e.start_time_us, e.end_time_us);
                cursor = e.end_time_us;
                if (opts.ack_rx_us > 0 && (k + 1 == entries.size() || entries[k + 1].burst_start)) {
                    const Micros next_start = (k + 1 == entries.size())
                                                  ? horizon_us
                                                  : entries[k + 1].entry.start_time_us;
                    const Micros rx_end = std::min(cursor + opts.ack_rx_us, next_start);
                    push(PowerState::Rx, cursor, rx_end);
                    cursor = rx_end;
                }
            }
            // trailing transition and final sleep
            const Micros trail = std::min(half_slot, horizon_us - cursor);
            push(PowerState::Transition, cursor, cursor + trail);
            push(PowerState::Sleep, cursor + trail, horizon_us);
            tl.active = true;
        }

        for (const auto& seg : tl.segments) {
            const double dur = static_cast<double>(seg.end_us - seg.start_us);
            switch (seg.state) {
                case PowerState::Tx: tl.energy_tx += pe.e_tx * per_us * dur; break;
                case PowerState::Rx: tl.energy_rx += pe.e_rx * per_us * dur; break;
                case PowerState::Idle: tl.energy_idle += pe.e_idle * per_us * dur; break;
                case PowerState::Cca: tl.energy_cca += pe.e_cca * per_us * dur; break;
                case PowerState::Sleep: tl.energy_sleep += pe.e_sleep * per_us * dur; break;
                case PowerState::Transition: break;  // charged per pair below
            }
        }
        tl.energy_transition = static_cast<double>(tl.transition_pairs) * pe.e_transition;
        out.push_back(std::move(tl));
    }
    return out;
}

// Reference energy for a station that never sleeps: transmit during its
// airtime and idle the rest of the horizon.
inline double no_twt_reference_energy(const EnergyProfile& profile, Micros slot_us,
                                      Micros horizon_us, Micros tx_time_us) {
    const PerSlotEnergies pe = per_slot_energies(profile, slot_us);
    const double per_us = 1.0 / static_cast<double>(slot_us);
    return pe.e_tx * per_us * static_cast<double>(tx_time_us) +
           pe.e_idle * per_us * static_cast<double>(horizon_us - tx_time_us);
}

struct RunMetrics {
    int n_txs = 0;
    double accepted_count = 0.0;
    double rejection_cost = 0.0;
    double objective = 0.0;
    double energy_total_j = 0.0;  // summed over active stations
    double energy_per_active_sta_j = 0.0;
    double deadline_miss_pct = 0.0;
    double wall_time_us = 0.0;
};

struct MeanCi {
    double mean = 0.0;
    double ci95_half_width = 0.0;
};

// Sample mean with a normal-approximation 95% confidence interval.
inline MeanCi aggregate(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("need at least two samples for a confidence interval");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n)};
}

struct SolveOutcome {
    Schedule schedule;
    SearchStats stats;
    int deadline_misses = 0;
    bool proven = false;
};

inline SolveOutcome solve_with_strategy(const Instance& in, const StrategyConfig& scfg,
                                        const SolveConfig& cfg, int exact_limit_n = 14) {
    SolveOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    switch (scfg.strategy) {
        case Strategy::Tasper: {
            TasperResult r = solve_tasper(in, cfg);
            out.schedule = std::move(r.schedule);
            out.stats = r.stats;
            break;
        }
        case Strategy::Exact: {
            ExactResult r = solve_exact(in, cfg.beta, exact_limit_n);
            out.schedule = std::move(r.schedule);
            out.proven = r.proven;
            break;
        }
        case Strategy::ShortestFirst: {
            BaselineResult r = solve_shortest_first(in, scfg.seed);
            out.schedule = std::move(r.schedule);
            break;
        }
        case Strategy::Fifo: {
            BaselineResult r = solve_fifo(in, scfg.seed);
            out.schedule = std::move(r.schedule);
            out.deadline_misses = r.deadline_misses;
            break;
        }
        case Strategy::PriorityFirst: {
            BaselineResult r = solve_priority_first(in, scfg.seed);
            out.schedule = std::move(r.schedule);
            break;
        }
        case Strategy::Random: {
            BaselineResult r = solve_random(in, scfg.seed);
            out.schedule = std::move(r.schedule);
            break;
        }
        case Strategy::Hsa: {
            BaselineResult r = solve_hsa(in, scfg.hsa_slot_us);
            out.schedule = std::move(r.schedule);
            break;
        }
    }
    out.stats.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
    out.stats.max_slack_observed = in.txs.empty() ? 0 : observed_slack(in);
    return out;
}

struct RunResult {
    Schedule schedule;
    std::vector<StaTimeline> timelines;
    RunMetrics metrics;
    SolveOutcome outcome;
};

namespace detail {

inline RunMetrics metrics_for(const Instance& in, const SolveOutcome& out,
                              const std::vector<StaTimeline>& timelines, double beta) {
    RunMetrics m;
    m.n_txs = static_cast<int>(in.txs.size());
    m.accepted_count = static_cast<double>(out.schedule.accepted.size());
    m.rejection_cost = rejection_cost(in, out.schedule);
    m.objective = in.txs.empty() ? 0.0 : schedule_objective(in, out.schedule, beta);
    int active = 0;
    for (const auto& tl : timelines) {
        if (!tl.active) continue;
        ++active;
        m.energy_total_j += tl.total_j();
    }
    m.energy_per_active_sta_j = active > 0 ? m.energy_total_j / active : 0.0;
    m.deadline_miss_pct =
        m.n_txs > 0 ? 100.0 * static_cast<double>(out.deadline_misses) / m.n_txs : 0.0;
    m.wall_time_us = static_cast<double>(out.stats.wall_time_us);
    return m;
}

}  // namespace detail

// Solves one interval and derives timelines and metrics. The Random
// strategy is replicated over `random_reps` derived seeds with averaged
// metrics (schedule and timelines are those of the first replicate);
// every other strategy runs once.
inline RunResult run_single(const Instance& in, const StrategyConfig& scfg,
                            const SolveConfig& cfg, int random_reps = 100,
                            const TimelineOptions& opts = {}) {
    require_valid(in);
    const int reps = (scfg.strategy == Strategy::Random) ? std::max(1, random_reps) : 1;
    RunResult res;
    for (int r = 0; r < reps; ++r) {
        StrategyConfig sc = scfg;
        if (reps > 1) sc.seed = derive_seed(scfg.seed, static_cast<std::uint64_t>(r));
        SolveOutcome out = solve_with_strategy(in, sc, cfg);
        auto timelines = power_timeline(in, out.schedule, in.beacon_interval_us, opts);
        RunMetrics m = detail::metrics_for(in, out, timelines, cfg.beta);
        if (r == 0) {
            res.schedule = out.schedule;
            res.timelines = std::move(timelines);
            res.outcome = std::move(out);
            res.metrics = m;
        } else {
            res.metrics.accepted_count += m.accepted_count;
            res.metrics.rejection_cost += m.rejection_cost;
            res.metrics.objective += m.objective;
            res.metrics.energy_total_j += m.energy_total_j;
            res.metrics.energy_per_active_sta_j += m.energy_per_active_sta_j;
            res.metrics.deadline_miss_pct += m.deadline_miss_pct;
            res.metrics.wall_time_us += m.wall_time_us;
        }
    }
    if (reps > 1) {
        const double n = static_cast<double>(reps);
        res.metrics.accepted_count /= n;
        res.metrics.rejection_cost /= n;
        res.metrics.objective /= n;
        res.metrics.energy_total_j /= n;
        res.metrics.energy_per_active_sta_j /= n;
        res.metrics.deadline_miss_pct /= n;
        res.metrics.wall_time_us /= n;
    }
    return res;
}

struct ConcatResult {
    RunMetrics metrics;       // rejection cost and accepted count are per-interval means
    int expired_unscheduled = 0;
    int late_schedules = 0;   // carried TXs placed past their absolute deadline; must stay 0
    std::vector<Schedule> interval_schedules;
};

// Concatenated multi-beacon run. TXs not scheduled in their interval stay
// pending and are offered again in later intervals until their absolute
// deadline can no longer be met, at which point their priority joins the
// rejection cost. Carried TXs keep their priority and duration unchanged.
inline ConcatResult run_concatenated(const std::vector<Instance>& stream,
                                     const StrategyConfig& scfg, const SolveConfig& cfg,
                                     bool carry_over = true) {
    if (stream.empty()) throw std::invalid_argument("need at least one interval");
    const Instance& first = stream.front();
    const Micros t_b = first.beacon_interval_us;

    struct AbsTx {
        TxId id;
        StaId sta_id;
        std::int64_t bytes;
        Micros g_abs, d_abs, dur;
        int priority;
    };

    double p_max = 0.0;
    std::int64_t n_txs_total = 0;
    for (std::size_t k = 0; k < stream.size(); ++k) {
        const Instance& in = stream[k];
        // deadlines may straddle interval boundaries, up to the horizon end
        require_valid(in, static_cast<Micros>(stream.size() - k) * t_b);
        if (in.beacon_interval_us != t_b || in.stations.size() != first.stations.size())
            throw std::invalid_argument("stream intervals must share timing and station roster");
        for (const auto& t : in.txs) p_max = std::max(p_max, static_cast<double>(t.priority));
        n_txs_total += static_cast<std::int64_t>(in.txs.size());
    }
    if (p_max <= 0.0) p_max = 1.0;

    ConcatResult res;
    std::vector<AbsTx> pending;
    TxId next_id = 1;
    double failed_phat = 0.0;
    std::int64_t accepted_total = 0;
    int misses_total = 0;

    std::map<StaId, double> sta_energy;
    std::map<StaId, bool> sta_active;
    for (const auto& s : first.stations) {
        sta_energy[s.sta_id] = 0.0;
        sta_active[s.sta_id] = false;
    }

    const int horizon = static_cast<int>(stream.size());
    for (int k = 0; k < horizon; ++k) {
        const Micros base = static_cast<Micros>(k) * t_b;
        for (const auto& t : stream[k].txs) {
            AbsTx a{next_id++, t.sta_id, t.bytes, t.gen_time_us + base, t.deadline_us + base,
                    t.duration_us, t.priority};
            pending.push_back(a);
        }

        // offer every pending TX that can still complete within this interval
        Instance iv;
        iv.beacon_interval_us = t_b;
        iv.n_slots = first.n_slots;
        iv.stations = first.stations;
        std::vector<const AbsTx*> offered;
        for (const auto& a : pending) {
            const Micros g_rel = std::max<Micros>(0, a.g_abs - base);
            const Micros d_rel = std::min(a.d_abs - base, t_b);
            if (g_rel + a.dur > d_rel) continue;
            TransmissionRequest tx;
            tx.id = a.id;
            tx.sta_id = a.sta_id;
            tx.bytes = a.bytes;
            tx.gen_time_us = g_rel;
            tx.deadline_us = d_rel;
            tx.duration_us = a.dur;
            tx.priority = a.priority;
            iv.txs.push_back(tx);
            offered.push_back(&a);
        }

        StrategyConfig sc = scfg;
        sc.seed = derive_seed(scfg.seed, static_cast<std::uint64_t>(k));
        SolveOutcome out = solve_with_strategy(iv, sc, cfg);
        misses_total += out.deadline_misses;
        accepted_total += static_cast<std::int64_t>(out.schedule.accepted.size());
        res.interval_schedules.push_back(out.schedule);

        auto timelines = power_timeline(iv, out.schedule, t_b);
        for (const auto& tl : timelines) {
            sta_energy[tl.sta_id] += tl.total_j();
            if (tl.active) sta_active[tl.sta_id] = true;
        }

        std::vector<TxId> scheduled_ids;
        for (const auto& e : out.schedule.accepted) {
            scheduled_ids.push_back(e.tx_id);
            for (const AbsTx* a : offered)
                if (a->id == e.tx_id && base + e.end_time_us > a->d_abs) ++res.late_schedules;
        }
        std::sort(scheduled_ids.begin(), scheduled_ids.end());

        // drop scheduled TXs; fail those that can no longer complete
        const Micros next_base = base + t_b;
        std::vector<AbsTx> still;
        for (const auto& a : pending) {
            if (std::binary_search(scheduled_ids.begin(), scheduled_ids.end(), a.id)) continue;
            const bool last_interval = (k + 1 == horizon);
            const bool can_retry =
                carry_over && !last_interval &&
                std::max(a.g_abs, next_base) + a.dur <= a.d_abs;
            if (can_retry) {
                still.push_back(a);
            } else {
                failed_phat += static_cast<double>(a.priority) / p_max;
                ++res.expired_unscheduled;
            }
        }
        pending = std::move(still);
    }

    RunMetrics& m = res.metrics;
    m.n_txs = static_cast<int>(n_txs_total);
    m.accepted_count = static_cast<double>(accepted_total) / horizon;
    m.rejection_cost = failed_phat / horizon;
    int active = 0;
    for (const auto& [id, act] : sta_active) {
        if (!act) continue;
        ++active;
        m.energy_total_j += sta_energy[id];
    }
    m.energy_per_active_sta_j = active > 0 ? m.energy_total_j / active : 0.0;
    m.deadline_miss_pct =
        n_txs_total > 0 ? 100.0 * static_cast<double>(misses_total) / n_txs_total : 0.0;
    return res;
}

}  // namespace twtsched

#endif
