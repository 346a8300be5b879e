#ifndef TWTSCHED_ENERGY_HPP
#define TWTSCHED_ENERGY_HPP

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "twtsched/model.hpp"

// Per-state energy figures, the scheduling-order-dependent energy cost of
// running one transmission right after another, and normalization of
// priorities and energies into [0,1].

namespace twtsched {

// Energies per scheduling slot (joules), derived from an EnergyProfile.
// e_transition is charged once per sleep<->active transition pair.
struct PerSlotEnergies {
    Micros slot_us = 1024;
    double e_tx = 0.0;
    double e_idle = 0.0;
    double e_sleep = 0.0;
    double e_rx = 0.0;
    double e_cca = 0.0;
    double e_transition = 0.0;
};

inline PerSlotEnergies per_slot_energies(const EnergyProfile& p, Micros slot_us) {
    if (slot_us <= 0) throw std::invalid_argument("slot duration must be positive");
    const double secs = static_cast<double>(slot_us) * 1e-6;
    auto joules = [&](double ma) { return ma * 1e-3 * p.voltage_v * secs; };
    PerSlotEnergies e;
    e.slot_us = slot_us;
    e.e_tx = joules(p.current_tx_ma);
    e.e_idle = joules(p.current_idle_ma);
    e.e_sleep = joules(p.current_sleep_ma);
    e.e_rx = joules(p.current_rx_ma);
    e.e_cca = joules(p.current_cca_ma);
    e.e_transition = e.e_idle * p.transition_idle_slots;
    return e;
}

// Energy cost of a transmission placed at entry.start right after a
// predecessor finishing at prev_end:
//
//   e = tau*E_tx + (1-s)*E_st + s*min(E_idle*gap, E_st)
//
// with tau and the idle gap measured in (fractional) slots and s = 1 when
// predecessor and successor belong to the same station. A station kept on
// the air back to back pays nothing extra; one with a gap either idles or
// cycles through sleep, whichever is cheaper.
inline double energy_cost(Micros prev_end_us, const ScheduleEntry& entry, bool same_sta,
                          const PerSlotEnergies& e) {
    if (entry.start_time_us < prev_end_us)
        throw std::invalid_argument("negative gap: entry starts before predecessor ends");
    const double slots = static_cast<double>(e.slot_us);
    const double tau = static_cast<double>(entry.duration_us()) / slots;
    const double gap = static_cast<double>(entry.start_time_us - prev_end_us) / slots;
    double cost = tau * e.e_tx;
    if (same_sta)
        cost += std::min(e.e_idle * gap, e.e_transition);
    else
        cost += e.e_transition;
    return cost;
}

// Normalization constants for one instance. p_max is the largest priority;
// e_max the largest per-TX energy upper bound E_st + tau*E_tx, so that
// every reachable energy cost divides into [0,1].
struct NormalizationContext {
    double p_max = 1.0;
    double e_max = 1.0;

    double p_hat(int priority) const { return static_cast<double>(priority) / p_max; }
    double e_hat(double energy_j) const { return energy_j / e_max; }
};

inline NormalizationContext normalize(const Instance& in) {
    if (in.txs.empty()) throw std::invalid_argument("cannot normalize an empty instance");
    NormalizationContext ctx;
    ctx.p_max = 0.0;
    ctx.e_max = 0.0;
    const double slots = static_cast<double>(in.slot_us());
    for (const auto& t : in.txs) {
        ctx.p_max = std::max(ctx.p_max, static_cast<double>(t.priority));
        const Station* sta = in.find_station(t.sta_id);
        if (!sta) throw std::invalid_argument("tx references unknown station");
        PerSlotEnergies e = per_slot_energies(sta->profile, in.slot_us());
        const double tau = static_cast<double>(t.duration_us) / slots;
        ctx.e_max = std::max(ctx.e_max, e.e_transition + tau * e.e_tx);
    }
    if (ctx.p_max <= 0) throw std::invalid_argument("priorities must be positive");
    if (ctx.e_max <= 0) throw std::invalid_argument("energy bound must be positive");
    return ctx;
}

// Precomputed per-instance lookup used by every solver: per-station slot
// energies, per-tx normalized priorities, and the raw/normalized cost of
// placing a tx after a given predecessor.
class CostModel {
public:
    explicit CostModel(const Instance& in) : instance_(&in) {
        ctx_ = in.txs.empty() ? NormalizationContext{} : normalize(in);
        for (const auto& s : in.stations)
            energies_.emplace(s.sta_id, per_slot_energies(s.profile, in.slot_us()));
    }

    const Instance& instance() const { return *instance_; }
    const NormalizationContext& ctx() const { return ctx_; }

    const PerSlotEnergies& sta_energies(StaId id) const {
        auto it = energies_.find(id);
        if (it == energies_.end()) throw std::invalid_argument("unknown station");
        return it->second;
    }

    double p_hat(const TransmissionRequest& tx) const { return ctx_.p_hat(tx.priority); }

    // Raw joules for tx placed at start_us after a predecessor of station
    // prev_sta (kNoSta for the virtual sequence head) finishing at prev_end.
    double cost_j(Micros prev_end_us, Micros start_us, const TransmissionRequest& tx,
                  StaId prev_sta) const {
        ScheduleEntry e{tx.id, start_us, start_us + tx.duration_us};
        return energy_cost(prev_end_us, e, prev_sta == tx.sta_id, sta_energies(tx.sta_id));
    }

    double cost_hat(Micros prev_end_us, Micros start_us, const TransmissionRequest& tx,
                    StaId prev_sta) const {
        return ctx_.e_hat(cost_j(prev_end_us, start_us, tx, prev_sta));
    }

    // Largest idle drain over all stations, in joules per microsecond.
    // Bounds how much more a schedule completing earlier can later pay in
    // same-station idle gaps; used by the exact solver's dominance rule.
    double max_idle_rate_per_us() const {
        double r = 0.0;
        for (const auto& [id, e] : energies_)
            r = std::max(r, e.e_idle / static_cast<double>(e.slot_us));
        return r;
    }

    static constexpr StaId kNoSta = -1;

private:
    const Instance* instance_;
    NormalizationContext ctx_;
    std::unordered_map<StaId, PerSlotEnergies> energies_;
};

}  // namespace twtsched

#endif
