#ifndef TWTSCHED_MODEL_HPP
#define TWTSCHED_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for the TWT transmission acceptance and scheduling
// engine, plus instance validation and schedule feasibility checking.
// All times are integer microseconds; no floating-point time arithmetic.

namespace twtsched {

using Micros = std::int64_t;
using TxId = int;
using StaId = int;

// One uplink transmission request: the station asks for an airtime grant
// of `duration_us` to move `bytes` generated at `gen_time_us`, which must
// be fully received by `deadline_us`.
struct TransmissionRequest {
    TxId id = 0;
    StaId sta_id = 0;
    std::int64_t bytes = 0;
    Micros gen_time_us = 0;
    Micros deadline_us = 0;
    Micros duration_us = 0;
    int priority = 1;

    Micros latest_start_us() const { return deadline_us - duration_us; }
};

// Per-class current draw figures (Table-style: idle, CCA, receive,
// transmit, sleep) from which per-slot energies are derived.
// `transition_idle_slots` sets the sleep<->active transition-pair energy
// as a multiple of one idle slot; the real figure is rarely disclosed by
// vendors, so it stays configurable per class.
struct EnergyProfile {
    int class_id = 1;
    double current_idle_ma = 50.0;
    double current_cca_ma = 50.0;
    double current_rx_ma = 66.0;
    double current_tx_ma = 232.0;
    double current_sleep_ma = 0.12;
    double voltage_v = 3.3;
    double transition_idle_slots = 1.0;
};

struct Station {
    StaId sta_id = 0;
    EnergyProfile profile;
    double link_rate_bps = 8.6e6;
};

// One beacon interval's scheduling problem.
struct Instance {
    Micros beacon_interval_us = 102400;  // T_b
    int n_slots = 100;                   // D
    std::vector<Station> stations;
    std::vector<TransmissionRequest> txs;

    Micros slot_us() const { return beacon_interval_us / n_slots; }

    const Station* find_station(StaId id) const {
        for (const auto& s : stations)
            if (s.sta_id == id) return &s;
        return nullptr;
    }

    const TransmissionRequest* find_tx(TxId id) const {
        for (const auto& t : txs)
            if (t.id == id) return &t;
        return nullptr;
    }
};

struct ScheduleEntry {
    TxId tx_id = 0;
    Micros start_time_us = 0;
    Micros end_time_us = 0;  // z_j = start + duration

    Micros duration_us() const { return end_time_us - start_time_us; }
};

// Solver output: accepted entries ordered by start time plus the set of
// rejected TX ids. Membership encodes the acceptance vector, the entry
// order encodes the sequence, end times encode the completion vector.
struct Schedule {
    std::vector<ScheduleEntry> accepted;
    std::vector<TxId> rejected;
};

struct SolveConfig {
    double beta = 0.9;  // objective weight in [0,1]
    int eta = 9;        // neighborhood size
    std::uint64_t seed = 0;
    // Stop at the first non-dominated extension per vertex instead of
    // growing every one. Off by default: the single-descent variant yields
    // markedly worse schedules and is kept only for comparison.
    bool first_extension_only = false;
    // Per-level expansion budget for the path search; 0 picks the built-in
    // default. Levels whose surviving paths exceed the budget expand only
    // the most promising ones.
    int max_frontier = 0;
};

struct Violation {
    std::string subject;  // "tx 3", "station 2", "instance"
    std::string message;

    std::string str() const { return subject + ": " + message; }
};

using ValidationReport = std::vector<Violation>;

// ---------------------------------------------------------------------
// validate_instance
//
// horizon_us > 0 allows deadlines past the beacon interval (concatenated
// multi-beacon form); otherwise deadlines must fit the single interval.

inline ValidationReport validate_instance(const Instance& in, Micros horizon_us = 0) {
    ValidationReport rep;
    auto flag = [&rep](std::string subject, std::string msg) {
        rep.push_back({std::move(subject), std::move(msg)});
    };

    if (in.beacon_interval_us <= 0)
        flag("instance", "beacon interval must be positive");
    if (in.n_slots <= 0)
        flag("instance", "slot count must be positive");
    else if (in.beacon_interval_us % in.n_slots != 0)
        flag("instance", "slot duration times slot count must equal the beacon interval");

    std::set<StaId> sta_ids;
    for (const auto& s : in.stations) {
        if (!sta_ids.insert(s.sta_id).second)
            flag("station " + std::to_string(s.sta_id), "duplicate station id");
        if (s.link_rate_bps <= 0)
            flag("station " + std::to_string(s.sta_id), "link rate must be positive");
        if (s.profile.voltage_v <= 0)
            flag("station " + std::to_string(s.sta_id), "voltage must be positive");
        if (s.profile.current_tx_ma < 0 || s.profile.current_idle_ma < 0 ||
            s.profile.current_rx_ma < 0 || s.profile.current_cca_ma < 0 ||
            s.profile.current_sleep_ma < 0)
            flag("station " + std::to_string(s.sta_id), "currents must be nonnegative");
        if (s.profile.transition_idle_slots < 0)
            flag("station " + std::to_string(s.sta_id), "transition cost must be nonnegative");
    }

    std::set<TxId> tx_ids;
    for (const auto& t : in.txs) {
        const std::string who = "tx " + std::to_string(t.id);
        if (!tx_ids.insert(t.id).second) flag(who, "duplicate tx id");
        if (sta_ids.find(t.sta_id) == sta_ids.end()) flag(who, "unknown station");
        if (t.duration_us <= 0) flag(who, "duration must be positive");
        if (t.priority < 1) flag(who, "priority must be at least 1");
        if (t.gen_time_us < 0) flag(who, "generation time must be nonnegative");
        if (t.bytes < 0) flag(who, "byte count must be nonnegative");
        if (t.gen_time_us + t.duration_us > t.deadline_us)
            flag(who, "gen+dur > deadline");
        const Micros horizon = horizon_us > 0 ? horizon_us : in.beacon_interval_us;
        if (t.deadline_us > horizon)
            flag(who, horizon_us > 0 ? "deadline past horizon" : "deadline past beacon interval");
    }
    return rep;
}

inline void require_valid(const Instance& in, Micros horizon_us = 0) {
    auto rep = validate_instance(in, horizon_us);
    if (!rep.empty()) throw std::invalid_argument("invalid instance: " + rep.front().str());
}

// ---------------------------------------------------------------------
// check_schedule_feasibility
//
// Intervals are half-open [start, end): back-to-back entries sharing a
// boundary do not overlap.

inline ValidationReport check_schedule_feasibility(const Instance& in, const Schedule& sched) {
    ValidationReport rep;
    auto flag = [&rep](std::string subject, std::string msg) {
        rep.push_back({std::move(subject), std::move(msg)});
    };

    std::set<TxId> seen;
    Micros prev_end = 0;
    bool first = true;
    for (const auto& e : sched.accepted) {
        const std::string who = "tx " + std::to_string(e.tx_id);
        const TransmissionRequest* tx = in.find_tx(e.tx_id);
        if (!tx) {
            flag(who, "accepted entry for unknown tx");
            continue;
        }
        if (!seen.insert(e.tx_id).second) flag(who, "tx accepted more than once");
        if (e.end_time_us != e.start_time_us + tx->duration_us)
            flag(who, "end time differs from start + duration");
        if (e.start_time_us < tx->gen_time_us) flag(who, "starts before generation time");
        if (e.end_time_us > tx->deadline_us) flag(who, "deadline exceeded");
        if (e.end_time_us > in.beacon_interval_us) flag(who, "runs past beacon interval");
        if (!first && e.start_time_us < prev_end) flag(who, "overlap");
        prev_end = e.end_time_us;
        first = false;
    }

    for (TxId r : sched.rejected) {
        if (!in.find_tx(r))
            flag("tx " + std::to_string(r), "rejected entry for unknown tx");
        if (seen.count(r))
            flag("tx " + std::to_string(r), "tx both accepted and rejected");
    }
    std::set<TxId> covered(seen);
    covered.insert(sched.rejected.begin(), sched.rejected.end());
    for (const auto& t : in.txs)
        if (!covered.count(t.id))
            flag("tx " + std::to_string(t.id), "tx neither accepted nor rejected");
    return rep;
}

inline bool is_feasible(const Instance& in, const Schedule& sched) {
    return check_schedule_feasibility(in, sched).empty();
}

}  // namespace twtsched

#endif
