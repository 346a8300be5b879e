#ifndef TWTSCHED_TESTS_SUPPORT_HPP
#define TWTSCHED_TESTS_SUPPORT_HPP

#include <algorithm>
#include <vector>

#include "twtsched/gen.hpp"
#include "twtsched/model.hpp"
#include "twtsched/rng.hpp"

// Shared test helpers: quick instance builders for fuzzing that are
// independent of the production generator.

namespace twtsched::test {

struct RandomInstanceOptions {
    bool multi_tx_per_sta = false;  // several TXs per station to exercise same-station gaps
    Micros beacon_us = 102400;
    int n_slots = 100;
    Micros dur_min = 200;
    Micros dur_max = 15000;
};

inline Instance make_random_instance(Rng& rng, int n_txs,
                                     const RandomInstanceOptions& opt = {}) {
    Instance in;
    in.beacon_interval_us = opt.beacon_us;
    in.n_slots = opt.n_slots;
    const int n_stas = opt.multi_tx_per_sta ? std::max(1, (n_txs + 1) / 2) : std::max(1, n_txs);
    for (int m = 1; m <= n_stas; ++m) {
        Station sta;
        sta.sta_id = m;
        sta.profile = default_energy_profile(1 + (m - 1) % 4);
        sta.link_rate_bps = 8.6e6;
        in.stations.push_back(sta);
    }
    for (int j = 1; j <= n_txs; ++j) {
        TransmissionRequest tx;
        tx.id = j;
        tx.sta_id = opt.multi_tx_per_sta ? static_cast<int>(rng.uniform_int(1, n_stas)) : j;
        tx.duration_us = rng.uniform_int(opt.dur_min, opt.dur_max);
        tx.gen_time_us = rng.uniform_int(0, opt.beacon_us * 3 / 10);
        if (tx.gen_time_us + tx.duration_us > opt.beacon_us)
            tx.gen_time_us = opt.beacon_us - tx.duration_us;
        const Micros slack = rng.uniform_int(0, opt.beacon_us * 4 / 10);
        tx.deadline_us = std::min(tx.gen_time_us + tx.duration_us + slack, opt.beacon_us);
        tx.priority = static_cast<int>(rng.uniform_int(1, 10));
        tx.bytes = tx.duration_us;  // not load-bearing for solving
        in.txs.push_back(tx);
    }
    return in;
}

// A two-station instance with explicit TX windows, for hand-built cases.
inline Instance make_instance(std::vector<TransmissionRequest> txs, int n_stas,
                              Micros beacon_us = 102400, int n_slots = 100) {
    Instance in;
    in.beacon_interval_us = beacon_us;
    in.n_slots = n_slots;
    for (int m = 1; m <= n_stas; ++m) {
        Station sta;
        sta.sta_id = m;
        sta.profile = default_energy_profile(1);
        sta.link_rate_bps = 8.6e6;
        in.stations.push_back(sta);
    }
    in.txs = std::move(txs);
    return in;
}

inline TransmissionRequest tx(TxId id, StaId sta, Micros g, Micros dur, Micros d, int prio) {
    TransmissionRequest t;
    t.id = id;
    t.sta_id = sta;
    t.gen_time_us = g;
    t.duration_us = dur;
    t.deadline_us = d;
    t.priority = prio;
    t.bytes = dur;
    return t;
}

}  // namespace twtsched::test

#endif
