#ifndef TWTSCHED_GEN_HPP
#define TWTSCHED_GEN_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "twtsched/model.hpp"
#include "twtsched/rng.hpp"

// Instance generation: OAS-style release/deadline sampling on top of a
// frame-size distribution and an MCS table, plus the fixed 10-station
// testbed instance used for behavioral checks.

namespace twtsched {

// Typical peak current draws (mA) for the four station classes.
inline EnergyProfile default_energy_profile(int class_id, double voltage_v = 3.3) {
    EnergyProfile p;
    p.class_id = class_id;
    p.voltage_v = voltage_v;
    switch (class_id) {
        case 1:
            p.current_idle_ma = 50;
            p.current_cca_ma = 50;
            p.current_rx_ma = 66;
            p.current_tx_ma = 232;
            p.current_sleep_ma = 0.12;
            break;
        case 2:
            p.current_idle_ma = 40;
            p.current_cca_ma = 40;
            p.current_rx_ma = 40;
            p.current_tx_ma = 140;
            p.current_sleep_ma = 0.004;
            break;
        case 3:
            p.current_idle_ma = 358;
            p.current_cca_ma = 358;
            p.current_rx_ma = 472;
            p.current_tx_ma = 573;
            p.current_sleep_ma = 12;
            break;
        case 4:
            p.current_idle_ma = 294;
            p.current_cca_ma = 294;
            p.current_rx_ma = 388.4;
            p.current_tx_ma = 555.29;
            p.current_sleep_ma = 11.63;
            break;
        default:
            throw std::invalid_argument("unknown station class " + std::to_string(class_id));
    }
    return p;
}

struct McsEntry {
    int mcs_index;
    double phy_rate_bps;
};

// Rates must be strictly increasing with the index.
using McsTable = std::vector<McsEntry>;

// 20 MHz, single spatial stream, 800 ns guard interval.
inline McsTable default_mcs_table() {
    return {
        {0, 8.6e6},   {1, 17.2e6},  {2, 25.8e6}, {3, 34.4e6},  {4, 51.6e6},  {5, 68.8e6},
        {6, 77.4e6},  {7, 86.0e6},  {8, 103.2e6}, {9, 114.7e6}, {10, 129.0e6}, {11, 143.4e6},
    };
}

enum class FrameSizeDist { LogUniform, Uniform };

struct GenParams {
    int n_stas = 16;
    double tau_factor = 0.2;  // release times uniform over [0, tau*T_b]
    double r_factor = 0.3;    // deadline slack uniform over [0, R*T_b]
    FrameSizeDist frame_size_dist = FrameSizeDist::LogUniform;
    std::int64_t bytes_min = 1600;
    std::int64_t bytes_max = 64500;
    int priority_min = 1;
    int priority_max = 10;
    std::vector<double> class_mix = {0.25, 0.25, 0.25, 0.25};  // classes 1..4
    // Replaces the built-in class table when nonempty; class_mix indexes it.
    std::vector<EnergyProfile> class_table;
    std::uint64_t seed = 0;
    Micros beacon_interval_us = 102400;
    int n_slots = 100;
    double voltage_v = 3.3;
    McsTable mcs_table = default_mcs_table();
    // Deadline cap; 0 means the beacon interval (single-interval form). A
    // larger cap lets deadlines straddle interval boundaries so that
    // concatenated runs have genuine carry-over.
    Micros deadline_cap_us = 0;
    // Release-time span; 0 means tau_factor * T_b (single-interval form).
    // Concatenated streams spread arrivals across the whole interval so
    // that late windows naturally run into the next one.
    Micros release_span_us = 0;
};

struct McsChoice {
    int mcs_index;
    double phy_rate_bps;
    Micros duration_us;
};

// Picks the MCS whose frame transmission time best approximates the
// requested duration; ties go to the lower MCS. Returns the realized
// duration at that rate.
inline McsChoice mcs_for_txop(std::int64_t bytes, Micros target_duration_us,
                              const McsTable& table) {
    if (bytes <= 0) throw std::invalid_argument("byte count must be positive");
    if (table.empty()) throw std::invalid_argument("mcs table is empty");
    McsChoice best{-1, 0.0, 0};
    double best_err = 0.0;
    for (const auto& entry : table) {
        const double dur = static_cast<double>(bytes) * 8e6 / entry.phy_rate_bps;
        const double err = std::abs(dur - static_cast<double>(target_duration_us));
        if (best.mcs_index < 0 || err < best_err) {
            best = {entry.mcs_index, entry.phy_rate_bps,
                    std::max<Micros>(1, std::llround(dur))};
            best_err = err;
        }
    }
    return best;
}

// Splits a payload into MTU-sized frames of 2304 bytes plus a smaller
// final frame.
inline std::vector<std::int64_t> fragment(std::int64_t bytes) {
    if (bytes < 1) throw std::invalid_argument("byte count must be positive");
    constexpr std::int64_t kMtu = 2304;
    std::vector<std::int64_t> frames;
    while (bytes > kMtu) {
        frames.push_back(kMtu);
        bytes -= kMtu;
    }
    frames.push_back(bytes);
    return frames;
}

namespace detail {

inline std::int64_t sample_bytes(const GenParams& gp, Rng& rng) {
    switch (gp.frame_size_dist) {
        case FrameSizeDist::Uniform:
            return rng.uniform_int(gp.bytes_min, gp.bytes_max);
        case FrameSizeDist::LogUniform: {
            const double lo = std::log(static_cast<double>(gp.bytes_min));
            const double hi = std::log(static_cast<double>(gp.bytes_max));
            const double v = std::exp(rng.uniform_real(lo, hi));
            const std::int64_t b = static_cast<std::int64_t>(std::llround(v));
            return std::clamp(b, gp.bytes_min, gp.bytes_max);
        }
    }
    throw std::logic_error("unreachable");
}

inline int sample_class(const GenParams& gp, Rng& rng) {
    double total = 0.0;
    for (double w : gp.class_mix) total += w;
    if (total <= 0.0) throw std::invalid_argument("class mix weights must sum to a positive value");
    double pick = rng.uniform() * total;
    for (std::size_t i = 0; i < gp.class_mix.size(); ++i) {
        pick -= gp.class_mix[i];
        if (pick < 0.0) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(gp.class_mix.size());
}

}  // namespace detail

// One TX per station. The requested TXOP duration is drawn uniformly over
// the durations achievable for the sampled payload, the MCS is matched to
// it, and the realized duration tau = bytes*8/rate defines the TX. Release
// times are uniform over [0, tau_factor*T_b] and deadlines add a slack
// uniform over [0, r_factor*T_b], capped at the interval end.
inline Instance generate_instance(const GenParams& gp) {
    if (gp.n_stas < 1) throw std::invalid_argument("need at least one station");
    if (gp.tau_factor <= 0.0 || gp.tau_factor >= 1.0 || gp.r_factor <= 0.0 || gp.r_factor >= 1.0)
        throw std::invalid_argument("generation factors must lie in (0,1)");
    if (gp.priority_min < 1 || gp.priority_max < gp.priority_min)
        throw std::invalid_argument("bad priority range");
    if (gp.mcs_table.empty()) throw std::invalid_argument("mcs table is empty");

    Instance in;
    in.beacon_interval_us = gp.beacon_interval_us;
    in.n_slots = gp.n_slots;

    Rng rng(gp.seed);
    const double rate_min = gp.mcs_table.front().phy_rate_bps;
    const double rate_max = gp.mcs_table.back().phy_rate_bps;

    for (int m = 1; m <= gp.n_stas; ++m) {
        const std::int64_t bytes = detail::sample_bytes(gp, rng);
        const double dur_lo = static_cast<double>(bytes) * 8e6 / rate_max;
        const double dur_hi = static_cast<double>(bytes) * 8e6 / rate_min;
        const Micros target = std::llround(rng.uniform_real(dur_lo, dur_hi));
        const McsChoice mcs = mcs_for_txop(bytes, target, gp.mcs_table);
        if (mcs.duration_us > gp.beacon_interval_us)
            throw std::invalid_argument("generated duration exceeds the beacon interval");
        const Micros cap =
            gp.deadline_cap_us > 0 ? gp.deadline_cap_us : gp.beacon_interval_us;

        const Micros span =
            gp.release_span_us > 0
                ? gp.release_span_us
                : std::llround(gp.tau_factor * static_cast<double>(gp.beacon_interval_us));
        Micros g = rng.uniform_int(0, span);
        g = std::min(g, cap - mcs.duration_us);
        const Micros slack = rng.uniform_int(
            0, std::llround(gp.r_factor * static_cast<double>(gp.beacon_interval_us)));
        const Micros d = std::min(g + mcs.duration_us + slack, cap);
        const int prio = static_cast<int>(rng.uniform_int(gp.priority_min, gp.priority_max));
        const int cls = detail::sample_class(gp, rng);

        Station sta;
        sta.sta_id = m;
        sta.profile = gp.class_table.empty() ? default_energy_profile(cls, gp.voltage_v)
                                             : gp.class_table.at(cls - 1);
        sta.link_rate_bps = mcs.phy_rate_bps;
        in.stations.push_back(sta);

        TransmissionRequest tx;
        tx.id = m;
        tx.sta_id = m;
        tx.bytes = bytes;
        tx.gen_time_us = g;
        tx.deadline_us = d;
        tx.duration_us = mcs.duration_us;
        tx.priority = prio;
        in.txs.push_back(tx);
    }
    return in;
}

// The 10-station validation instance: eight short TXs with relaxed
// deadlines plus two long ones, one deadline-tight (station 2) and one
// relaxed (station 5). Priorities follow p = 10 - m, clamped to 1 so they
// stay positive. Exact window values are a reconstruction; the behavioral
// contract is that the path search accepts all ten TXs while
// shortest-first cannot fit station 2.
inline Instance testbed_instance() {
    Instance in;
    in.beacon_interval_us = 102400;
    in.n_slots = 100;

    constexpr Micros kShort = 6000;
    constexpr Micros kLong = 20000;
    for (int m = 1; m <= 10; ++m) {
        Station sta;
        sta.sta_id = m;
        sta.profile = default_energy_profile(1);
        sta.link_rate_bps = 8.6e6;
        in.stations.push_back(sta);

        TransmissionRequest tx;
        tx.id = m;
        tx.sta_id = m;
        tx.gen_time_us = 0;
        tx.priority = std::max(1, 10 - m);
        if (m == 2) {
            tx.duration_us = kLong;
            tx.deadline_us = 28000;
        } else if (m == 5) {
            tx.duration_us = kLong;
            tx.deadline_us = 95000;
        } else {
            tx.duration_us = kShort;
            tx.deadline_us = in.beacon_interval_us;
        }
        // 1272-byte frames at two frames per 5 ms of TXOP
        const std::int64_t frames =
            std::max<std::int64_t>(1, std::llround(0.4 * static_cast<double>(tx.duration_us) / 1000.0));
        tx.bytes = frames * 1272;
        in.txs.push_back(tx);
    }
    return in;
}

}  // namespace twtsched

#endif
