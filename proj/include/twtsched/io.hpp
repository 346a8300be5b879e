#ifndef TWTSCHED_IO_HPP
#define TWTSCHED_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twtsched/baselines.hpp"
#include "twtsched/model.hpp"
#include "twtsched/sim.hpp"
#include "twtsched/tasper.hpp"

// File formats: versioned instance and schedule JSON, the energy class
// table, and the benchmark CSV. Floats are written with nine significant
// digits so reruns produce byte-identical files.

namespace twtsched {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------
// logging

inline int log_level() {
    static const int level = [] {
        const char* env = std::getenv("TWT_SCHED_LOG");
        if (!env) return 1;
        const std::string v(env);
        if (v == "error") return 0;
        if (v == "warn") return 1;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 1;
    }();
    return level;
}

inline void log_msg(int level, const std::string& tag, const std::string& msg) {
    if (level <= log_level()) std::fprintf(stderr, "[%s] %s\n", tag.c_str(), msg.c_str());
}
inline void log_info(const std::string& msg) { log_msg(2, "info", msg); }
inline void log_debug(const std::string& msg) { log_msg(3, "debug", msg); }

// ---------------------------------------------------------------------
// strategy names (the CLI vocabulary)

inline std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Tasper: return "tasper";
        case Strategy::Exact: return "exact";
        case Strategy::ShortestFirst: return "sf";
        case Strategy::Fifo: return "fifo";
        case Strategy::PriorityFirst: return "pf";
        case Strategy::Random: return "random";
        case Strategy::Hsa: return "hsa";
    }
    return "?";
}

inline Strategy strategy_from_name(const std::string& name) {
    if (name == "tasper") return Strategy::Tasper;
    if (name == "exact") return Strategy::Exact;
    if (name == "sf") return Strategy::ShortestFirst;
    if (name == "fifo") return Strategy::Fifo;
    if (name == "pf") return Strategy::PriorityFirst;
    if (name == "random") return Strategy::Random;
    if (name == "hsa") return Strategy::Hsa;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

// ---------------------------------------------------------------------
// energy profiles

inline json energy_profile_to_json(const EnergyProfile& p) {
    return json{{"class_id", p.class_id},
                {"idle_ma", p.current_idle_ma},
                {"cca_ma", p.current_cca_ma},
                {"rx_ma", p.current_rx_ma},
                {"tx_ma", p.current_tx_ma},
                {"sleep_ma", p.current_sleep_ma},
                {"voltage_v", p.voltage_v},
                {"transition_idle_slots", p.transition_idle_slots}};
}

inline EnergyProfile energy_profile_from_json(const json& j) {
    EnergyProfile p;
    p.class_id = j.at("class_id").get<int>();
    p.current_idle_ma = j.at("idle_ma").get<double>();
    p.current_cca_ma = j.at("cca_ma").get<double>();
    p.current_rx_ma = j.at("rx_ma").get<double>();
    p.current_tx_ma = j.at("tx_ma").get<double>();
    p.current_sleep_ma = j.at("sleep_ma").get<double>();
    p.voltage_v = j.value("voltage_v", 3.3);
    p.transition_idle_slots = j.value("transition_idle_slots", 1.0);
    return p;
}

// Class table: {"classes": [profile, ...]}
inline std::vector<EnergyProfile> energy_classes_from_json(const json& j) {
    std::vector<EnergyProfile> out;
    for (const auto& e : j.at("classes")) out.push_back(energy_profile_from_json(e));
    if (out.empty()) throw std::invalid_argument("energy class table is empty");
    return out;
}

// ---------------------------------------------------------------------
// instance JSON (schema_version 1)

inline json instance_to_json(const Instance& in) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["beacon_interval_us"] = in.beacon_interval_us;
    j["n_slots"] = in.n_slots;
    j["stations"] = json::array();
    for (const auto& s : in.stations) {
        j["stations"].push_back(json{{"sta_id", s.sta_id},
                                     {"link_rate_bps", s.link_rate_bps},
                                     {"energy", energy_profile_to_json(s.profile)}});
    }
    j["txs"] = json::array();
    for (const auto& t : in.txs) {
        j["txs"].push_back(json{{"id", t.id},
                                {"sta_id", t.sta_id},
                                {"bytes", t.bytes},
                                {"gen_time_us", t.gen_time_us},
                                {"deadline_us", t.deadline_us},
                                {"duration_us", t.duration_us},
                                {"priority", t.priority}});
    }
    return j;
}

inline Instance instance_from_json(const json& j) {
    if (j.value("schema_version", -1) != kSchemaVersion)
        throw std::invalid_argument("unsupported instance schema version");
    Instance in;
    in.beacon_interval_us = j.at("beacon_interval_us").get<Micros>();
    in.n_slots = j.at("n_slots").get<int>();
    for (const auto& s : j.at("stations")) {
        Station sta;
        sta.sta_id = s.at("sta_id").get<StaId>();
        sta.link_rate_bps = s.at("link_rate_bps").get<double>();
        sta.profile = energy_profile_from_json(s.at("energy"));
        in.stations.push_back(sta);
    }
    for (const auto& t : j.at("txs")) {
        TransmissionRequest tx;
        tx.id = t.at("id").get<TxId>();
        tx.sta_id = t.at("sta_id").get<StaId>();
        tx.bytes = t.value("bytes", std::int64_t{0});
        tx.gen_time_us = t.at("gen_time_us").get<Micros>();
        tx.deadline_us = t.at("deadline_us").get<Micros>();
        tx.duration_us = t.at("duration_us").get<Micros>();
        tx.priority = t.at("priority").get<int>();
        in.txs.push_back(tx);
    }
    return in;
}

// ---------------------------------------------------------------------
// schedule + stats JSON

inline json schedule_to_json(const Schedule& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["accepted"] = json::array();
    for (const auto& e : s.accepted)
        j["accepted"].push_back(json{{"tx_id", e.tx_id},
                                     {"start_time_us", e.start_time_us},
                                     {"end_time_us", e.end_time_us}});
    j["rejected"] = s.rejected;
    return j;
}

inline Schedule schedule_from_json(const json& j) {
    if (j.value("schema_version", -1) != kSchemaVersion)
        throw std::invalid_argument("unsupported schedule schema version");
    Schedule s;
    for (const auto& e : j.at("accepted"))
        s.accepted.push_back({e.at("tx_id").get<TxId>(), e.at("start_time_us").get<Micros>(),
                              e.at("end_time_us").get<Micros>()});
    s.rejected = j.at("rejected").get<std::vector<TxId>>();
    return s;
}

inline json stats_to_json(const SearchStats& st) {
    return json{{"paths_created", st.paths_created},
                {"paths_pruned", st.paths_pruned},
                {"max_slack_observed", st.max_slack_observed},
                {"wall_time_us", st.wall_time_us}};
}

// ---------------------------------------------------------------------
// files

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    json j;
    f >> j;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------
// benchmark CSV

struct CsvRow {
    std::string instance_id;
    std::string strategy;
    double beta = 0.0;
    int eta = 0;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

inline std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Wall time stays out of the file so identical command lines reproduce
// byte-identical CSVs.
inline const char* csv_header() {
    return "instance_id,strategy,beta,eta,seed,n_txs,accepted,rejection_cost,objective,"
           "energy_total_j,energy_per_active_sta_j,deadline_miss_pct";
}

inline std::string csv_line(const CsvRow& r) {
    std::ostringstream os;
    os << r.instance_id << ',' << r.strategy << ',' << format_g9(r.beta) << ',' << r.eta << ','
       << r.seed << ',' << r.metrics.n_txs << ',' << format_g9(r.metrics.accepted_count) << ','
       << format_g9(r.metrics.rejection_cost) << ',' << format_g9(r.metrics.objective) << ','
       << format_g9(r.metrics.energy_total_j) << ','
       << format_g9(r.metrics.energy_per_active_sta_j) << ','
       << format_g9(r.metrics.deadline_miss_pct);
    return os.str();
}

inline void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << csv_header() << "\n";
    for (const auto& r : rows) f << csv_line(r) << "\n";
}

inline std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv " + path);
    if (line != csv_header()) throw std::runtime_error("unexpected csv header in " + path);
    std::vector<CsvRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() != 12) throw std::runtime_error("bad csv row: " + line);
        CsvRow r;
        r.instance_id = cols[0];
        r.strategy = cols[1];
        r.beta = std::stod(cols[2]);
        r.eta = std::stoi(cols[3]);
        r.seed = std::stoull(cols[4]);
        r.metrics.n_txs = std::stoi(cols[5]);
        r.metrics.accepted_count = std::stod(cols[6]);
        r.metrics.rejection_cost = std::stod(cols[7]);
        r.metrics.objective = std::stod(cols[8]);
        r.metrics.energy_total_j = std::stod(cols[9]);
        r.metrics.energy_per_active_sta_j = std::stod(cols[10]);
        r.metrics.deadline_miss_pct = std::stod(cols[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace twtsched

#endif
