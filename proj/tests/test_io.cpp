#include <doctest.h>

#include "support.hpp"
#include "twtsched/gen.hpp"
#include "twtsched/io.hpp"

using namespace twtsched;

namespace {

bool same_instance(const Instance& a, const Instance& b) {
    if (a.beacon_interval_us != b.beacon_interval_us || a.n_slots != b.n_slots) return false;
    if (a.stations.size() != b.stations.size() || a.txs.size() != b.txs.size()) return false;
    for (std::size_t i = 0; i < a.stations.size(); ++i) {
        const auto& sa = a.stations[i];
        const auto& sb = b.stations[i];
        if (sa.sta_id != sb.sta_id || sa.link_rate_bps != sb.link_rate_bps) return false;
        if (sa.profile.current_tx_ma != sb.profile.current_tx_ma ||
            sa.profile.current_sleep_ma != sb.profile.current_sleep_ma ||
            sa.profile.voltage_v != sb.profile.voltage_v ||
            sa.profile.transition_idle_slots != sb.profile.transition_idle_slots)
            return false;
    }
    for (std::size_t i = 0; i < a.txs.size(); ++i) {
        const auto& ta = a.txs[i];
        const auto& tb = b.txs[i];
        if (ta.id != tb.id || ta.sta_id != tb.sta_id || ta.bytes != tb.bytes ||
            ta.gen_time_us != tb.gen_time_us || ta.deadline_us != tb.deadline_us ||
            ta.duration_us != tb.duration_us || ta.priority != tb.priority)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("instance json round-trips") {
    Rng rng(8);
    for (int round = 0; round < 50; ++round) {
        test::RandomInstanceOptions opt;
        opt.multi_tx_per_sta = (round % 2 == 0);
        const auto in = test::make_random_instance(rng, 1 + static_cast<int>(rng.below(10)), opt);
        const auto back = instance_from_json(instance_to_json(in));
        CHECK(same_instance(in, back));
    }
    GenParams gp;
    gp.n_stas = 16;
    gp.seed = 3;
    const auto gen = generate_instance(gp);
    CHECK(same_instance(gen, instance_from_json(instance_to_json(gen))));
}

TEST_CASE("instance json rejects unknown schema versions") {
    auto j = instance_to_json(testbed_instance());
    j["schema_version"] = 2;
    CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
    j.erase("schema_version");
    CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
}

TEST_CASE("schedule json round-trips") {
    Schedule s;
    s.accepted = {{3, 0, 4000}, {1, 4000, 5000}};
    s.rejected = {2, 5};
    const auto back = schedule_from_json(schedule_to_json(s));
    REQUIRE(back.accepted.size() == 2);
    CHECK(back.accepted[0].tx_id == 3);
    CHECK(back.accepted[1].start_time_us == 4000);
    CHECK(back.rejected == std::vector<TxId>{2, 5});
}

TEST_CASE("energy class table loads from json") {
    json j;
    j["classes"] = json::array();
    for (int cls = 1; cls <= 4; ++cls)
        j["classes"].push_back(energy_profile_to_json(default_energy_profile(cls)));
    const auto classes = energy_classes_from_json(j);
    REQUIRE(classes.size() == 4);
    CHECK(classes[0].current_tx_ma == doctest::Approx(232));
    CHECK(classes[3].current_tx_ma == doctest::Approx(555.29));

    json empty;
    empty["classes"] = json::array();
    CHECK_THROWS_AS(energy_classes_from_json(empty), std::invalid_argument);
}

TEST_CASE("strategy names round-trip through the cli vocabulary") {
    for (Strategy s : {Strategy::Tasper, Strategy::Exact, Strategy::ShortestFirst, Strategy::Fifo,
                       Strategy::PriorityFirst, Strategy::Random, Strategy::Hsa})
        CHECK(strategy_from_name(strategy_name(s)) == s);
    CHECK_THROWS_AS(strategy_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("csv rows round-trip") {
    std::vector<CsvRow> rows;
    CsvRow r;
    r.instance_id = "inst0007";
    r.strategy = "tasper";
    r.beta = 0.9;
    r.eta = 9;
    r.seed = 123456789;
    r.metrics.n_txs = 16;
    r.metrics.accepted_count = 11;
    r.metrics.rejection_cost = 1.23456789;
    r.metrics.objective = 1.3579;
    r.metrics.energy_total_j = 0.0123456789;
    r.metrics.energy_per_active_sta_j = 0.00112233;
    r.metrics.deadline_miss_pct = 0.0;
    rows.push_back(r);

    const std::string path = "/tmp/twtsched_test_rows.csv";
    write_csv(path, rows);
    const auto back = read_csv(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].instance_id == "inst0007");
    CHECK(back[0].strategy == "tasper");
    CHECK(back[0].beta == doctest::Approx(0.9));
    CHECK(back[0].seed == 123456789);
    CHECK(back[0].metrics.rejection_cost == doctest::Approx(1.23456789).epsilon(1e-9));
    CHECK(back[0].metrics.energy_total_j == doctest::Approx(0.0123456789).epsilon(1e-9));
}

TEST_CASE("nine-significant-digit formatting is stable") {
    CHECK(format_g9(0.9) == "0.9");
    CHECK(format_g9(1.0 / 3.0) == "0.333333333");
    CHECK(format_g9(102400.0) == "102400");
    CHECK(format_g9(7.839744e-4) == "0.0007839744");
}
