#include <doctest.h>

#include "support.hpp"
#include "twtsched/baselines.hpp"
#include "twtsched/exact.hpp"
#include "twtsched/objective.hpp"
#include "twtsched/tasper.hpp"

using namespace twtsched;

TEST_CASE("solve_exact on an empty instance returns the empty schedule") {
    Instance in;
    auto res = solve_exact(in, 0.5);
    CHECK(res.schedule.accepted.empty());
    CHECK(res.schedule.rejected.empty());
    CHECK(res.objective == doctest::Approx(0.0));
    CHECK(res.proven);
}

TEST_CASE("solve_exact accepts a single feasible tx at beta=1") {
    auto in = test::make_instance({test::tx(1, 1, 2000, 3000, 60000, 5)}, 1);
    auto res = solve_exact(in, 1.0);
    REQUIRE(res.schedule.accepted.size() == 1);
    CHECK(res.schedule.accepted[0].start_time_us == 2000);
    CHECK(res.objective == doctest::Approx(0.0));
    CHECK(res.proven);
}

TEST_CASE("solve_exact enforces its size cap") {
    Rng rng(1);
    auto in = test::make_random_instance(rng, 15);
    CHECK_THROWS_AS(solve_exact(in, 0.5), CapacityError);
    CHECK_NOTHROW(solve_exact(in, 0.5, 15));
}

TEST_CASE("enumerate_all visits subsets times orders, including the empty one") {
    auto in = test::make_instance(
        {
            test::tx(1, 1, 0, 1000, 102400, 2),
            test::tx(2, 2, 0, 1000, 102400, 3),
        },
        2);
    auto res = enumerate_all(in, 0.9);
    // {} , [1], [2], [1,2], [2,1]
    CHECK(res.sequences_visited == 5);
    // at beta=0.9 accepting both is strictly cheaper than any rejection
    CHECK(res.schedule.accepted.size() == 2);
}

TEST_CASE("enumerate_all enforces its size cap") {
    Rng rng(2);
    auto in = test::make_random_instance(rng, 9);
    CHECK_THROWS_AS(enumerate_all(in, 0.5), CapacityError);
}

TEST_CASE("symmetric txs give equal objectives under either acceptance") {
    // identical parameters on different stations of the same class
    auto in = test::make_instance(
        {
            test::tx(1, 1, 0, 50000, 60000, 5),
            test::tx(2, 2, 0, 50000, 60000, 5),
        },
        2);
    Schedule pick1;
    pick1.accepted = {{1, 0, 50000}};
    pick1.rejected = {2};
    Schedule pick2;
    pick2.accepted = {{2, 0, 50000}};
    pick2.rejected = {1};
    CHECK(schedule_objective(in, pick1, 0.9) ==
          doctest::Approx(schedule_objective(in, pick2, 0.9)).epsilon(1e-12));

    // at beta=0.9 exactly one of the two fits and is worth accepting; the
    // solver picks the lexicographically smaller accepted sequence
    auto res = solve_exact(in, 0.9);
    REQUIRE(res.schedule.accepted.size() == 1);
    CHECK(res.schedule.accepted[0].tx_id == 1);
}

TEST_CASE("branch-and-bound equals exhaustive enumeration on random instances") {
    Rng rng(42);
    for (int round = 0; round < 300; ++round) {
        test::RandomInstanceOptions opt;
        opt.multi_tx_per_sta = (round % 2 == 0);
        const int n = 1 + static_cast<int>(rng.below(7));
        auto in = test::make_random_instance(rng, n, opt);
        const double beta = rng.uniform();
        auto bnb = solve_exact(in, beta);
        auto ref = enumerate_all(in, beta);
        CHECK(bnb.objective == doctest::Approx(ref.objective).epsilon(1e-12));
        CHECK(check_schedule_feasibility(in, bnb.schedule).empty());
    }
}

TEST_CASE("disabling pruning does not change the exact objective") {
    Rng rng(77);
    for (int round = 0; round < 60; ++round) {
        test::RandomInstanceOptions opt;
        opt.multi_tx_per_sta = true;
        auto in = test::make_random_instance(rng, 1 + static_cast<int>(rng.below(6)), opt);
        const double beta = rng.uniform();
        auto pruned = solve_exact(in, beta, 14, true);
        auto full = solve_exact(in, beta, 14, false);
        CHECK(pruned.objective == doctest::Approx(full.objective).epsilon(1e-12));
    }
}

TEST_CASE("exact objective lower-bounds every other solver") {
    Rng rng(4242);
    for (int round = 0; round < 60; ++round) {
        test::RandomInstanceOptions opt;
        opt.multi_tx_per_sta = (round % 2 == 0);
        auto in = test::make_random_instance(rng, 2 + static_cast<int>(rng.below(7)), opt);
        const double beta = 0.9;
        auto opt_res = solve_exact(in, beta);

        std::vector<Schedule> others;
        SolveConfig cfg;
        cfg.beta = beta;
        others.push_back(solve_tasper(in, cfg).schedule);
        others.push_back(solve_shortest_first(in).schedule);
        others.push_back(solve_fifo(in).schedule);
        others.push_back(solve_priority_first(in).schedule);
        others.push_back(solve_random(in, round).schedule);
        others.push_back(solve_hsa(in).schedule);
        for (const auto& s : others)
            CHECK(schedule_objective(in, s, beta) >= opt_res.objective - 1e-9);
    }
}

TEST_CASE("optimal placement beats earliest, slot-aligned, and random placements") {
    Rng rng(515);
    for (int round = 0; round < 200; ++round) {
        test::RandomInstanceOptions opt;
        opt.multi_tx_per_sta = true;
        auto in = test::make_random_instance(rng, 2 + static_cast<int>(rng.below(6)), opt);
        CostModel model(in);

        // a random feasible sequence
        std::vector<int> seq;
        Micros t = 0;
        std::vector<int> order(in.txs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (int txi : order) {
            const auto& tx = in.txs[txi];
            const Micros start = std::max(t, tx.gen_time_us);
            if (start + tx.duration_us > tx.deadline_us) continue;
            seq.push_back(txi);
            t = start + tx.duration_us;
        }
        if (seq.empty()) continue;

        const auto opt_place = detail::optimal_placement(in, model, seq);
        const auto earliest = detail::earliest_placement(in, model, seq);
        CHECK(opt_place.energy_j <= earliest.energy_j + 1e-12);

        // optimal placement must be a real schedule of the same sequence
        auto sched = detail::schedule_from_placement(in, seq, opt_place.completions);
        CHECK(check_schedule_feasibility(in, sched).empty());

        // random feasible right-shifts can never do better
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Micros> z = earliest.completions;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const Micros room = in.txs[seq[i]].deadline_us - z[i];
                if (room > 0) z[i] += rng.uniform_int(0, room);
            }
            for (std::size_t i = z.size(); i-- > 1;)
                z[i - 1] = std::min(z[i - 1], z[i] - in.txs[seq[i]].duration_us);
            bool ok = true;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const auto& tx = in.txs[seq[i]];
                if (z[i] - tx.duration_us < tx.gen_time_us || z[i] > tx.deadline_us) ok = false;
                if (i > 0 && z[i] - tx.duration_us < z[i - 1]) ok = false;
            }
            if (!ok) continue;
            double cost = 0.0;
            Micros prev_end = 0;
            StaId prev_sta = CostModel::kNoSta;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const auto& tx = in.txs[seq[i]];
                cost += model.cost_j(prev_end, z[i] - tx.duration_us, tx, prev_sta);
                prev_end = z[i];
                prev_sta = tx.sta_id;
            }
            CHECK(opt_place.energy_j <= cost + 1e-12);
        }
    }
}

TEST_CASE("earliest placement: adding delay never improves one-tx-per-station instances") {
    // with one tx per station every predecessor is a different station, so
    // the energy term is placement-independent and delay only hurts
    Rng rng(9);
    for (int round = 0; round < 50; ++round) {
        auto in = test::make_random_instance(rng, 2 + static_cast<int>(rng.below(5)));
        const double beta = rng.uniform();
        auto res = solve_exact(in, beta);
        if (res.schedule.accepted.empty()) continue;

        // delay each accepted entry by one slot where feasibility allows
        for (std::size_t k = 0; k < res.schedule.accepted.size(); ++k) {
            Schedule delayed = res.schedule;
            for (std::size_t m = k; m < delayed.accepted.size(); ++m) {
                delayed.accepted[m].start_time_us += in.slot_us();
                delayed.accepted[m].end_time_us += in.slot_us();
            }
            if (!check_schedule_feasibility(in, delayed).empty()) continue;
            CHECK(schedule_objective(in, delayed, beta) >=
                  schedule_objective(in, res.schedule, beta) - 1e-12);
        }
    }
}
