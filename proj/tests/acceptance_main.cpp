// Acceptance suite: end-to-end checks of the scheduling engine against its
// oracles and the expected benchmark behavior. Each criterion prints one
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "support.hpp"
#include "twtsched/baselines.hpp"
#include "twtsched/exact.hpp"
#include "twtsched/gen.hpp"
#include "twtsched/io.hpp"
#include "twtsched/objective.hpp"
#include "twtsched/sim.hpp"
#include "twtsched/tasper.hpp"

using namespace twtsched;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now() - t0)
               .count() /
           1000.0;
}

// --- 1. optimality gap against the exact solver ------------------------

void criterion_optimality_gap() {
    const auto t0 = std::chrono::steady_clock::now();
    const int rounds = 1000;
    int within = 0;
    for (int i = 0; i < rounds; ++i) {
        GenParams gp;
        gp.n_stas = 10;
        gp.seed = derive_seed(101, i);
        const Instance in = generate_instance(gp);
        SolveConfig cfg;
        cfg.beta = 0.9;
        cfg.eta = 10;
        const auto heur = solve_tasper(in, cfg);
        const auto opt = solve_exact(in, cfg.beta);
        const double h = schedule_objective(in, heur.schedule, cfg.beta);
        if (h <= opt.objective * 1.02 + 1e-9) ++within;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%d within 2%% of exact (need >= 950), %.1f s",
                  within, rounds, now_ms(t0) / 1000.0);
    report(1, "optimality gap (n=10, beta=0.9, eta=10)", within >= 950, buf);
}

// --- 2. oracle self-consistency ----------------------------------------

void criterion_oracle_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    const int rounds = 1000;
    int agree = 0;
    Rng rng(202);
    for (int i = 0; i < rounds; ++i) {
        Instance in;
        if (i % 2 == 0) {
            GenParams gp;
            gp.n_stas = 2 + (i % 6);
            gp.seed = derive_seed(202, i);
            in = generate_instance(gp);
        } else {
            test::RandomInstanceOptions opt;
            opt.multi_tx_per_sta = true;
            in = test::make_random_instance(rng, 1 + static_cast<int>(rng.below(7)), opt);
        }
        const double beta = (i % 10) / 10.0;
        const auto bnb = solve_exact(in, beta);
        const auto ref = enumerate_all(in, beta);
        if (std::abs(bnb.objective - ref.objective) <= 1e-12) ++agree;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d/%d objective matches to 1e-12, %.1f s", agree, rounds,
                  now_ms(t0) / 1000.0);
    report(2, "oracle self-consistency (n<=7)", agree == rounds, buf);
}

// --- shared 16-tx bench for criteria 3-5 --------------------------------

struct BenchResult {
    double miss_tasper = 0.0, miss_sf = 0.0, miss_hsa = 0.0, miss_fifo = 0.0;
    double rej_tasper09 = 0.0, rej_sf = 0.0, rej_random = 0.0;
    double rej_tasper01 = 0.0;
    double energy_tasper09 = 0.0, energy_tasper01 = 0.0;
};

BenchResult run_bench16(int instances) {
    BenchResult agg;
    for (int i = 0; i < instances; ++i) {
        GenParams gp;
        gp.n_stas = 16;
        gp.seed = derive_seed(303, i);
        const Instance in = generate_instance(gp);

        StrategyConfig scfg;
        SolveConfig cfg;
        cfg.eta = 9;

        scfg.strategy = Strategy::Tasper;
        cfg.beta = 0.9;
        const auto tas09 = run_single(in, scfg, cfg);
        cfg.beta = 0.1;
        const auto tas01 = run_single(in, scfg, cfg);

        cfg.beta = 0.9;
        scfg.strategy = Strategy::ShortestFirst;
        scfg.seed = derive_seed(304, i);
        const auto sf = run_single(in, scfg, cfg);
        scfg.strategy = Strategy::Hsa;
        const auto hsa = run_single(in, scfg, cfg);
        scfg.strategy = Strategy::Fifo;
        scfg.seed = derive_seed(305, i);
        const auto fifo = run_single(in, scfg, cfg);
        scfg.strategy = Strategy::Random;
        scfg.seed = derive_seed(306, i);
        const auto rnd = run_single(in, scfg, cfg, /*random_reps=*/100);

        agg.miss_tasper += tas09.metrics.deadline_miss_pct;
        agg.miss_sf += sf.metrics.deadline_miss_pct;
        agg.miss_hsa += hsa.metrics.deadline_miss_pct;
        agg.miss_fifo += fifo.metrics.deadline_miss_pct;
        agg.rej_tasper09 += tas09.metrics.rejection_cost;
        agg.rej_tasper01 += tas01.metrics.rejection_cost;
        agg.rej_sf += sf.metrics.rejection_cost;
        agg.rej_random += rnd.metrics.rejection_cost;
        agg.energy_tasper09 += tas09.metrics.energy_per_active_sta_j;
        agg.energy_tasper01 += tas01.metrics.energy_per_active_sta_j;
    }
    const double n = instances;
    agg.miss_tasper /= n;
    agg.miss_sf /= n;
    agg.miss_hsa /= n;
    agg.miss_fifo /= n;
    agg.rej_tasper09 /= n;
    agg.rej_tasper01 /= n;
    agg.rej_sf /= n;
    agg.rej_random /= n;
    agg.energy_tasper09 /= n;
    agg.energy_tasper01 /= n;
    return agg;
}

void criterion_deadline_misses(const BenchResult& bench) {
    bool fifo_misses = bench.miss_fifo > 0.0;
    std::string where = "16-tx bench";
    if (!fifo_misses) {
        // the criterion asks for a nonzero fifo miss rate on at least one
        // bench configuration; widen to the 32- and 64-tx benches
        for (int n_stas : {32, 64}) {
            double miss = 0.0;
            for (int i = 0; i < 100; ++i) {
                GenParams gp;
                gp.n_stas = n_stas;
                gp.seed = derive_seed(707, i);
                const Instance in = generate_instance(gp);
                const auto r = solve_fifo(in, derive_seed(708, i));
                miss += 100.0 * r.deadline_misses / static_cast<double>(in.txs.size());
            }
            if (miss > 0.0) {
                fifo_misses = true;
                where = std::to_string(n_stas) + "-tx bench";
                break;
            }
        }
    }
    const bool zeros =
        bench.miss_tasper == 0.0 && bench.miss_sf == 0.0 && bench.miss_hsa == 0.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "tasper=%.2f%% sf=%.2f%% hsa=%.2f%% (exact zeros), fifo=%.2f%% on %s",
                  bench.miss_tasper, bench.miss_sf, bench.miss_hsa, bench.miss_fifo,
                  where.c_str());
    report(3, "deadline-miss tally", zeros && fifo_misses, buf);
}

void criterion_strategy_ordering(const BenchResult& bench) {
    const bool ok = bench.rej_tasper09 <= bench.rej_sf + 1e-12 &&
                    bench.rej_sf <= bench.rej_random + 1e-12 &&
                    bench.rej_tasper09 < bench.rej_random;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "mean rejection cost tasper=%.4f <= sf=%.4f <= random=%.4f",
                  bench.rej_tasper09, bench.rej_sf, bench.rej_random);
    report(4, "strategy ordering (16-tx bench)", ok, buf);
}

void criterion_beta_tradeoff(const BenchResult& bench) {
    const bool energy_ok = bench.energy_tasper01 < bench.energy_tasper09;
    const bool rejection_ok = bench.rej_tasper09 < bench.rej_tasper01;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "energy/sta beta0.1=%.6gJ < beta0.9=%.6gJ: %s; rejection beta0.9=%.4f < "
                  "beta0.1=%.4f: %s",
                  bench.energy_tasper01, bench.energy_tasper09, energy_ok ? "yes" : "no",
                  bench.rej_tasper09, bench.rej_tasper01, rejection_ok ? "yes" : "no");
    report(5, "beta trade-off (16-tx bench)", energy_ok && rejection_ok, buf);
}

// --- 6. real-time budget -------------------------------------------------

void criterion_realtime() {
    std::vector<double> times_ms;
    for (int i = 0; i < 100; ++i) {
        GenParams gp;
        gp.n_stas = 64;
        gp.seed = derive_seed(606, i);
        const Instance in = generate_instance(gp);
        SolveConfig cfg;
        cfg.beta = 0.9;
        cfg.eta = 9;
        const auto t0 = std::chrono::steady_clock::now();
        (void)solve_tasper(in, cfg);
        times_ms.push_back(now_ms(t0));
    }
    std::sort(times_ms.begin(), times_ms.end());
    const double median = times_ms[times_ms.size() / 2];
    char buf[160];
    std::snprintf(buf, sizeof(buf), "median %.2f ms (budget 102.4 ms), max %.2f ms", median,
                  times_ms.back());
    report(6, "real-time budget (n=64, eta=9)", median < 102.4, buf);
}

// --- 7 & 10. feasibility fuzz + optimality dominance ---------------------

void criterion_fuzz_and_dominance() {
    const auto t0 = std::chrono::steady_clock::now();
    const int rounds = 10000;
    int feasibility_violations = 0;
    int range_violations = 0;
    int dominance_violations = 0;
    int exact_checked = 0;
    Rng rng(717);
    for (int i = 0; i < rounds; ++i) {
        Instance in;
        if (i % 2 == 0) {
            GenParams gp;
            gp.n_stas = 1 + (i % 12);
            gp.seed = derive_seed(700, i);
            in = generate_instance(gp);
        } else {
            test::RandomInstanceOptions opt;
            opt.multi_tx_per_sta = (i % 4 == 1);
            in = test::make_random_instance(rng, 1 + static_cast<int>(rng.below(12)), opt);
        }

        // normalization ranges
        CostModel model(in);
        for (const auto& tx : in.txs) {
            const double p = model.p_hat(tx);
            const double e = model.cost_hat(0, tx.gen_time_us, tx, CostModel::kNoSta);
            if (p < 0.0 || p > 1.0 + 1e-12 || e < 0.0 || e > 1.0 + 1e-12) ++range_violations;
        }

        SolveConfig cfg;
        cfg.beta = (i % 10) / 10.0 + 0.05;
        if (cfg.beta > 1.0) cfg.beta = 1.0;
        cfg.eta = 1 + (i % 12);

        std::vector<Schedule> outputs;
        outputs.push_back(solve_tasper(in, cfg).schedule);
        outputs.push_back(solve_shortest_first(in, i).schedule);
        outputs.push_back(solve_fifo(in, i).schedule);
        outputs.push_back(solve_priority_first(in, i).schedule);
        outputs.push_back(solve_random(in, i).schedule);
        outputs.push_back(solve_hsa(in).schedule);

        double exact_obj = -1.0;
        if (in.txs.size() <= 10) {
            const auto opt = solve_exact(in, cfg.beta);
            exact_obj = opt.objective;
            outputs.push_back(opt.schedule);
            ++exact_checked;
        }
        for (const auto& s : outputs) {
            if (!check_schedule_feasibility(in, s).empty()) ++feasibility_violations;
            if (exact_obj >= 0.0 && !in.txs.empty() &&
                schedule_objective(in, s, cfg.beta) < exact_obj - 1e-9)
                ++dominance_violations;
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%d instances x 7 solvers: %d feasibility, %d normalization violations, %.1f s",
                  rounds, feasibility_violations, range_violations, now_ms(t0) / 1000.0);
    report(7, "feasibility fuzz", feasibility_violations == 0 && range_violations == 0, buf);

    char buf2[200];
    std::snprintf(buf2, sizeof(buf2),
                  "%d instances with exact oracle: %d solver outputs below the optimum",
                  exact_checked, dominance_violations);
    report(10, "exhaustive-vs-heuristic dominance", dominance_violations == 0, buf2);
}

// --- 8. concatenated scenario -------------------------------------------

void criterion_concatenated() {
    const auto t0 = std::chrono::steady_clock::now();
    const int streams = 5;
    const int horizon = 100;
    double rej_tasper = 0.0, rej_fifo = 0.0;
    int late = 0;
    bool completed = true;
    for (int i = 0; i < streams; ++i) {
        std::vector<Instance> stream;
        for (int k = 0; k < horizon; ++k) {
            GenParams gp;
            gp.n_stas = 64;
            gp.seed = derive_seed(808, 1000ULL * i + k);
            gp.release_span_us = gp.beacon_interval_us;
            gp.deadline_cap_us =
                std::min<Micros>(2, horizon - k) * gp.beacon_interval_us;
            stream.push_back(generate_instance(gp));
        }
        StrategyConfig scfg;
        scfg.seed = derive_seed(809, i);
        SolveConfig cfg;
        cfg.beta = 0.9;
        cfg.eta = 9;

        scfg.strategy = Strategy::Tasper;
        const auto tas = run_concatenated(stream, scfg, cfg);
        scfg.strategy = Strategy::Fifo;
        const auto fifo = run_concatenated(stream, scfg, cfg);
        rej_tasper += tas.metrics.rejection_cost;
        rej_fifo += fifo.metrics.rejection_cost;
        late += tas.late_schedules + fifo.late_schedules;
        if (tas.interval_schedules.size() != static_cast<std::size_t>(horizon) ||
            fifo.interval_schedules.size() != static_cast<std::size_t>(horizon))
            completed = false;
    }
    rej_tasper /= streams;
    rej_fifo /= streams;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%d streams x %d beacons complete, %d late placements, mean rejection "
                  "tasper=%.4f <= fifo=%.4f, %.1f s",
                  streams, horizon, late, rej_tasper, rej_fifo, now_ms(t0) / 1000.0);
    report(8, "concatenated scenario (n=64, 100 beacons)",
           completed && late == 0 && rej_tasper <= rej_fifo + 1e-12, buf);
}

// --- 9. testbed instance behavior ----------------------------------------

void criterion_testbed() {
    const Instance in = testbed_instance();
    SolveConfig cfg;
    cfg.beta = 1.0;
    const auto tas = solve_tasper(in, cfg);
    const auto sf = solve_shortest_first(in);
    const bool tasper_all = tas.schedule.accepted.size() == 10 && tas.schedule.rejected.empty();
    const bool sf_drops_2 = sf.schedule.rejected == std::vector<TxId>{2};
    char buf[160];
    std::snprintf(buf, sizeof(buf), "tasper(beta=1) accepts %zu/10, sf rejects {%s}",
                  tas.schedule.accepted.size(),
                  sf.schedule.rejected.empty()
                      ? "-"
                      : std::to_string(sf.schedule.rejected.front()).c_str());
    report(9, "testbed-instance behavior", tasper_all && sf_drops_2, buf);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_optimality_gap();
    criterion_oracle_consistency();
    const BenchResult bench = run_bench16(100);
    criterion_deadline_misses(bench);
    criterion_strategy_ordering(bench);
    criterion_beta_tradeoff(bench);
    criterion_realtime();
    criterion_fuzz_and_dominance();
    criterion_concatenated();
    criterion_testbed();
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures;
}
