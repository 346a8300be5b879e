#ifndef TWTSCHED_CLI_HPP
#define TWTSCHED_CLI_HPP

#include <atomic>
#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "twtsched/exact.hpp"
#include "twtsched/gen.hpp"
#include "twtsched/io.hpp"
#include "twtsched/sim.hpp"

// Command-line front end: gen | solve | bench | report. All randomness
// flows from a single --seed, split per instance / replicate / interval
// with derive_seed, so identical command lines produce byte-identical
// output files regardless of --jobs.

namespace twtsched {
namespace cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitCapacity = 4;

inline void print_error(int code, const std::string& message) {
    json j{{"error", {{"code", code}, {"message", message}}}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
}

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct GenOptions {
    std::string preset;
    int n_stas = 0;
    double tau_factor = 0.2;
    double r_factor = 0.3;
    std::uint64_t seed = 0;
    std::string classes_file;
    std::string out_file;
};

inline GenParams params_for_preset(const std::string& preset) {
    GenParams gp;
    if (preset == "small")
        gp.n_stas = 6;
    else if (preset == "paper16")
        gp.n_stas = 16;
    else if (preset == "paper32")
        gp.n_stas = 32;
    else if (preset == "paper64")
        gp.n_stas = 64;
    else
        throw std::invalid_argument("unknown preset '" + preset + "'");
    return gp;
}

inline int cmd_gen(const GenOptions& opt) {
    Instance in;
    if (opt.preset == "testbed") {
        in = testbed_instance();
    } else {
        GenParams gp = opt.preset.empty() ? GenParams{} : params_for_preset(opt.preset);
        if (opt.n_stas > 0) gp.n_stas = opt.n_stas;
        gp.tau_factor = opt.tau_factor;
        gp.r_factor = opt.r_factor;
        gp.seed = opt.seed;
        if (!opt.classes_file.empty()) {
            gp.class_table = energy_classes_from_json(read_json_file(opt.classes_file));
            gp.class_mix.assign(gp.class_table.size(), 1.0);
        }
        in = generate_instance(gp);
    }
    auto rep = validate_instance(in);
    if (!rep.empty()) throw std::invalid_argument("generated instance invalid: " + rep.front().str());
    const json j = instance_to_json(in);
    if (opt.out_file.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(opt.out_file, j);
    return kExitOk;
}

struct SolveOptions {
    std::string in_file;
    std::string strategy = "tasper";
    double beta = 0.9;
    int eta = 9;
    std::uint64_t seed = 0;
    Micros hsa_slot_us = 1024;
    int limit_n = 14;
    bool first_extension_only = false;
    std::string out_file;
};

inline int cmd_solve(const SolveOptions& opt) {
    const Instance in = instance_from_json(read_json_file(opt.in_file));
    auto rep = validate_instance(in);
    if (!rep.empty()) throw std::invalid_argument("invalid instance: " + rep.front().str());

    StrategyConfig scfg;
    scfg.strategy = strategy_from_name(opt.strategy);
    scfg.seed = opt.seed;
    scfg.hsa_slot_us = opt.hsa_slot_us;
    SolveConfig cfg;
    cfg.beta = opt.beta;
    cfg.eta = opt.eta;
    cfg.seed = opt.seed;
    cfg.first_extension_only = opt.first_extension_only;

    const SolveOutcome out = solve_with_strategy(in, scfg, cfg, opt.limit_n);
    json j = schedule_to_json(out.schedule);
    j["stats"] = stats_to_json(out.stats);
    j["stats"]["deadline_misses"] = out.deadline_misses;
    if (scfg.strategy == Strategy::Exact) j["stats"]["proven"] = out.proven;
    j["objective"] = in.txs.empty() ? 0.0 : schedule_objective(in, out.schedule, opt.beta);
    if (opt.out_file.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(opt.out_file, j);
    return kExitOk;
}

struct BenchOptions {
    std::string preset;
    int n_stas = 0;
    std::string strategies = "tasper,sf,fifo,pf,random,hsa";
    std::string betas = "0.1,0.5,0.9";
    int eta = 9;
    int instances = 100;
    int horizon = 1;
    std::uint64_t seed = 0;
    int jobs = 0;
    int random_reps = 100;
    int exact_limit_n = 14;
    std::string out_file = "bench.csv";
};

inline int cmd_bench(const BenchOptions& opt) {
    if (opt.instances < 1) throw std::invalid_argument("need at least one instance");
    if (opt.horizon < 1) throw std::invalid_argument("horizon must be at least 1");

    std::vector<Strategy> strategies;
    for (const auto& s : split_list(opt.strategies)) strategies.push_back(strategy_from_name(s));
    std::vector<double> betas;
    for (const auto& b : split_list(opt.betas)) betas.push_back(std::stod(b));
    if (strategies.empty() || betas.empty())
        throw std::invalid_argument("strategy and beta lists must be nonempty");

    GenParams gp;
    bool fixed_testbed = false;
    if (opt.preset == "testbed")
        fixed_testbed = true;
    else if (!opt.preset.empty())
        gp = params_for_preset(opt.preset);
    if (opt.n_stas > 0) gp.n_stas = opt.n_stas;

    // generate the instance set (or interval streams) up front
    std::vector<Instance> single;
    std::vector<std::vector<Instance>> streams;
    for (int i = 0; i < opt.instances; ++i) {
        if (opt.horizon == 1) {
            GenParams g = gp;
            g.seed = derive_seed(opt.seed, 0x100000000ULL + static_cast<std::uint64_t>(i));
            single.push_back(fixed_testbed ? testbed_instance() : generate_instance(g));
        } else {
            std::vector<Instance> stream;
            for (int k = 0; k < opt.horizon; ++k) {
                GenParams g = gp;
                g.seed = derive_seed(opt.seed, 0x400000000ULL +
                                                   static_cast<std::uint64_t>(i) * 1000003ULL +
                                                   static_cast<std::uint64_t>(k));
                // arrivals spread across the interval and deadlines may run
                // into the following one, so unscheduled TXs genuinely carry
                g.release_span_us = g.beacon_interval_us;
                g.deadline_cap_us =
                    std::min<Micros>(2, opt.horizon - k) * g.beacon_interval_us;
                stream.push_back(fixed_testbed ? testbed_instance() : generate_instance(g));
            }
            streams.push_back(std::move(stream));
        }
    }
    if (!single.empty()) {
        for (const auto& in : single)
            if (static_cast<int>(in.txs.size()) > opt.exact_limit_n)
                for (Strategy s : strategies)
                    if (s == Strategy::Exact)
                        throw CapacityError("exact strategy requested but instances exceed its size limit");
    }

    struct Job {
        int instance_idx;
        Strategy strategy;
        double beta;
        int rep;  // random replicate, -1 otherwise
    };
    std::vector<Job> jobs;
    for (int i = 0; i < opt.instances; ++i)
        for (Strategy s : strategies)
            for (double b : betas) {
                if (s == Strategy::Random && opt.horizon == 1) {
                    for (int r = 0; r < opt.random_reps; ++r) jobs.push_back({i, s, b, r});
                } else {
                    jobs.push_back({i, s, b, -1});
                }
            }

    std::vector<CsvRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < jobs.size() && !failed.load();
             k = next.fetch_add(1)) {
            const Job& job = jobs[k];
            SolveConfig cfg;
            cfg.beta = job.beta;
            cfg.eta = opt.eta;
            StrategyConfig scfg;
            scfg.strategy = job.strategy;
            CsvRow row;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "inst%04d", job.instance_idx);
            row.instance_id = buf;
            row.strategy = strategy_name(job.strategy);
            row.beta = job.beta;
            row.eta = opt.eta;
            if (opt.horizon == 1) {
                if (job.strategy == Strategy::Random) {
                    scfg.seed = derive_seed(opt.seed,
                                            0x200000000ULL +
                                                (static_cast<std::uint64_t>(job.instance_idx) << 20) +
                                                static_cast<std::uint64_t>(job.rep));
                } else {
                    scfg.seed = derive_seed(opt.seed, 0x500000000ULL +
                                                          static_cast<std::uint64_t>(job.instance_idx));
                }
                cfg.seed = scfg.seed;
                row.seed = scfg.seed;
                RunResult r = run_single(single[job.instance_idx], scfg, cfg, /*random_reps=*/1);
                row.metrics = r.metrics;
            } else {
                scfg.seed = derive_seed(opt.seed, 0x300000000ULL +
                                                      static_cast<std::uint64_t>(job.instance_idx));
                cfg.seed = scfg.seed;
                row.seed = scfg.seed;
                ConcatResult r = run_concatenated(streams[job.instance_idx], scfg, cfg);
                row.metrics = r.metrics;
            }
            rows[k] = std::move(row);
        }
    };
    auto guarded_worker = [&] {
        try {
            worker();
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed.store(true);
        }
    };

    int n_workers = opt.jobs > 0 ? opt.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    n_workers = std::min<int>(n_workers, static_cast<int>(jobs.size()));
    log_info("bench: " + std::to_string(jobs.size()) + " jobs on " + std::to_string(n_workers) +
             " workers");
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(guarded_worker);
    guarded_worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    write_csv(opt.out_file, rows);
    return kExitOk;
}

struct ReportOptions {
    std::string in_file;
    std::string plot_data_dir;
};

struct ReportGroup {
    std::string strategy;
    double beta;
    int n = 0;
    MeanCi rejection_cost;
    MeanCi energy_per_active_sta;
    MeanCi miss_pct;
    MeanCi accepted;
};

inline std::vector<ReportGroup> summarize(const std::vector<CsvRow>& rows) {
    std::map<std::pair<std::string, double>, std::vector<const CsvRow*>> groups;
    for (const auto& r : rows) groups[{r.strategy, r.beta}].push_back(&r);
    std::vector<ReportGroup> out;
    for (const auto& [key, members] : groups) {
        ReportGroup g;
        g.strategy = key.first;
        g.beta = key.second;
        g.n = static_cast<int>(members.size());
        auto agg = [&](auto getter) -> MeanCi {
            std::vector<double> v;
            v.reserve(members.size());
            for (const CsvRow* r : members) v.push_back(getter(*r));
            if (v.size() < 2) return {v.empty() ? 0.0 : v.front(), 0.0};
            return aggregate(v);
        };
        g.rejection_cost = agg([](const CsvRow& r) { return r.metrics.rejection_cost; });
        g.energy_per_active_sta =
            agg([](const CsvRow& r) { return r.metrics.energy_per_active_sta_j; });
        g.miss_pct = agg([](const CsvRow& r) { return r.metrics.deadline_miss_pct; });
        g.accepted = agg([](const CsvRow& r) { return r.metrics.accepted_count; });
        out.push_back(g);
    }
    return out;
}

inline int cmd_report(const ReportOptions& opt) {
    const std::vector<CsvRow> rows = read_csv(opt.in_file);
    if (rows.empty()) throw std::invalid_argument("no rows in " + opt.in_file);
    const std::vector<ReportGroup> groups = summarize(rows);

    auto cell = [](const MeanCi& m) {
        std::ostringstream os;
        os << format_g9(m.mean) << " +- " << format_g9(m.ci95_half_width);
        return os.str();
    };
    std::printf("%-8s %-5s %-6s %-28s %-28s %-16s %-12s\n", "strategy", "beta", "n",
                "rejection_cost", "energy_per_active_sta_j", "miss_pct", "accepted");
    for (const auto& g : groups) {
        std::printf("%-8s %-5s %-6d %-28s %-28s %-16s %-12s\n", g.strategy.c_str(),
                    format_g9(g.beta).c_str(), g.n, cell(g.rejection_cost).c_str(),
                    cell(g.energy_per_active_sta).c_str(), cell(g.miss_pct).c_str(),
                    cell(g.accepted).c_str());
    }

    if (!opt.plot_data_dir.empty()) {
        auto series = [&](const std::string& metric, auto getter) {
            std::ofstream f(opt.plot_data_dir + "/" + metric + ".csv");
            if (!f) throw std::runtime_error("cannot write plot data to " + opt.plot_data_dir);
            f << "strategy,beta,mean,ci95_half_width\n";
            for (const auto& g : groups) {
                const MeanCi m = getter(g);
                f << g.strategy << ',' << format_g9(g.beta) << ',' << format_g9(m.mean) << ','
                  << format_g9(m.ci95_half_width) << "\n";
            }
        };
        series("rejection_cost", [](const ReportGroup& g) { return g.rejection_cost; });
        series("energy_per_active_sta", [](const ReportGroup& g) { return g.energy_per_active_sta; });
        series("deadline_miss_pct", [](const ReportGroup& g) { return g.miss_pct; });
        series("accepted", [](const ReportGroup& g) { return g.accepted; });
    }
    return kExitOk;
}

inline int run(std::vector<std::string> args) {
    CLI::App app{"TWT transmission acceptance and scheduling toolkit"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "generate an instance JSON");
    gen->add_option("--preset", gen_opt.preset, "testbed|small|paper16|paper32|paper64");
    gen->add_option("--n", gen_opt.n_stas, "number of stations (overrides preset)");
    gen->add_option("--tau", gen_opt.tau_factor, "release-time factor");
    gen->add_option("--r", gen_opt.r_factor, "deadline-slack factor");
    gen->add_option("--seed", gen_opt.seed, "generator seed");
    gen->add_option("--energy-classes", gen_opt.classes_file, "energy class table JSON");
    gen->add_option("--out", gen_opt.out_file, "output file (stdout when omitted)");

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("--in", solve_opt.in_file, "instance JSON")->required();
    solve->add_option("--strategy", solve_opt.strategy, "tasper|exact|sf|fifo|pf|random|hsa");
    solve->add_option("--beta", solve_opt.beta, "objective weight");
    solve->add_option("--eta", solve_opt.eta, "neighborhood size");
    solve->add_option("--seed", solve_opt.seed, "seed for randomized strategies");
    solve->add_option("--hsa-slot", solve_opt.hsa_slot_us, "HSA slot in microseconds");
    solve->add_option("--limit-n", solve_opt.limit_n, "exact solver size cap");
    solve->add_flag("--first-extension-only", solve_opt.first_extension_only,
                    "take only the first dominant extension per vertex (comparison mode)");
    solve->add_option("--out", solve_opt.out_file, "output file (stdout when omitted)");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "run a benchmark and write a CSV");
    bench->add_option("--preset", bench_opt.preset, "testbed|small|paper16|paper32|paper64");
    bench->add_option("--n", bench_opt.n_stas, "number of stations (overrides preset)");
    bench->add_option("--strategies", bench_opt.strategies, "comma list of strategies");
    bench->add_option("--beta", bench_opt.betas, "comma list of beta values");
    bench->add_option("--eta", bench_opt.eta, "neighborhood size");
    bench->add_option("--instances", bench_opt.instances, "instances per configuration");
    bench->add_option("--horizon", bench_opt.horizon, "beacon intervals per run");
    bench->add_option("--seed", bench_opt.seed, "base seed");
    bench->add_option("--jobs", bench_opt.jobs, "worker threads (default: hardware)");
    bench->add_option("--random-reps", bench_opt.random_reps, "replicates for the random strategy");
    bench->add_option("--exact-limit-n", bench_opt.exact_limit_n, "exact solver size cap");
    bench->add_option("--out", bench_opt.out_file, "output CSV path");

    ReportOptions report_opt;
    CLI::App* report = app.add_subcommand("report", "summarize a benchmark CSV");
    report->add_option("--in", report_opt.in_file, "benchmark CSV")->required();
    report->add_option("--plot-data", report_opt.plot_data_dir, "directory for plot series CSVs");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error(kExitUsage, e.what());
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_opt);
        if (solve->parsed()) return cmd_solve(solve_opt);
        if (bench->parsed()) return cmd_bench(bench_opt);
        if (report->parsed()) return cmd_report(report_opt);
        print_error(kExitUsage, "no subcommand given");
        return kExitUsage;
    } catch (const CapacityError& e) {
        print_error(kExitCapacity, e.what());
        return kExitCapacity;
    } catch (const std::invalid_argument& e) {
        print_error(kExitValidation, e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        print_error(kExitValidation, e.what());
        return kExitValidation;
    }
}

}  // namespace cli
}  // namespace twtsched

#endif
