#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "setout/accept.hpp"
#include "setout/cso_disjoint.hpp"
#include "setout/cso_general.hpp"
#include "setout/gcso.hpp"
#include "setout/generators.hpp"
#include "setout/io.hpp"
#include "setout/metric_core.hpp"
#include "setout/oracle_suite.hpp"
#include "setout/parallel.hpp"
#include "setout/relational_outliers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace setout;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(ss.str())));
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InstanceError("cannot write " + path);
    out << text;
}

json solution_json(const TriSolution& sol) {
    return json{{"centers", sol.centers}, {"outliers", sol.outliers}, {"radius", sol.radius}};
}

json rel_solution_json(const RelSolution& sol) {
    json jt = json::array();
    for (const auto& t : sol.outliers) jt.push_back(json::array({t.relation, t.row}));
    json jr = json::array();
    for (const auto& p : sol.result_outliers) jr.push_back(p);
    return json{{"centers", sol.centers},
                {"outlier_tuples", jt},
                {"result_outliers", jr},
                {"radius", sol.radius}};
}

struct GenArgs {
    std::string kind = "clustered-general";
    std::string out = "instance.json";
    std::uint64_t seed = 1;
    int n = 12, m = 4, d = 2, k = 2, z = 1, relations = 2, tuples = 8;
};

int run_gen(const GenArgs& a) {
    if (a.kind == "clustered-general" || a.kind == "clustered-geometric") {
        ClusterGenOptions opt;
        opt.seed = a.seed;
        opt.clusters = std::max(1, a.k);
        opt.points_per_cluster = std::max(1, a.n / std::max(1, a.k));
        opt.planted_sets = std::max(1, a.z);
        opt.cover_sets = std::max(1, a.m - a.z);
        opt.dim = a.d;
        Instance inst = a.kind == "clustered-general" ? Instance(gen_clustered_general(opt))
                                                      : Instance(gen_clustered_geometric(opt));
        save_instance(inst, a.out);
    } else if (a.kind == "setcover") {
        SetCoverGenOptions opt;
        opt.seed = a.seed;
        opt.universe = std::max(2, a.n);
        opt.sets = std::max(2, a.m);
        opt.k = a.k;
        save_instance(gen_setcover_instance(opt), a.out);
    } else if (a.kind == "relational") {
        RelationalGenOptions opt;
        opt.seed = a.seed;
        opt.relations = a.relations;
        opt.tuples_per_relation = a.tuples;
        auto db = gen_relational(opt);
        fs::create_directories(a.out);
        json schema;
        schema["relations"] = json::array();
        for (const auto& rel : db.relations) {
            json attrs = json::array();
            for (int at : rel.attrs) attrs.push_back(db.attr_names[static_cast<std::size_t>(at)]);
            const std::string csv = rel.name + ".csv";
            schema["relations"].push_back(json{{"name", rel.name}, {"attrs", attrs}, {"csv", csv}});
            std::ostringstream body;
            for (std::size_t c = 0; c < rel.attrs.size(); ++c)
                body << (c ? "," : "") << db.attr_names[static_cast<std::size_t>(rel.attrs[c])];
            body << "\n";
            for (const auto& t : rel.tuples) {
                for (std::size_t c = 0; c < t.size(); ++c) body << (c ? "," : "") << t[c];
                body << "\n";
            }
            write_text(a.out + "/" + csv, body.str());
        }
        write_text(a.out + "/schema.json", schema.dump(2) + "\n");
        auto tree = build_join_tree(db);
        if (tree) write_text(a.out + "/jointree.dot", join_tree_dot(db, *tree));
    } else {
        std::cerr << "unknown generator kind: " << a.kind << "\n";
        return kExitUsage;
    }
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

struct SolveArgs {
    std::string algo = "cso";
    std::string input;
    std::string out = "solution.json";
    Params params{2, 1, 0.2};
    std::uint64_t seed = 1;
    long long cap_brute = kBruteForceDefaultCap;
    long long cap_trials = 1 << 22;
    long long cap_materialize = 512;
    double budget_c = kMwuBudgetConstant;
    double tau_multiplier = 4.0;
    double trial_multiplier = 1.0;
    bool with_oracle = false;
};

int run_solve(const SolveArgs& a) {
    try {
        check_params(a.params);
    } catch (const InstanceError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    const auto t0 = std::chrono::steady_clock::now();
    json record;
    record["command"] = "solve --algo " + a.algo;
    record["seed"] = a.seed;
    record["instance"] = a.input;

    json sol_json;
    double ratio = -1.0, opt = -1.0, radius = 0.0;
    std::size_t centers = 0, outliers = 0;

    if (a.algo == "cso" || a.algo == "cso-disjoint" || a.algo == "gcso" || a.algo == "gcso-disjoint") {
        Instance inst = load_instance(a.input);
        record["instance_digest"] = file_digest(a.input);
        CsoOptions copt;
        copt.budget_c = a.budget_c;
        GcsoOptions gopt;
        gopt.budget_c = a.budget_c;
        TriSolution sol;
        if (a.algo == "cso") {
            const auto& g = std::holds_alternative<GeneralInstance>(inst)
                                ? std::get<GeneralInstance>(inst)
                                : std::get<GeometricInstance>(inst).to_general();
            sol = solve_cso(g, a.params, copt);
        } else if (a.algo == "cso-disjoint") {
            const auto& g = std::holds_alternative<GeneralInstance>(inst)
                                ? std::get<GeneralInstance>(inst)
                                : std::get<GeometricInstance>(inst).to_general();
            sol = solve_cso_disjoint(g, a.params, copt);
        } else {
            if (!std::holds_alternative<GeometricInstance>(inst))
                throw InstanceError(a.algo + " needs a geometric instance");
            const auto& g = std::get<GeometricInstance>(inst);
            sol = a.algo == "gcso" ? solve_gcso(g, a.params, gopt) : solve_gcso_disjoint(g, a.params, gopt);
        }
        auto rep = validate_solution(inst, sol, a.params, BoundsClaim{1e18, 1e18, 1e18});
        if (!rep.ok()) throw InstanceError("internal: solver output failed validation");
        radius = rep.radius;
        centers = sol.centers.size();
        outliers = sol.outliers.size();
        if (a.with_oracle) {
            const auto& g = std::holds_alternative<GeneralInstance>(inst)
                                ? std::get<GeneralInstance>(inst)
                                : std::get<GeometricInstance>(inst).to_general();
            opt = brute_force_cso(g, a.params, a.cap_brute).opt_radius;
            ratio = opt > 0 ? radius / opt : (radius == 0.0 ? 1.0 : -1.0);
        }
        sol_json = solution_json(sol);
    } else if (a.algo == "rcro" || a.algo == "rcto1" || a.algo == "rcto") {
        auto db = load_relational(a.input);
        record["instance_digest"] = file_digest(a.input);
        auto tree = build_join_tree(db);
        if (!tree) throw InstanceError("query is not acyclic");
        RelOptions ropt;
        ropt.eps = a.params.eps;
        ropt.seed = a.seed;
        ropt.trial_cap = a.cap_trials;
        ropt.materialize_cap = a.cap_materialize;
        ropt.budget_c = a.budget_c;
        ropt.tau_multiplier = a.tau_multiplier;
        ropt.trial_multiplier = a.trial_multiplier;
        RelSolution sol;
        if (a.algo == "rcro") {
            sol = solve_rcro(db, *tree, a.params.k, a.params.z, ropt);
        } else if (a.algo == "rcto1") {
            sol = solve_rcto1(db, *tree, a.params.k, a.params.z, ropt);
        } else {
            auto out = solve_rcto(db, *tree, a.params.k, a.params.z, ropt);
            sol = out.solution;
            // replay trace: trials, witnesses, radii
            json trace = json::array();
            for (const auto& tr : out.trials) {
                json jw = json::array();
                for (const auto& w : tr.witnesses)
                    jw.push_back(json{{"witness", w.witness},
                                      {"cube_radius", w.cube_radius},
                                      {"cube_centers", w.cube_centers}});
                trace.push_back(json{{"index", tr.index},
                                     {"seed", tr.seed},
                                     {"radius", tr.radius},
                                     {"witnesses", jw}});
            }
            record["trials"] = trace;
            record["best_trial"] = out.best_trial;
        }
        radius = sol.radius;
        centers = sol.centers.size();
        outliers = a.algo == "rcro" ? sol.result_outliers.size() : sol.outliers.size();
        if (a.with_oracle) {
            if (a.algo == "rcro") {
                JoinEvaluator ev(db, *tree);
                auto pts = ev.materialize(a.cap_brute);
                opt = exhaustive_kcenter_outliers(pts, a.params.k, a.params.z).radius;
            } else if (a.algo == "rcto1") {
                opt = exhaustive_rcto1_opt(db, *tree, a.params.k, a.params.z, a.cap_brute);
            } else {
                opt = exhaustive_rcto_opt(db, *tree, a.params.k, a.params.z, a.cap_brute);
            }
            ratio = opt > 0 ? radius / opt : (radius == 0.0 ? 1.0 : -1.0);
        }
        sol_json = rel_solution_json(sol);
    } else {
        std::cerr << "unknown algorithm: " << a.algo << "\n";
        return kExitUsage;
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record["metrics"] = json{{"centers", centers}, {"outliers", outliers}, {"radius", radius}};
    if (a.with_oracle) {
        record["metrics"]["opt"] = opt;
        record["metrics"]["ratio"] = ratio;
    }
    record["seconds"] = secs;
    record["solution"] = sol_json;
    write_text(a.out, sol_json.dump(2) + "\n");
    write_text(a.out + ".run.json", record.dump(2) + "\n");
    std::cout << "radius " << radius << ", centers " << centers << ", outliers " << outliers << " -> " << a.out
              << "\n";
    return 0;
}

struct OracleArgs {
    std::string input;
    std::string out = "optimum.json";
    Params params{2, 1, 0.2};
    long long cap = kBruteForceDefaultCap;
};

int run_oracle(const OracleArgs& a) {
    Instance inst = load_instance(a.input);
    const auto& g = std::holds_alternative<GeneralInstance>(inst)
                        ? std::get<GeneralInstance>(inst)
                        : std::get<GeometricInstance>(inst).to_general();
    auto res = brute_force_cso(g, a.params, a.cap);
    json j;
    j["opt_radius"] = res.opt_radius;
    j["solution"] = solution_json(res.solution);
    write_text(a.out, j.dump(2) + "\n");
    std::cout << "optimum " << res.opt_radius << " -> " << a.out << "\n";
    return 0;
}

struct BenchArgs {
    std::string algo = "cso";
    std::string out = "bench.csv";
    std::vector<int> ns{8, 10, 12};
    std::vector<int> ms{3, 5};
    std::vector<int> ks{1, 2};
    std::vector<int> zs{1};
    int seeds = 3;
    bool with_oracle = true;
};

int run_bench(const BenchArgs& a) {
    struct Cell {
        int n, m, k, z, seed;
    };
    std::vector<Cell> grid;
    for (int n : a.ns)
        for (int m : a.ms)
            for (int k : a.ks)
                for (int z : a.zs)
                    for (int seed = 0; seed < a.seeds; ++seed) grid.push_back({n, m, k, z, seed});

    std::vector<std::string> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int idx) {
        const Cell c = grid[static_cast<std::size_t>(idx)];
        ClusterGenOptions gopt;
        gopt.seed = static_cast<std::uint64_t>(c.seed + 1);
        gopt.clusters = c.k;
        gopt.points_per_cluster = std::max(1, c.n / std::max(1, c.k));
        gopt.planted_sets = c.z;
        gopt.cover_sets = std::max(1, c.m - c.z);
        gopt.max_f = a.algo == "cso" ? 2 : 1;
        auto g = gen_clustered_general(gopt);
        const Params p{c.k, c.z, 0.2};
        const auto t0 = std::chrono::steady_clock::now();
        TriSolution sol = a.algo == "cso-disjoint" ? solve_cso_disjoint(g, p) : solve_cso(g, p);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto rep = validate_solution(g, sol, p, BoundsClaim{1e18, 1e18, 1e18});
        double opt = -1, ratio = -1;
        if (a.with_oracle) {
            opt = brute_force_cso(g, p).opt_radius;
            ratio = opt > 0 ? rep.radius / opt : (rep.radius == 0 ? 1.0 : -1.0);
        }
        std::ostringstream row;
        row << a.algo << "," << g.n << "," << g.m() << "," << c.k << "," << c.z << "," << c.seed << "," << secs
            << "," << rep.radius << "," << opt << "," << ratio << "," << sol.centers.size() << ","
            << sol.outliers.size() << "\n";
        rows[static_cast<std::size_t>(idx)] = row.str();
    });
    std::ostringstream csv;
    csv << "algo,n,m,k,z,seed,seconds,radius,opt,ratio,centers,outliers\n";
    for (const auto& r : rows) csv << r;
    write_text(a.out, csv.str());
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-center clustering with set outliers: solvers, oracles and generators"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a seeded instance");
    gen->add_option("--kind", gen_args.kind,
                    "clustered-general|clustered-geometric|setcover|relational");
    gen->add_option("--seed", gen_args.seed);
    gen->add_option("-o,--out", gen_args.out);
    gen->add_option("--n", gen_args.n);
    gen->add_option("--m", gen_args.m);
    gen->add_option("--d", gen_args.d);
    gen->add_option("--k", gen_args.k);
    gen->add_option("--z", gen_args.z);
    gen->add_option("--relations", gen_args.relations);
    gen->add_option("--tuples", gen_args.tuples);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "run a solver and write solution + run record");
    solve->add_option("--algo", solve_args.algo, "cso|cso-disjoint|gcso|gcso-disjoint|rcro|rcto1|rcto");
    solve->add_option("-i,--input", solve_args.input)->required();
    solve->add_option("-o,--out", solve_args.out);
    solve->add_option("--k", solve_args.params.k);
    solve->add_option("--z", solve_args.params.z);
    solve->add_option("--eps", solve_args.params.eps);
    solve->add_option("--seed", solve_args.seed);
    solve->add_option("--cap-brute", solve_args.cap_brute);
    solve->add_option("--cap-trials", solve_args.cap_trials);
    solve->add_option("--cap-materialize", solve_args.cap_materialize);
    solve->add_option("--mwu-budget", solve_args.budget_c, "iteration budget constant c");
    solve->add_option("--rcro-tau-mult", solve_args.tau_multiplier, "RCRO sample-size multiplier");
    solve->add_option("--rcto-trial-mult", solve_args.trial_multiplier, "RCTO trial-count multiplier");
    solve->add_flag("--with-oracle", solve_args.with_oracle, "also run the exact oracle and report ratios");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "exact brute-force optimum of an instance file");
    oracle->add_option("-i,--input", oracle_args.input)->required();
    oracle->add_option("-o,--out", oracle_args.out);
    oracle->add_option("--k", oracle_args.params.k);
    oracle->add_option("--z", oracle_args.params.z);
    oracle->add_option("--cap", oracle_args.cap);

    auto* accept = app.add_subcommand("accept", "run the acceptance criteria suite");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "sweep instance grids, emit CSV of runtimes and ratios");
    bench->add_option("--algo", bench_args.algo, "cso|cso-disjoint");
    bench->add_option("-o,--out", bench_args.out);
    bench->add_option("--n", bench_args.ns);
    bench->add_option("--m", bench_args.ms);
    bench->add_option("--k", bench_args.ks);
    bench->add_option("--z", bench_args.zs);
    bench->add_option("--seeds", bench_args.seeds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (solve->parsed()) return run_solve(solve_args);
        if (oracle->parsed()) return run_oracle(oracle_args);
        if (accept->parsed()) return acceptance_main();
        if (bench->parsed()) return run_bench(bench_args);
    } catch (const BruteForceRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const TrialCapExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const MaterializeRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
