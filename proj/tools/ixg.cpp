// ixg: plan, build LBG caches, and run benchmark sweeps from the command line.
//
// Exit codes: 0 solved (or success), 2 infeasible, 3 budget exhausted,
// 4 bad input.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ixg/ixg.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

ixg::Point parse_point(const std::string& s, int dim, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ixg::ArgumentError(std::string(what) + ": not a number: '" + tok + "'");
        }
    }
    if (static_cast<int>(v.size()) != dim)
        throw ixg::ArgumentError(std::string(what) + ": expected " + std::to_string(dim) + " coordinates");
    return Eigen::Map<ixg::Point>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// FNV-1a over the canonical scenario text and LBG options.
std::string cache_key(const ixg::Scenario& sc, const ixg::LbgOptions& o) {
    std::string text = ixg::scenario_to_json(sc, -1);
    text += o.interface_cost == ixg::InterfaceCost::Zero ? "|zero" : "|chord";
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void print_warnings(const ixg::Scenario& sc) {
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << '\n';
}

ixg::LowerBoundGraph obtain_lbg(const ixg::GcsGraph& g, const ixg::Scenario& sc, const ixg::LbgOptions& o,
                                const std::string& cache) {
    const std::string key = cache_key(sc, o);
    if (!cache.empty() && std::filesystem::exists(cache)) {
        std::ifstream in(cache);
        try {
            return ixg::load_lbg(in, key);
        } catch (const ixg::StateError&) {
            std::cerr << "note: LBG cache '" << cache << "' is stale, rebuilding\n";
        }
    }
    ixg::LowerBoundGraph lbg = ixg::build_lbg(g, o);
    if (!cache.empty()) {
        std::ofstream out(cache);
        if (!out) throw ixg::ArgumentError("cannot write LBG cache '" + cache + "'");
        ixg::save_lbg(out, lbg, key);
    }
    return lbg;
}

struct PlanArgs {
    std::string scenario, start, goal, start_vel, goal_vel, algo = "ixgstar", lbg_cache, out, svg, stats;
    double eps = 1.0;
    int order = 3;
    int continuity = 1;
    bool allow_cycles = false;
    int max_visits = 3;
    bool escalate = false;
    bool trace = false;
    bool chord = false;
    long long max_expansions = 1'000'000;
    double max_seconds = std::numeric_limits<double>::infinity();
};

int run_plan(const PlanArgs& a) {
    const ixg::Scenario sc = ixg::load_scenario(a.scenario);
    print_warnings(sc);
    const int d = sc.dimension;
    ixg::Query q;
    q.start = parse_point(a.start, d, "--start");
    q.goal = parse_point(a.goal, d, "--goal");
    if (!a.start_vel.empty()) q.start_velocity = parse_point(a.start_vel, d, "--start-vel");
    if (!a.goal_vel.empty()) q.goal_velocity = parse_point(a.goal_vel, d, "--goal-vel");

    const ixg::GcsGraph g = ixg::build_graph(sc.sets);
    ixg::LbgOptions lo;
    lo.weights = sc.weights;
    lo.velocity = sc.velocity_or_unlimited();
    lo.interface_cost = a.chord ? ixg::InterfaceCost::Chord : ixg::InterfaceCost::Zero;

    ixg::PlannerConfig cfg;
    cfg.epsilon = a.eps;
    cfg.order = a.order;
    cfg.continuity = a.continuity;
    cfg.allow_cycles = a.allow_cycles;
    cfg.max_visits_per_vertex = a.max_visits;
    cfg.escalate_visits = a.escalate;
    cfg.weights = sc.weights;
    cfg.velocity = lo.velocity;
    cfg.trace = a.trace;
    cfg.max_expansions = a.max_expansions;
    cfg.max_seconds = a.max_seconds;
    cfg.check();

    ixg::PlanResult r;
    ixg::LowerBoundGraph lbg;
    if (a.algo == "oracle") {
        r = ixg::oracle_enumerate(g, q, a.allow_cycles ? a.max_visits : 1, cfg);
    } else {
        lbg = obtain_lbg(g, sc, lo, a.lbg_cache);
        const ixg::PlanningProblem pb = ixg::prepare(g, lbg, q);
        r = a.algo == "ixg" ? ixg::plan_ixg(pb, cfg) : ixg::plan_ixg_star(pb, cfg);
    }
    for (const auto& line : r.trace) std::cerr << line << '\n';

    std::cout << "status " << ixg::to_string(r.status) << '\n';
    if (r.status == ixg::PlanStatus::Solved) {
        std::cout << "cost " << r.cost << '\n' << "path";
        for (int v : r.path) std::cout << ' ' << v;
        std::cout << '\n';
    }
    std::cout << "expansions " << r.stats.expansions << "  optimized edges " << r.stats.solve_calls
              << "  time " << r.stats.wall_seconds << "s\n";

    if (!a.out.empty() && r.status == ixg::PlanStatus::Solved) {
        std::ofstream out(a.out);
        if (!out) throw ixg::ArgumentError("cannot write '" + a.out + "'");
        ixg::write_csv(out, r.trajectory);
    }
    if (!a.stats.empty()) {
        std::ofstream out(a.stats);
        if (!out) throw ixg::ArgumentError("cannot write '" + a.stats + "'");
        ixg::write_stats_json(out, r);
    }
    if (!a.svg.empty()) {
        ixg::emit_svg(a.svg, sc.sets, r.status == ixg::PlanStatus::Solved ? &r.trajectory : nullptr);
    }
    switch (r.status) {
        case ixg::PlanStatus::Solved: return kExitSolved;
        case ixg::PlanStatus::Infeasible: return kExitInfeasible;
        case ixg::PlanStatus::BudgetExhausted: return kExitBudget;
    }
    return kExitInput;
}

int run_lbg_build(const std::string& scenario, const std::string& out_path, bool chord, const std::string& svg) {
    const ixg::Scenario sc = ixg::load_scenario(scenario);
    print_warnings(sc);
    const ixg::GcsGraph g = ixg::build_graph(sc.sets);
    ixg::LbgOptions lo;
    lo.weights = sc.weights;
    lo.velocity = sc.velocity_or_unlimited();
    lo.interface_cost = chord ? ixg::InterfaceCost::Chord : ixg::InterfaceCost::Zero;
    const auto t0 = std::chrono::steady_clock::now();
    const ixg::LowerBoundGraph lbg = ixg::build_lbg(g, lo);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream out(out_path);
    if (!out) throw ixg::ArgumentError("cannot write '" + out_path + "'");
    ixg::save_lbg(out, lbg, cache_key(sc, lo));
    const auto rep = ixg::size_report(lbg, g);
    std::cout << "sets " << g.num_vertices() << "  edges " << g.num_edges() << '\n'
              << "lbg vertices " << rep.vertices << " (bound " << rep.vertex_bound << ")  edges " << rep.edges
              << " (bound " << rep.edge_bound << ")  max degree " << rep.max_degree << " (bound "
              << rep.degree_bound << ")\n"
              << "infeasible triplets " << lbg.infeasible_triplets() << "  build time " << secs << "s\n";
    if (!svg.empty()) ixg::emit_svg(svg, sc.sets, nullptr, &lbg);
    return kExitSolved;
}

int run_bench_cmd(const std::string& spec_path, const std::string& out_path) {
    const ixg::BenchSpec spec = ixg::load_bench_spec(spec_path);
    ixg::BenchInfo info;
    const auto recs = ixg::run_bench(spec, &info);
    std::ofstream out(out_path);
    if (!out) throw ixg::ArgumentError("cannot write '" + out_path + "'");
    ixg::write_records_csv(out, recs);
    std::cout << "sets " << info.num_sets << "  edges " << info.num_edges << "  lbg " << info.lbg_vertices
              << " vertices / " << info.lbg_edges << " edges, built in " << info.lbg_build_seconds << "s\n";
    ixg::print_summary(std::cout, recs);
    return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planning on graphs of convex sets with interleaved search and trajectory optimization"};
    app.require_subcommand(1);

    PlanArgs pa;
    auto* plan = app.add_subcommand("plan", "Plan one query");
    plan->add_option("--scenario", pa.scenario, "Scenario JSON")->required();
    plan->add_option("--start", pa.start, "Start point x,y[,z...]")->required();
    plan->add_option("--goal", pa.goal, "Goal point")->required();
    plan->add_option("--start-vel", pa.start_vel, "Start velocity (free when omitted)");
    plan->add_option("--goal-vel", pa.goal_vel, "Goal velocity (free when omitted)");
    plan->add_option("--algo", pa.algo, "ixg, ixgstar or oracle")
        ->check(CLI::IsMember({"ixg", "ixgstar", "oracle"}));
    plan->add_option("--eps", pa.eps, "Heuristic inflation (>= 1)");
    plan->add_option("--order", pa.order, "Bezier order per segment");
    plan->add_option("--continuity", pa.continuity, "0 or 1")->check(CLI::Range(0, 1));
    plan->add_flag("--allow-cycles", pa.allow_cycles, "Let paths revisit sets");
    plan->add_option("--max-visits", pa.max_visits, "Visits per set when cycles are allowed");
    plan->add_flag("--escalate", pa.escalate, "Double the visit budget on failure");
    plan->add_option("--lbg", pa.lbg_cache, "LBG cache file (read if valid, written otherwise)");
    plan->add_flag("--trace", pa.trace, "Print the expansion trace to stderr");
    plan->add_option("--out", pa.out, "Trajectory CSV");
    plan->add_option("--svg", pa.svg, "SVG of the world and trajectory (2D only)");
    plan->add_option("--stats", pa.stats, "Statistics JSON");
    plan->add_option("--max-expansions", pa.max_expansions, "Expansion budget");
    plan->add_option("--max-seconds", pa.max_seconds, "Time budget");
    auto* pz = plan->add_flag("--lbg-zero-interface", "Zero-cost interface edges (default)");
    plan->add_flag("--lbg-chord-interface", pa.chord, "Chord-cost interface edges (not admissible)")->excludes(pz);

    std::string lb_scenario, lb_out, lb_svg;
    bool lb_chord = false;
    auto* lb = app.add_subcommand("lbg-build", "Build and cache the lower bound graph");
    lb->add_option("--scenario", lb_scenario, "Scenario JSON")->required();
    lb->add_option("--out", lb_out, "Cache file")->required();
    lb->add_option("--svg", lb_svg, "SVG of the LBG (2D only)");
    auto* lz = lb->add_flag("--lbg-zero-interface", "Zero-cost interface edges (default)");
    lb->add_flag("--lbg-chord-interface", lb_chord, "Chord-cost interface edges (not admissible)")->excludes(lz);

    std::string b_spec, b_out;
    auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
    bench->add_option("--spec", b_spec, "Bench spec JSON")->required();
    bench->add_option("--out", b_out, "Results CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (plan->parsed()) return run_plan(pa);
        if (lb->parsed()) return run_lbg_build(lb_scenario, lb_out, lb_chord, lb_svg);
        if (bench->parsed()) return run_bench_cmd(b_spec, b_out);
    } catch (const ixg::QueryOutsideCover& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ixg::OracleTooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const ixg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
