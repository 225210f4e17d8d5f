#pragma once

// Benchmark sweeps: sampled queries x algorithms x epsilon, with a CSV log
// and a summary table.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/harness/oracle.hpp"
#include "ixg/harness/scenario.hpp"
#include "ixg/lbg.hpp"
#include "ixg/search.hpp"

namespace ixg {

struct BenchSpec {
    std::string scenario_path;
    std::optional<Scenario> scenario;  // used instead of scenario_path when set
    int queries = 50;
    std::uint64_t seed = 1;
    std::vector<double> eps{1.0};
    std::vector<std::string> algorithms{"ixgstar"};  // ixg, ixgstar, oracle
    int order = 3;
    int continuity = 1;
    bool allow_cycles = false;
    int max_visits = 3;
    long long max_expansions = 1'000'000;
    double max_seconds = std::numeric_limits<double>::infinity();
    int oracle_max_visits = 1;
    long long oracle_path_cap = 1'000'000;
    InterfaceCost interface_cost = InterfaceCost::Zero;
};

inline constexpr int kRunRecordSchema = 1;

struct RunRecord {
    int query = 0;
    std::string algorithm;
    double eps = 1.0;
    std::string status;
    double cost = std::numeric_limits<double>::infinity();
    double wall_seconds = 0.0;  // search only; LBG build and query wiring excluded
    long long expansions = 0;
    long long optimized_edges = 0;
    int max_subproblem_vars = 0;
};

struct BenchInfo {
    double lbg_build_seconds = 0.0;
    int num_sets = 0;
    int num_edges = 0;
    int lbg_vertices = 0;
    int lbg_edges = 0;
};

inline BenchSpec parse_bench_spec(const std::string& text, const std::string& base_dir = ".") {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("bench spec: malformed JSON at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) +
                         ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("bench spec: top level must be an object");
    BenchSpec s;
    const json& sc = detail::require(j, "scenario", "");
    if (sc.is_string()) {
        std::filesystem::path p(sc.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        s.scenario_path = p.string();
    } else if (sc.is_object()) {
        s.scenario = parse_scenario(sc.dump());
    } else {
        throw ParseError("bench spec: 'scenario' must be a path or an inline scenario");
    }
    try {
        if (j.contains("queries")) s.queries = j["queries"].get<int>();
        if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("eps")) s.eps = j["eps"].get<std::vector<double>>();
        if (j.contains("algorithms")) s.algorithms = j["algorithms"].get<std::vector<std::string>>();
        if (j.contains("order")) s.order = j["order"].get<int>();
        if (j.contains("continuity")) s.continuity = j["continuity"].get<int>();
        if (j.contains("allow_cycles")) s.allow_cycles = j["allow_cycles"].get<bool>();
        if (j.contains("max_visits")) s.max_visits = j["max_visits"].get<int>();
        if (j.contains("max_expansions")) s.max_expansions = j["max_expansions"].get<long long>();
        if (j.contains("max_seconds")) s.max_seconds = j["max_seconds"].get<double>();
        if (j.contains("oracle_max_visits")) s.oracle_max_visits = j["oracle_max_visits"].get<int>();
        if (j.contains("oracle_path_cap")) s.oracle_path_cap = j["oracle_path_cap"].get<long long>();
        if (j.contains("interface_cost")) {
            const auto ic = j["interface_cost"].get<std::string>();
            if (ic == "zero") s.interface_cost = InterfaceCost::Zero;
            else if (ic == "chord") s.interface_cost = InterfaceCost::Chord;
            else throw ParseError("bench spec: 'interface_cost' must be 'zero' or 'chord'");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bench spec: ") + e.what());
    }
    if (s.queries < 1) throw ParseError("bench spec: 'queries' must be positive");
    if (s.eps.empty()) throw ParseError("bench spec: 'eps' must not be empty");
    for (double e : s.eps)
        if (!(e >= 1.0)) throw ParseError("bench spec: every 'eps' must be >= 1");
    for (const auto& a : s.algorithms)
        if (a != "ixg" && a != "ixgstar" && a != "oracle")
            throw ParseError("bench spec: unknown algorithm '" + a + "'");
    return s;
}

inline BenchSpec load_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("bench spec: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_spec(ss.str(), std::filesystem::path(path).parent_path().string());
}

/// One record per (query, algorithm, eps); the oracle ignores eps and runs
/// once per query.
inline std::vector<RunRecord> run_bench(const BenchSpec& spec, BenchInfo* info = nullptr) {
    const Scenario sc = spec.scenario ? *spec.scenario : load_scenario(spec.scenario_path);
    const GcsGraph g = build_graph(sc.sets);
    LbgOptions lo;
    lo.weights = sc.weights;
    lo.velocity = sc.velocity_or_unlimited();
    lo.interface_cost = spec.interface_cost;
    const auto t0 = std::chrono::steady_clock::now();
    const LowerBoundGraph lbg = build_lbg(g, lo);
    if (info != nullptr) {
        info->lbg_build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        info->num_sets = g.num_vertices();
        info->num_edges = g.num_edges();
        info->lbg_vertices = lbg.num_vertices();
        info->lbg_edges = lbg.num_edges();
    }

    const std::vector<Query> queries = sample_queries(sc.sets, spec.queries, spec.seed);
    std::vector<RunRecord> out;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const Query& q = queries[qi];
        const PlanningProblem pb = prepare(g, lbg, q);
        for (const auto& algo : spec.algorithms) {
            const std::vector<double> eps_list = algo == "oracle" ? std::vector<double>{1.0} : spec.eps;
            for (double eps : eps_list) {
                PlannerConfig cfg;
                cfg.epsilon = eps;
                cfg.order = spec.order;
                cfg.continuity = spec.continuity;
                cfg.weights = sc.weights;
                cfg.velocity = lo.velocity;
                cfg.allow_cycles = spec.allow_cycles;
                cfg.max_visits_per_vertex = spec.max_visits;
                cfg.max_expansions = spec.max_expansions;
                cfg.max_seconds = spec.max_seconds;
                RunRecord rec;
                rec.query = static_cast<int>(qi);
                rec.algorithm = algo;
                rec.eps = eps;
                PlanResult r;
                try {
                    if (algo == "ixg") {
                        r = plan_ixg(pb, cfg);
                    } else if (algo == "ixgstar") {
                        r = plan_ixg_star(pb, cfg);
                    } else {
                        OracleOptions oo;
                        oo.path_cap = spec.oracle_path_cap;
                        oo.branch_and_bound = true;
                        r = oracle_enumerate(pb.graph, q, spec.oracle_max_visits, cfg, oo);
                    }
                    rec.status = to_string(r.status);
                } catch (const OracleTooLarge&) {
                    rec.status = "OracleTooLarge";
                }
                rec.cost = r.cost;
                rec.wall_seconds = r.stats.wall_seconds;
                rec.expansions = r.stats.expansions;
                rec.optimized_edges = r.stats.solve_calls;
                rec.max_subproblem_vars = r.stats.max_decision_vars;
                out.push_back(rec);
            }
        }
    }
    return out;
}

inline void write_records_csv(std::ostream& os, const std::vector<RunRecord>& recs) {
    os << "# ixg-results schema " << kRunRecordSchema << "\n";
    os << "query,algorithm,eps,status,cost,wall_seconds,expansions,optimized_edges,max_subproblem_vars\n";
    char buf[64];
    for (const auto& r : recs) {
        os << r.query << ',' << r.algorithm << ',';
        std::snprintf(buf, sizeof buf, "%g", r.eps);
        os << buf << ',' << r.status << ',';
        if (std::isfinite(r.cost)) {
            std::snprintf(buf, sizeof buf, "%.10g", r.cost);
            os << buf;
        } else {
            os << "inf";
        }
        std::snprintf(buf, sizeof buf, "%.6f", r.wall_seconds);
        os << ',' << buf << ',' << r.expansions << ',' << r.optimized_edges << ',' << r.max_subproblem_vars << '\n';
    }
}

struct BenchSummaryRow {
    std::string algorithm;
    double eps = 1.0;
    int runs = 0;
    int solved = 0;
    double mean_cost = 0.0;  // over solved runs
    double mean_seconds = 0.0;
    double mean_expansions = 0.0;
    double mean_optimized_edges = 0.0;
    double mean_max_vars = 0.0;
};

inline std::vector<BenchSummaryRow> summarize(const std::vector<RunRecord>& recs) {
    std::map<std::pair<std::string, double>, BenchSummaryRow> rows;
    std::vector<std::pair<std::string, double>> order;
    for (const auto& r : recs) {
        const auto k = std::make_pair(r.algorithm, r.eps);
        auto it = rows.find(k);
        if (it == rows.end()) {
            order.push_back(k);
            it = rows.emplace(k, BenchSummaryRow{r.algorithm, r.eps}).first;
        }
        auto& s = it->second;
        ++s.runs;
        s.mean_seconds += r.wall_seconds;
        s.mean_expansions += static_cast<double>(r.expansions);
        s.mean_optimized_edges += static_cast<double>(r.optimized_edges);
        s.mean_max_vars += r.max_subproblem_vars;
        if (r.status == "Solved") {
            ++s.solved;
            s.mean_cost += r.cost;
        }
    }
    std::vector<BenchSummaryRow> out;
    for (const auto& k : order) {
        auto s = rows[k];
        const double n = std::max(1, s.runs);
        s.mean_seconds /= n;
        s.mean_expansions /= n;
        s.mean_optimized_edges /= n;
        s.mean_max_vars /= n;
        s.mean_cost = s.solved > 0 ? s.mean_cost / s.solved : std::numeric_limits<double>::quiet_NaN();
        out.push_back(s);
    }
    return out;
}

inline void print_summary(std::ostream& os, const std::vector<RunRecord>& recs) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-8s %6s %5s %8s %12s %10s %11s %10s %9s\n", "algo", "eps", "runs", "success",
                  "mean cost", "mean time", "expansions", "opt.edges", "max vars");
    os << buf;
    for (const auto& s : summarize(recs)) {
        std::snprintf(buf, sizeof buf, "%-8s %6g %5d %7.1f%% %12.4f %9.4fs %11.1f %10.1f %9.1f\n", s.algorithm.c_str(),
                      s.eps, s.runs, 100.0 * s.solved / std::max(1, s.runs), s.mean_cost, s.mean_seconds,
                      s.mean_expansions, s.mean_optimized_edges, s.mean_max_vars);
        os << buf;
    }
}

}  // namespace ixg
