#pragma once

// Scenario files (JSON), query sampling, and the built-in revisit world.

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/generators.hpp"
#include "ixg/geometry/convex_set.hpp"
#include "ixg/trajopt/trajectory.hpp"

namespace ixg {

struct MazeSpec {
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    double overlap = 0.02;
};

struct BoxWorldSpec {
    Point lo;
    Point hi;
    int count = 0;
    std::uint64_t seed = 0;
};

struct Scenario {
    int dimension = 0;
    /// Materialized sets; for generator scenarios these come from the generator.
    std::vector<ConvexSet> sets;
    std::optional<MazeSpec> maze;
    std::optional<BoxWorldSpec> boxworld;
    VelocitySet velocity;  // empty vmax means unlimited
    CostWeights weights;
    std::vector<Query> queries;
    std::vector<std::string> warnings;  // unknown keys and similar

    bool from_generator() const { return maze.has_value() || boxworld.has_value(); }

    VelocitySet velocity_or_unlimited() const {
        if (velocity.dim() > 0) return velocity;
        return VelocitySet::uniform(dimension, std::numeric_limits<double>::infinity());
    }
};

namespace detail {

using json = nlohmann::json;

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline void warn_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where,
                         std::vector<std::string>& warnings) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) warnings.push_back("unknown key '" + where + it.key() + "' ignored");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError("scenario: '" + where + "' must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("scenario: missing required key '" + where + key + "'");
    return *it;
}

inline Eigen::VectorXd vec(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("scenario: '" + where + "' must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError("scenario: '" + where + "' must be an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

inline double num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError("scenario: '" + where + "' must be a number");
    return j.get<double>();
}

inline json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

// Axis-aligned box as (lo, hi) when every row has a single nonzero.
inline std::optional<std::pair<Point, Point>> as_box(const ConvexSet& s) {
    const int d = s.dim();
    if (s.num_halfspaces() != 2 * d) return std::nullopt;
    Point lo = Point::Constant(d, -std::numeric_limits<double>::infinity());
    Point hi = Point::Constant(d, std::numeric_limits<double>::infinity());
    for (int r = 0; r < s.num_halfspaces(); ++r) {
        int axis = -1;
        for (int c = 0; c < d; ++c) {
            if (s.normals()(r, c) == 0.0) continue;
            if (axis >= 0) return std::nullopt;
            axis = c;
        }
        if (axis < 0) return std::nullopt;
        const double a = s.normals()(r, axis);
        if (a > 0) hi[axis] = s.offsets()[r] / a;
        else lo[axis] = s.offsets()[r] / a;
    }
    if (!lo.allFinite() || !hi.allFinite()) return std::nullopt;
    return std::make_pair(lo, hi);
}

inline Query parse_query(const json& j, int d, const std::string& where, std::vector<std::string>& warnings) {
    Query q;
    q.start = vec(require(j, "start", where), where + "start");
    q.goal = vec(require(j, "goal", where), where + "goal");
    if (j.contains("start_velocity")) q.start_velocity = vec(j["start_velocity"], where + "start_velocity");
    if (j.contains("goal_velocity")) q.goal_velocity = vec(j["goal_velocity"], where + "goal_velocity");
    warn_unknown(j, {"start", "goal", "start_velocity", "goal_velocity"}, where, warnings);
    auto check = [&](const Eigen::VectorXd& v, const char* name) {
        if (v.size() != d) throw ParseError("scenario: '" + where + name + "' has the wrong dimension");
    };
    check(q.start, "start");
    check(q.goal, "goal");
    if (q.start_velocity) check(*q.start_velocity, "start_velocity");
    if (q.goal_velocity) check(*q.goal_velocity, "goal_velocity");
    return q;
}

}  // namespace detail

/// Parses scenario JSON. `text` is kept only to report error locations.
inline Scenario parse_scenario(const std::string& text) {
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("scenario: malformed JSON at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) +
                         ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario: top level must be an object");

    Scenario sc;
    const json& dim = detail::require(j, "dimension", "");
    if (!dim.is_number_integer() || dim.get<int>() < 1)
        throw ParseError("scenario: 'dimension' must be a positive integer");
    sc.dimension = dim.get<int>();
    const int d = sc.dimension;
    detail::warn_unknown(j, {"dimension", "sets", "generator", "velocity", "weights", "queries"}, "", sc.warnings);

    const bool has_sets = j.contains("sets");
    const bool has_gen = j.contains("generator");
    if (has_sets == has_gen) throw ParseError("scenario: exactly one of 'sets' and 'generator' is required");

    if (has_sets) {
        const json& sets = j["sets"];
        if (!sets.is_array() || sets.empty()) throw ParseError("scenario: 'sets' must be a nonempty array");
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const std::string where = "sets[" + std::to_string(i) + "].";
            const json& s = sets[i];
            if (!s.is_object()) throw ParseError("scenario: '" + where + "' must be an object");
            std::string label = s.contains("label") && s["label"].is_string() ? s["label"].get<std::string>()
                                                                               : "set" + std::to_string(i);
            detail::warn_unknown(s, {"box", "normals", "offsets", "label"}, where, sc.warnings);
            try {
                if (s.contains("box")) {
                    const json& b = s["box"];
                    Point lo = detail::vec(detail::require(b, "lo", where + "box."), where + "box.lo");
                    Point hi = detail::vec(detail::require(b, "hi", where + "box."), where + "box.hi");
                    if (lo.size() != d || hi.size() != d)
                        throw ParseError("scenario: '" + where + "box' has the wrong dimension");
                    if ((hi.array() < lo.array()).any()) throw ParseError("scenario: '" + where + "box' has lo > hi");
                    sc.sets.push_back(ConvexSet::box(lo, hi, label));
                } else {
                    const json& nj = detail::require(s, "normals", where);
                    Eigen::VectorXd b = detail::vec(detail::require(s, "offsets", where), where + "offsets");
                    if (!nj.is_array() || nj.size() != static_cast<std::size_t>(b.size()))
                        throw ParseError("scenario: '" + where + "normals' must have one row per offset");
                    Eigen::MatrixXd A(b.size(), d);
                    for (std::size_t r = 0; r < nj.size(); ++r) {
                        Eigen::VectorXd row = detail::vec(nj[r], where + "normals");
                        if (row.size() != d) throw ParseError("scenario: '" + where + "normals' has the wrong dimension");
                        A.row(static_cast<Eigen::Index>(r)) = row.transpose();
                    }
                    sc.sets.emplace_back(std::move(A), std::move(b), label);
                }
            } catch (const ArgumentError& e) {
                throw ParseError("scenario: '" + where + "': " + e.what());
            }
        }
    } else {
        const json& g = j["generator"];
        if (!g.is_object() || g.size() != 1) throw ParseError("scenario: 'generator' must hold one of 'maze', 'boxworld'");
        if (g.contains("maze")) {
            const json& m = g["maze"];
            if (d != 2) throw ParseError("scenario: 'generator.maze' requires dimension 2");
            MazeSpec ms;
            ms.rows = static_cast<int>(detail::num(detail::require(m, "rows", "generator.maze."), "generator.maze.rows"));
            ms.cols = static_cast<int>(detail::num(detail::require(m, "cols", "generator.maze."), "generator.maze.cols"));
            ms.seed = detail::require(m, "seed", "generator.maze.").get<std::uint64_t>();
            if (m.contains("overlap")) ms.overlap = detail::num(m["overlap"], "generator.maze.overlap");
            detail::warn_unknown(m, {"rows", "cols", "seed", "overlap"}, "generator.maze.", sc.warnings);
            try {
                sc.sets = generate_maze(ms.rows, ms.cols, ms.seed, ms.overlap).sets;
            } catch (const ArgumentError& e) {
                throw ParseError(std::string("scenario: 'generator.maze': ") + e.what());
            }
            sc.maze = ms;
        } else if (g.contains("boxworld")) {
            const json& b = g["boxworld"];
            BoxWorldSpec bs;
            bs.lo = detail::vec(detail::require(b, "lo", "generator.boxworld."), "generator.boxworld.lo");
            bs.hi = detail::vec(detail::require(b, "hi", "generator.boxworld."), "generator.boxworld.hi");
            bs.count = static_cast<int>(detail::num(detail::require(b, "count", "generator.boxworld."), "generator.boxworld.count"));
            bs.seed = detail::require(b, "seed", "generator.boxworld.").get<std::uint64_t>();
            detail::warn_unknown(b, {"lo", "hi", "count", "seed"}, "generator.boxworld.", sc.warnings);
            if (bs.lo.size() != d || bs.hi.size() != d)
                throw ParseError("scenario: 'generator.boxworld' bounds have the wrong dimension");
            try {
                sc.sets = generate_box_world(BoundingBox{bs.lo, bs.hi}, bs.count, bs.seed);
            } catch (const ArgumentError& e) {
                throw ParseError(std::string("scenario: 'generator.boxworld': ") + e.what());
            }
            sc.boxworld = bs;
        } else {
            throw ParseError("scenario: 'generator' must hold one of 'maze', 'boxworld'");
        }
    }

    if (j.contains("velocity")) {
        const json& v = j["velocity"];
        const json& vm = detail::require(v, "vmax", "velocity.");
        detail::warn_unknown(v, {"vmax"}, "velocity.", sc.warnings);
        try {
            if (vm.is_number()) {
                sc.velocity = VelocitySet::uniform(d, vm.get<double>());
            } else {
                Eigen::VectorXd lim = detail::vec(vm, "velocity.vmax");
                if (lim.size() != d) throw ParseError("scenario: 'velocity.vmax' has the wrong dimension");
                sc.velocity = VelocitySet(lim);
            }
        } catch (const ArgumentError& e) {
            throw ParseError(std::string("scenario: 'velocity': ") + e.what());
        }
    }
    if (j.contains("weights")) {
        const json& w = j["weights"];
        detail::warn_unknown(w, {"a", "b"}, "weights.", sc.warnings);
        const double a = w.contains("a") ? detail::num(w["a"], "weights.a") : 1.0;
        const double b = w.contains("b") ? detail::num(w["b"], "weights.b") : 1.0;
        try {
            sc.weights = CostWeights(a, b);
        } catch (const ArgumentError& e) {
            throw ParseError(std::string("scenario: 'weights': ") + e.what());
        }
    }
    if (j.contains("queries")) {
        const json& qs = j["queries"];
        if (!qs.is_array()) throw ParseError("scenario: 'queries' must be an array");
        for (std::size_t i = 0; i < qs.size(); ++i)
            sc.queries.push_back(detail::parse_query(qs[i], d, "queries[" + std::to_string(i) + "].", sc.warnings));
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("scenario: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

/// Generator scenarios are saved as their generator spec, others set by set.
inline std::string scenario_to_json(const Scenario& sc, int indent = 2) {
    using detail::json;
    json j;
    j["dimension"] = sc.dimension;
    if (sc.maze) {
        j["generator"]["maze"] = {{"rows", sc.maze->rows}, {"cols", sc.maze->cols}, {"seed", sc.maze->seed},
                                  {"overlap", sc.maze->overlap}};
    } else if (sc.boxworld) {
        j["generator"]["boxworld"] = {{"lo", detail::to_json(sc.boxworld->lo)},
                                      {"hi", detail::to_json(sc.boxworld->hi)},
                                      {"count", sc.boxworld->count},
                                      {"seed", sc.boxworld->seed}};
    } else {
        json sets = json::array();
        for (const auto& s : sc.sets) {
            json o;
            if (auto b = detail::as_box(s)) {
                o["box"] = {{"lo", detail::to_json(b->first)}, {"hi", detail::to_json(b->second)}};
            } else {
                json rows = json::array();
                for (Eigen::Index r = 0; r < s.normals().rows(); ++r)
                    rows.push_back(detail::to_json(s.normals().row(r).transpose()));
                o["normals"] = rows;
                o["offsets"] = detail::to_json(s.offsets());
            }
            if (!s.label().empty()) o["label"] = s.label();
            sets.push_back(o);
        }
        j["sets"] = sets;
    }
    if (sc.velocity.dim() > 0) j["velocity"]["vmax"] = detail::to_json(sc.velocity.vmax);
    j["weights"] = {{"a", sc.weights.a}, {"b", sc.weights.b}};
    if (!sc.queries.empty()) {
        json qs = json::array();
        for (const auto& q : sc.queries) {
            json o{{"start", detail::to_json(q.start)}, {"goal", detail::to_json(q.goal)}};
            if (q.start_velocity) o["start_velocity"] = detail::to_json(*q.start_velocity);
            if (q.goal_velocity) o["goal_velocity"] = detail::to_json(*q.goal_velocity);
            qs.push_back(o);
        }
        j["queries"] = qs;
    }
    return j.dump(indent) + "\n";
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("scenario: cannot write '" + path + "'");
    out << scenario_to_json(sc);
}

/// Uniform point in the bounding box of the cover that lies inside some set
/// and at least `margin` away from every set boundary.
template <class Rng>
Point sample_free_point(const std::vector<ConvexSet>& sets, const BoundingBox& box, Rng& rng, double margin = 1e-3,
                        int max_tries = 100000) {
    const auto d = box.lo.size();
    Point p(d);
    for (int tries = 0; tries < max_tries; ++tries) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
        }
        bool inside = false;
        bool near = false;
        for (const auto& s : sets) {
            const double v = s.max_violation(p);
            if (std::abs(v) < margin) near = true;
            if (v <= -margin) inside = true;
        }
        if (inside && !near) return p;
    }
    throw ArgumentError("sample_free_point: no admissible point found");
}

inline BoundingBox cover_box(const std::vector<ConvexSet>& sets) {
    if (sets.empty()) throw ArgumentError("cover_box: no sets");
    BoundingBox box = bounding_box(sets.front());
    for (const auto& s : sets) {
        const BoundingBox b = bounding_box(s);
        box.lo = box.lo.cwiseMin(b.lo);
        box.hi = box.hi.cwiseMax(b.hi);
    }
    return box;
}

/// `n` reproducible start/goal pairs drawn inside the cover.
inline std::vector<Query> sample_queries(const std::vector<ConvexSet>& sets, int n, std::uint64_t seed,
                                         double margin = 1e-3) {
    std::mt19937_64 rng(seed);
    const BoundingBox box = cover_box(sets);
    std::vector<Query> qs;
    for (int i = 0; i < n; ++i) {
        Query q;
        q.start = sample_free_point(sets, box, rng, margin);
        q.goal = sample_free_point(sets, box, rng, margin);
        qs.push_back(std::move(q));
    }
    return qs;
}

/// Four boxes around a square obstacle [1, 5] x [1, 5]: bottom (start set),
/// left, top and right. The start moves left at full speed toward the left
/// box and the goal lies to its right in the same bottom box, so with C1
/// continuity the trajectory has to leave the bottom box and come back.
inline Scenario loop_world() {
    Scenario sc;
    sc.dimension = 2;
    auto box = [](double x0, double y0, double x1, double y1, const char* label) {
        Point lo(2), hi(2);
        lo << x0, y0;
        hi << x1, y1;
        return ConvexSet::box(lo, hi, label);
    };
    sc.sets.push_back(box(0.0, 0.0, 6.0, 1.0, "bottom"));
    sc.sets.push_back(box(-3.0, 0.0, 1.0, 6.0, "left"));
    sc.sets.push_back(box(-3.0, 5.0, 6.0, 6.0, "top"));
    sc.sets.push_back(box(5.0, 0.0, 6.0, 6.0, "right"));
    sc.velocity = VelocitySet::uniform(2, 1.0);
    sc.weights = CostWeights(1.0, 1.0);
    Query q;
    q.start = Point(2);
    q.start << 1.5, 0.5;
    q.goal = Point(2);
    q.goal << 4.5, 0.5;
    q.start_velocity = Eigen::Vector2d(-1.0, 0.0);
    sc.queries.push_back(q);
    return sc;
}

}  // namespace ixg
