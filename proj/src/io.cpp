#include "setout/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace setout {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

json endpoint_to_json(const Interval& iv, bool high) {
    if (high) return iv.hi_inf ? json("+inf") : json(iv.hi);
    return iv.lo_inf ? json("-inf") : json(iv.lo);
}

void endpoint_from_json(const json& v, Interval& iv, bool high, const std::string& where) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "+inf" && high) {
            iv.hi_inf = true;
            return;
        }
        if (s == "-inf" && !high) {
            iv.lo_inf = true;
            return;
        }
        throw ParseError("bad endpoint \"" + s + "\" in " + where);
    }
    if (!v.is_number()) throw ParseError("endpoint is neither number nor inf-string in " + where);
    (high ? iv.hi : iv.lo) = v.get<double>();
}

std::vector<Point> points_from_json(const json& j, int d, const std::string& where) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw ParseError(where + ": point " + std::to_string(i) + " has dimension " +
                             std::to_string(row.size()) + ", expected " + std::to_string(d));
        Point p;
        for (const auto& v : row) p.push_back(v.get<double>());
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace

void check_general(const GeneralInstance& inst) {
    if (inst.n <= 0) throw ParseError("general instance: n must be positive");
    if (inst.sets.empty()) throw ParseError("general instance: empty set family");
    for (std::size_t j = 0; j < inst.sets.size(); ++j)
        for (int i : inst.sets[j])
            if (i < 0 || i >= inst.n)
                throw ParseError("set " + std::to_string(j) + " references element " + std::to_string(i) +
                                 " out of range");
    std::vector<bool> covered(static_cast<std::size_t>(inst.n), false);
    for (const auto& s : inst.sets)
        for (int i : s) covered[static_cast<std::size_t>(i)] = true;
    for (int i = 0; i < inst.n; ++i)
        if (!covered[static_cast<std::size_t>(i)])
            throw CoverageError("element " + std::to_string(i) + " belongs to no set");

    if (inst.metric == GeneralInstance::Metric::Matrix) {
        const auto& D = inst.dist_matrix;
        if (static_cast<int>(D.size()) != inst.n)
            throw ParseError("dist_matrix has " + std::to_string(D.size()) + " rows, expected " +
                             std::to_string(inst.n));
        for (int i = 0; i < inst.n; ++i) {
            const auto& row = D[static_cast<std::size_t>(i)];
            if (static_cast<int>(row.size()) != inst.n)
                throw ParseError("dist_matrix row " + std::to_string(i) + " has wrong length");
            if (row[static_cast<std::size_t>(i)] != 0.0)
                throw MetricError("dist(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
        }
        for (int i = 0; i < inst.n; ++i)
            for (int j = i + 1; j < inst.n; ++j) {
                double dij = D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (dij < 0.0)
                    throw MetricError("negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
                if (dij != D[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
                    throw MetricError("asymmetric distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        if (inst.n <= kTriangleCheckCap) {
            for (int i = 0; i < inst.n; ++i)
                for (int j = 0; j < inst.n; ++j)
                    for (int k = 0; k < inst.n; ++k) {
                        const double direct = inst.dist(i, j);
                        const double via = inst.dist(i, k) + inst.dist(k, j);
                        // rounding slack for matrices derived from float coordinates
                        if (direct > via + 1e-9 * std::max(1.0, direct))
                            throw MetricError("triangle inequality violated by triple (" + std::to_string(i) + "," +
                                              std::to_string(j) + "," + std::to_string(k) + ")");
                    }
        }
    } else {
        if (static_cast<int>(inst.points.size()) != inst.n)
            throw ParseError("points count does not match n");
    }
    if (static_cast<int>(inst.membership.size()) != inst.n) throw ParseError("membership index not built");
}

void check_geometric(const GeometricInstance& inst) {
    if (inst.points.empty()) throw ParseError("geometric instance: no points");
    if (inst.rects.empty()) throw ParseError("geometric instance: empty rectangle family");
    const int d = inst.dim();
    for (std::size_t i = 0; i < inst.points.size(); ++i)
        if (static_cast<int>(inst.points[i].size()) != d)
            throw ParseError("point " + std::to_string(i) + " has inconsistent dimension");
    for (std::size_t j = 0; j < inst.rects.size(); ++j) {
        const Box& b = inst.rects[j];
        if (b.dim() != d) throw ParseError("rect " + std::to_string(j) + " has dimension mismatch");
        for (const auto& a : b.iv)
            if (!a.lo_inf && !a.hi_inf && a.lo > a.hi)
                throw ParseError("rect " + std::to_string(j) + " has lo > hi");
    }
    for (int i = 0; i < inst.n(); ++i)
        if (inst.rects_containing(i).empty())
            throw CoverageError("point " + std::to_string(i) + " lies in no rectangle");
}

namespace {

void build_membership(GeneralInstance& g) {
    g.membership.assign(static_cast<std::size_t>(g.n), {});
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "general") {
        GeneralInstance g;
        g.n = j.at("n").get<int>();
        if (j.contains("dist_matrix") && !j["dist_matrix"].is_null()) {
            g.metric = GeneralInstance::Metric::Matrix;
            for (const auto& row : j["dist_matrix"]) g.dist_matrix.push_back(row.get<std::vector<double>>());
        } else if (j.contains("points") && !j["points"].is_null()) {
            g.metric = GeneralInstance::Metric::Euclidean;
            g.points = points_from_json(j["points"], j.at("d").get<int>(), "general instance");
            if (static_cast<int>(g.points.size()) != g.n) throw ParseError("points count does not match n");
        } else {
            throw ParseError("general instance needs dist_matrix or points");
        }
        if (!j.contains("sets") || j["sets"].is_null()) throw ParseError("general instance needs sets");
        for (const auto& s : j["sets"]) {
            auto v = s.get<std::vector<int>>();
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            g.sets.push_back(std::move(v));
        }
        build_membership(g);
        check_general(g);
        return g;
    }
    if (kind == "geometric") {
        GeometricInstance g;
        const int d = j.at("d").get<int>();
        g.points = points_from_json(j.at("points"), d, "geometric instance");
        if (j.contains("n") && j["n"].get<int>() != static_cast<int>(g.points.size()))
            throw ParseError("n does not match points length");
        for (std::size_t r = 0; r < j.at("rects").size(); ++r) {
            const auto& jr = j["rects"][r];
            Box b;
            const auto& lo = jr.at("lo");
            const auto& hi = jr.at("hi");
            if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
                throw ParseError("rect " + std::to_string(r) + " has wrong dimension");
            for (int a = 0; a < d; ++a) {
                Interval iv;
                endpoint_from_json(lo[static_cast<std::size_t>(a)], iv, false, "rect " + std::to_string(r));
                endpoint_from_json(hi[static_cast<std::size_t>(a)], iv, true, "rect " + std::to_string(r));
                b.iv.push_back(iv);
            }
            g.rects.push_back(std::move(b));
        }
        check_geometric(g);
        return g;
    }
    throw ParseError("unknown instance kind: \"" + kind + "\"");
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string dump_instance(const Instance& inst) {
    json j;
    if (std::holds_alternative<GeneralInstance>(inst)) {
        const auto& g = std::get<GeneralInstance>(inst);
        j["kind"] = "general";
        j["n"] = g.n;
        if (g.metric == GeneralInstance::Metric::Matrix) {
            j["d"] = nullptr;
            j["points"] = nullptr;
            j["dist_matrix"] = g.dist_matrix;
        } else {
            j["d"] = g.dim();
            j["points"] = g.points;
            j["dist_matrix"] = nullptr;
        }
        j["sets"] = g.sets;
        j["rects"] = nullptr;
    } else {
        const auto& g = std::get<GeometricInstance>(inst);
        j["kind"] = "geometric";
        j["n"] = g.n();
        j["d"] = g.dim();
        j["points"] = g.points;
        j["dist_matrix"] = nullptr;
        j["sets"] = nullptr;
        json rects = json::array();
        for (const Box& b : g.rects) {
            json lo = json::array(), hi = json::array();
            for (const auto& iv : b.iv) {
                lo.push_back(endpoint_to_json(iv, false));
                hi.push_back(endpoint_to_json(iv, true));
            }
            rects.push_back(json{{"lo", lo}, {"hi", hi}});
        }
        j["rects"] = rects;
    }
    return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) { write_file(path, dump_instance(inst)); }

TriSolution parse_solution(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    TriSolution s;
    s.centers = j.at("centers").get<std::vector<int>>();
    s.outliers = j.at("outliers").get<std::vector<int>>();
    s.radius = j.at("radius").get<double>();
    return s;
}

TriSolution load_solution(const std::string& path) { return parse_solution(read_file(path)); }

std::string dump_solution(const TriSolution& sol) {
    json j;
    j["centers"] = sol.centers;
    j["outliers"] = sol.outliers;
    j["radius"] = sol.radius;
    return j.dump(2) + "\n";
}

void save_solution(const TriSolution& sol, const std::string& path) { write_file(path, dump_solution(sol)); }

}  // namespace setout
