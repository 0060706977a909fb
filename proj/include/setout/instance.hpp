#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "setout/geometry.hpp"

namespace setout {

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// k-center with set outliers in a general metric. The distance is backed
// either by an explicit symmetric matrix or by coordinates under the
// Euclidean metric. Every element must belong to at least one set.
struct GeneralInstance {
    enum class Metric { Matrix, Euclidean };

    int n = 0;
    Metric metric = Metric::Matrix;
    std::vector<std::vector<double>> dist_matrix;  // n x n when metric == Matrix
    std::vector<Point> points;                     // when metric == Euclidean
    std::vector<std::vector<int>> sets;            // m subsets, sorted element indices
    std::vector<std::vector<int>> membership;      // L_i: sets containing element i

    int m() const { return static_cast<int>(sets.size()); }
    int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
    double dist(int i, int j) const {
        return metric == Metric::Matrix ? dist_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                        : dist_l2(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    }
    // f = max_i |L_i|; derived, never stored.
    int frequency() const {
        std::size_t f = 0;
        for (const auto& L : membership) f = std::max(f, L.size());
        return static_cast<int>(f);
    }
};

// Points in R^d with hyper-rectangle outlier candidates; a rectangle induces
// the subset of points it contains (closed intervals, open at +-inf).
struct GeometricInstance {
    std::vector<Point> points;
    std::vector<Box> rects;

    int n() const { return static_cast<int>(points.size()); }
    int m() const { return static_cast<int>(rects.size()); }
    int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }

    std::vector<int> rects_containing(int i) const {
        std::vector<int> out;
        for (int j = 0; j < m(); ++j)
            if (rects[static_cast<std::size_t>(j)].contains(points[static_cast<std::size_t>(i)])) out.push_back(j);
        return out;
    }
    int frequency() const {
        int f = 0;
        for (int i = 0; i < n(); ++i) f = std::max(f, static_cast<int>(rects_containing(i).size()));
        return f;
    }
    // Materialize the induced set system (used by oracles and cross-checks).
    GeneralInstance to_general() const;
};

using Instance = std::variant<GeneralInstance, GeometricInstance>;

struct Params {
    int k = 1;
    int z = 1;
    double eps = 0.2;
};

inline void check_params(const Params& p) {
    if (p.k < 1) throw InstanceError("params: k must be >= 1");
    if (p.z < 1) throw InstanceError("params: z must be >= 1");
    if (!(p.eps > 0.0 && p.eps < 1.0)) throw InstanceError("params: eps must lie in (0,1)");
}

// Approximation factors a solution claims to satisfy, kept for audit.
struct BoundsClaim {
    double mu_centers = 1.0;
    double mu_outliers = 1.0;
    double mu_cost = 1.0;
};

struct TriSolution {
    std::vector<int> centers;
    std::vector<int> outliers;  // set indices (or rectangle / tuple ids, per problem)
    double radius = 0.0;
    BoundsClaim bounds;
};

// Max over non-excluded elements of min distance to centers. Returns 0 when
// every element is excluded; infinity when centers are empty but survivors
// remain. Ties resolve by lowest index by construction of the scan order.
double clustering_cost(const GeneralInstance& inst, const std::vector<int>& centers,
                       const std::vector<bool>& excluded);
double clustering_cost(const std::vector<Point>& pts, const std::vector<int>& centers,
                       const std::vector<bool>& excluded);

std::vector<bool> excluded_mask_general(const GeneralInstance& inst, const std::vector<int>& outlier_sets);
std::vector<bool> excluded_mask_geometric(const GeometricInstance& inst, const std::vector<int>& outlier_rects);

// Builds a TriSolution whose radius is recomputed from scratch (the stored
// radius of a solver is never trusted).
TriSolution make_solution(const GeneralInstance& inst, std::vector<int> centers,
                          std::vector<int> outlier_sets, BoundsClaim bounds);
TriSolution make_solution(const GeometricInstance& inst, std::vector<int> centers,
                          std::vector<int> outlier_rects, BoundsClaim bounds);

struct ValidityReport {
    bool indices_ok = true;
    bool disjoint_ok = true;       // no center inside the chosen outlier union
    bool centers_within = true;    // |C| <= mu1 * k
    bool outliers_within = true;   // |H| <= mu2 * z
    double radius = 0.0;           // recomputed, never taken from the solution
    std::vector<std::string> problems;

    bool ok() const { return indices_ok && disjoint_ok && centers_within && outliers_within; }
};

ValidityReport validate_solution(const GeneralInstance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu);
ValidityReport validate_solution(const GeometricInstance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu);
ValidityReport validate_solution(const Instance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu);

}  // namespace setout
