#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "setout/geometry.hpp"
#include "setout/instance.hpp"

namespace setout {

// Deterministic generator used for sampling and trial partitions; xorshift
// keeps streams identical across platforms.
struct SplitRng {
    std::uint64_t s;
    explicit SplitRng(std::uint64_t seed) : s(seed * 0x9e3779b97f4a7c15ull + 1) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    long long below64(long long n) { return static_cast<long long>(next() % static_cast<std::uint64_t>(n)); }
};

struct Relation {
    std::string name;
    std::vector<int> attrs;                    // global attribute ids
    std::vector<std::vector<double>> tuples;   // values aligned with attrs
};

struct RelationalDatabase {
    std::vector<std::string> attr_names;
    std::vector<Relation> relations;

    int num_attrs() const { return static_cast<int>(attr_names.size()); }
    int num_relations() const { return static_cast<int>(relations.size()); }
    long long total_tuples() const {
        long long n = 0;
        for (const auto& r : relations) n += static_cast<long long>(r.tuples.size());
        return n;
    }
};

struct JoinTree {
    std::vector<int> parent;  // per relation, -1 for the root
    std::vector<int> order;   // children before parents
    int root = -1;
};

// GYO-style ear removal; nullopt when the query is not acyclic.
std::optional<JoinTree> build_join_tree(const RelationalDatabase& db);
std::string join_tree_dot(const RelationalDatabase& db, const JoinTree& tree);

// Schema JSON ({"relations":[{"name","attrs":[...],"csv":...}]}) plus one
// CSV per relation with a header row of attribute names.
RelationalDatabase load_relational(const std::string& schema_json_path);

struct MaterializeRefused : InstanceError {
    using InstanceError::InstanceError;
};

// Yannakakis evaluation over one (possibly box-filtered) database: full
// semi-join reduction, per-tuple subtree counts, exact counting, streaming
// enumeration and uniform sampling. Immutable after construction.
class JoinEvaluator {
  public:
    JoinEvaluator(const RelationalDatabase& db, const JoinTree& tree);
    JoinEvaluator(const RelationalDatabase& db, const JoinTree& tree, const Box& box,
                  const std::vector<std::vector<char>>* tuple_mask = nullptr);

    long long count() const { return total_; }
    // Exact duplicate-free join results as d-dimensional points; refuses
    // above the cap.
    std::vector<Point> materialize(long long cap) const;
    // Streams results in a deterministic DFS order until fn returns false.
    void enumerate(const std::function<bool(const Point&)>& fn) const;
    // One uniform draw (with replacement across calls).
    Point sample(SplitRng& rng) const;
    // Values of one attribute that appear in some join result.
    std::vector<double> attribute_values(int attr) const;

  private:
    struct Edge {  // child -> parent matching info
        std::vector<int> shared_child_cols;
        std::vector<int> shared_parent_cols;
    };
    void reduce_and_count();
    bool assemble(int rel, int row, Point& out) const;

    const RelationalDatabase* db_;
    const JoinTree* tree_;
    std::vector<std::vector<char>> keep_;                 // surviving tuples per relation
    std::vector<std::vector<long long>> cnt_;             // subtree counts per tuple
    std::vector<Edge> edges_;                             // per relation (to its parent)
    std::vector<std::vector<int>> children_;
    // per relation: key (values on shared-with-parent cols) -> rows
    std::vector<std::map<std::vector<double>, std::vector<int>>> by_key_;
    long long total_ = 0;
};

// Rectangle-restricted oracles. One evaluation pass per (db, box); samples are drawn
// from the pass.
long long count_rect(const RelationalDatabase& db, const JoinTree& tree, const Box& box);
std::vector<Point> sample_rect(const RelationalDatabase& db, const JoinTree& tree, const Box& box, int s,
                               SplitRng& rng);

// The l-th smallest L-infinity distance among all result pairs, via binary
// search over per-axis value gaps with count_rect-based pair counting.
double linf_kth_distance(const RelationalDatabase& db, const JoinTree& tree, long long ell);

// Candidate L-infinity scales: all per-axis gaps of the join projection
// (every pairwise L-infinity distance is one of them), with 0 prepended.
std::vector<double> linf_candidates(const RelationalDatabase& db, const JoinTree& tree);

struct RelClusterResult {
    std::vector<Point> centers;  // S, join results
    double r_s = 0.0;            // rho(S, Q) <= r_s <= 2 sqrt(d) rho*_k(Q)
    double linf_cover = 0.0;     // exact L-infinity coverage radius of S
};

// Greedy cube-cover k-center over the join: binary search on the gap values;
// per guess, uncovered results are pulled out of the complement of the
// chosen 2r cubes. Deterministic.
RelClusterResult rel_cluster(const RelationalDatabase& db, const JoinTree& tree, int k);

}  // namespace setout
