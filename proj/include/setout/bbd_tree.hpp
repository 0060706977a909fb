#pragma once

#include <unordered_map>
#include <vector>

#include "setout/geometry.hpp"

namespace setout {

// Balanced box-decomposition tree over points in R^d. Nodes carry an outer
// box and, after a centroid shrink, a rectangular hole; children partition
// the parent region. Ball queries return canonical nodes whose active point
// sets sandwich the query ball between radius r and (1+eps)r.
//
// Per-node payload slots (accumulators, counts, active flags, representative,
// set stamps) are generic storage for the MWU, rounding and coreset passes;
// mutating passes require exclusive access.
class BbdTree {
  public:
    struct Node {
        std::vector<double> lo, hi;    // outer box
        std::vector<double> hlo, hhi;  // hole box, empty when absent
        int left = -1, right = -1, parent = -1;
        int begin = 0, end = 0;  // range of point ids in order()
        bool leaf = false;

        double acc_s = 0.0;  // u_s
        double acc_w = 0.0;  // u_w
        int count = 0;       // u.c: points below with active flags honored
        bool active = true;  // u.a
        int repr = -1;       // u.p: lowest-id active point below
        std::unordered_map<int, int> stamp;  // u.s with per-index counters
    };

    explicit BbdTree(const std::vector<Point>& pts, double query_eps = 0.1);

    int size() const { return static_cast<int>(nodes_.size()); }
    int root() const { return root_; }
    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    Node& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
    int leaf_of(int point_id) const { return leaf_of_[static_cast<std::size_t>(point_id)]; }
    const std::vector<int>& order() const { return order_; }
    int num_points() const { return static_cast<int>(points_->size()); }
    double query_eps() const { return eps_; }
    int height() const;

    // Canonical nodes for the ball B(x,r); inactive branches are pruned.
    // Active points below the result cover B(x,r) and stay within B(x,(1+eps)r).
    std::vector<int> ball_query(const Point& x, double r) const;
    std::vector<int> ball_query(const Point& x, double r, double eps) const;

    // All point ids below node_id, ignoring active flags.
    std::vector<int> points_in(int node_id) const;
    // Active point ids below node_id.
    void report_active(int node_id, std::vector<int>& out) const;
    std::vector<int> active_points() const;

    template <class F>
    void walk_up(int point_id, F&& fn) const {
        for (int u = leaf_of(point_id); u != -1; u = nodes_[static_cast<std::size_t>(u)].parent)
            fn(u);
    }

    // Marks the given canonical nodes inactive and repairs counts, active
    // flags and representatives on all ancestors.
    void deactivate(const std::vector<int>& canonical);
    void reset_accumulators();
    void reset_active();

  private:
    struct Group {
        Point coord;
        std::vector<int> ids;
    };

    int build(std::vector<int>& groups, int gb, int ge, std::vector<double> lo, std::vector<double> hi,
              std::vector<double> hlo, std::vector<double> hhi, int parent, int depth);
    void refresh(int node_id);

    const std::vector<Point>* points_;
    double eps_;
    std::vector<Group> groups_;
    std::vector<Node> nodes_;
    std::vector<int> order_;
    std::vector<int> leaf_of_;
    int root_ = -1;
};

}  // namespace setout
