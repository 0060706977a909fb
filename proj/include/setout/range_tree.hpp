#pragma once

#include <vector>

#include "setout/geometry.hpp"

namespace setout {

// d-level range tree with exact canonical decompositions for rectangle
// queries. Canonical nodes live in the last-level (dimension d-1) subtrees;
// their point sets are pairwise disjoint and union exactly to rect cap P.
// Last-level nodes carry the payload slots used by the MWU Update and Round
// passes (weights v_s / v_w and the rectangle list u.list), and every point
// records its last-level leaves for bottom-up walks.
class RangeTree {
  public:
    struct LNode {
        int left = -1, right = -1, parent = -1;
        int begin = 0, end = 0;  // range in the owning subtree's point array
        int subtree = -1;        // owning last-level subtree id
        bool leaf = false;
        double s = 0.0;  // v_s: sigma mass below
        double w = 0.0;  // v_w: oracle-solution mass placed on this node
        std::vector<int> list;  // u.list: rectangle ids covering this node
    };

    explicit RangeTree(const std::vector<Point>& pts);

    int num_points() const { return static_cast<int>(points_->size()); }
    int dim() const { return dim_; }
    int num_last_nodes() const { return static_cast<int>(lnodes_.size()); }
    const LNode& lnode(int id) const { return lnodes_[static_cast<std::size_t>(id)]; }
    LNode& lnode(int id) { return lnodes_[static_cast<std::size_t>(id)]; }

    // Canonical last-level node ids whose point sets partition rect cap P.
    std::vector<int> query(const Box& rect) const;
    long long count(const Box& rect) const;
    std::vector<int> report(const Box& rect) const;
    std::vector<int> points_in_lnode(int id) const;

    // Last-level leaves containing a point (one per last-level subtree it
    // appears in); walking to each subtree root visits every last-level node
    // whose canonical set can contain the point.
    const std::vector<int>& leaves_of_point(int point_id) const {
        return point_leaves_[static_cast<std::size_t>(point_id)];
    }
    template <class F>
    void walk_up_all(int point_id, F&& fn) const {
        for (int leaf : point_leaves_[static_cast<std::size_t>(point_id)])
            for (int u = leaf; u != -1; u = lnodes_[static_cast<std::size_t>(u)].parent) fn(u);
    }

    // Recomputes every last-level node weight s as the sum of sigma over its
    // points (leaves up).
    void load_sigma(const std::vector<double>& sigma);
    void zero_w();
    void clear_lists();

  private:
    struct Level {  // balanced tree over an index range, one per level < d-1
        std::vector<int> pts;               // point ids sorted by this level's axis
        std::vector<int> left, right;       // children in this level tree
        std::vector<int> begin, end;        // index ranges
        std::vector<int> child_structure;   // id of next-level structure per node
        int root = -1;
    };

    int build_level(int axis, std::vector<int> pts);
    int build_last(std::vector<int> pts);
    int build_last_rec(int subtree, int b, int e, int parent);
    void canonical_range(int last_root_node, int L, int R, std::vector<int>& out) const;

    const std::vector<Point>* points_;
    int dim_ = 0;

    std::vector<Level> levels_;  // arena of level structures (levels 0..d-2)
    struct LastTree {
        std::vector<int> pts;  // sorted by axis d-1
        int root = -1;
    };
    std::vector<LastTree> last_;
    std::vector<LNode> lnodes_;
    std::vector<std::vector<int>> point_leaves_;
};

}  // namespace setout
