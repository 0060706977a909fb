#pragma once

#include <memory>
#include <optional>

#include "setout/bbd_tree.hpp"
#include "setout/constants.hpp"
#include "setout/cso_disjoint.hpp"
#include "setout/instance.hpp"
#include "setout/mwu.hpp"
#include "setout/range_tree.hpp"

namespace setout {

// LP3 at one radius, represented implicitly by a BBD tree and a range tree.
// The neighborhood S^eps of a constraint point is *defined* by the canonical
// ball query, so the dense reference built from materialize_cover() agrees
// with the tree computation exactly.
class GeoLpSystem final : public MwuOracle {
  public:
    GeoLpSystem(const std::vector<Point>& pts, const std::vector<Box>& rects, double r, double eps);

    int num_constraints() const override { return static_cast<int>(pts_->size()); }
    int num_x() const override { return static_cast<int>(pts_->size()); }
    int num_y() const override { return static_cast<int>(rects_->size()); }
    void coefficients(const std::vector<double>& sigma, std::vector<double>& w,
                      std::vector<double>& tau) override;
    void row_sums(const std::vector<int>& x_chosen, const std::vector<int>& y_chosen,
                  std::vector<double>& out) override;

    double radius() const { return r_; }
    double eps() const { return eps_; }
    const BbdTree& bbd() const { return *bbd_; }
    RangeTree& range() { return *range_; }
    const std::vector<std::vector<int>>& ball_canonical() const { return ball_canon_; }
    const std::vector<std::vector<int>>& rect_canonical() const { return rect_canon_; }
    // S^eps as explicit point lists (for the dense reference and rounding).
    std::vector<std::vector<int>> materialize_cover() const;

  private:
    const std::vector<Point>* pts_;
    const std::vector<Box>* rects_;
    double r_, eps_;
    std::unique_ptr<BbdTree> bbd_;
    std::unique_ptr<RangeTree> range_;
    std::vector<std::vector<int>> ball_canon_;  // per point: canonical nodes of B(p_i, r)
    std::vector<std::vector<int>> bbd_path_;    // per point: leaf-to-root node ids
    std::vector<std::vector<int>> rect_canon_;  // per rect: canonical last-level nodes
};

// One sigma-weighted oracle step: coefficients via canonical accumulation,
// then the top-k / top-z pick. Infeasible when even the maximizer misses 1.
struct OracleStep {
    bool feasible = false;
    std::vector<int> x_chosen, y_chosen;
    std::vector<double> w, tau;
    double lhs = 0.0, rhs = 0.0;
};
OracleStep oracle_step(GeoLpSystem& sys, const std::vector<double>& sigma, int k, int z);

// The sigma update for a 0/1 oracle pick: delta_i = (A_i psi - 1)/(k+z),
// sigma'_i = (1 - delta_i eps/4) sigma_i. Raw weights, no normalization.
std::vector<double> update_step(GeoLpSystem& sys, const OracleStep& step, std::vector<double> sigma,
                                double eps, int k, int z);

// Threshold the y-slots at 1/(2f), mark covered points inactive through the
// range tree lists, then peel 2r balls with BBD active flags.
TriSolution round_geometric(const GeometricInstance& inst, GeoLpSystem& sys, const MwuSolution& psi,
                            const Params& p, double mu_cost_claim);

struct GcsoOptions {
    double budget_c = kMwuBudgetConstant;
};

// Full GCSO driver: WSPD radii, MWU feasibility per radius, rounding of
// the last feasible one. (2+eps, 2f, 2+eps) up to the documented slices.
TriSolution solve_gcso(const GeometricInstance& inst, const Params& p, const GcsoOptions& opt = {});

// Coreset bookkeeping of the disjoint pipeline: per-node stamp sets with counters,
// ancestor-unique placement, incremental removal. Exposed so tests can
// cross-check the incremental counts against a full rebuild.
class DenseBallIndex {
  public:
    // tree carries the stamps; rect_of maps each point to its unique rect.
    DenseBallIndex(BbdTree& tree, const std::vector<Point>& pts, const std::vector<int>& rect_of,
                   const std::vector<char>& alive, double probe_r);

    const std::vector<int>& canonical_of(int point) const {
        return canon_[static_cast<std::size_t>(point)];
    }
    // count_p: distinct rects with an alive point whose probe ball covers p.
    int touched_count(int point) const;
    void remove_point(int point);

  private:
    BbdTree* tree_;
    std::vector<int> rect_of_;
    std::vector<std::vector<int>> canon_;
};

struct GeoCoreset {
    double r = 0.0;
    std::vector<char> alive;               // over original point ids
    std::vector<int> forced_outliers;      // rect ids evicted in the gonzalez pass
    std::vector<ExtractedBall> extracted;  // dense balls removed
    int k_prime = 0;
    int z_bar = 0;
    bool identity = false;  // nothing changed: phases were no-ops

    std::vector<int> alive_points() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(alive.size()); ++i)
            if (alive[static_cast<std::size_t>(i)]) out.push_back(i);
        return out;
    }
};

// Geometric coreset of the disjoint pipeline (rect-local Gonzalez pruning,
// then dense-ball extraction over the stamped BBD tree). nullopt = skip r.
std::optional<GeoCoreset> geo_coreset(const GeometricInstance& inst, double r, const Params& p, double eps);

// Per-radius probe of the disjoint pipeline over raw points/rects; reused by
// the relational RCTO1 reduction. Radii are multiplied by pipeline_scale
// before the coreset thresholds (1 for the plain instance).
std::optional<TriSolution> gcso_disjoint_at_radius(const GeometricInstance& inst, double r, const Params& p,
                                                   double eps, const GcsoOptions& opt);

// Disjoint-rectangle driver: geometric coreset per radius, then the MWU solve.
TriSolution solve_gcso_disjoint(const GeometricInstance& inst, const Params& p, const GcsoOptions& opt = {});

}  // namespace setout
