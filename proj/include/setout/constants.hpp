#pragma once

#include <algorithm>
#include <cmath>

namespace setout::factors {

// Radius multipliers of the disjoint-coreset pipeline, shared by the metric
// and geometric variants and referenced by the tests.
inline constexpr double kPhase1Accept = 2.0;    // keep a set when gonzalez radius <= 2r
inline constexpr double kDenseProbe = 10.0;     // ball that counts touched sets
inline constexpr double kExtract = 15.0;        // ball removed around a dense point
inline constexpr double kCoresetCover = 10.0;   // LP coverage radius on the coreset
inline constexpr double kCoresetPeel = 20.0;    // greedy peel radius on the coreset
inline constexpr double kDisjointCost = 30.0;   // end-to-end cost factor, f=1 pipeline
inline constexpr double kSkipGuardSets = 2.0;   // skip when |H'| > min(m, 2kz)

// LP slack of the general-metric path and the center-count inflation it
// causes: |C| <= 2k / (1 - 2 eps_lp).
inline constexpr double kDefaultEpsLp = 0.05;
inline double center_bound(int k, double eps_lp) { return 2.0 * k / (1.0 - 2.0 * eps_lp); }

// Epsilon budget of the geometric solvers. The user epsilon is rescaled once
// and the same slice drives the WSPD, the BBD query inflation and the MWU
// slack; the disjoint pipeline uses the smaller slice.
inline double eps_slice_gcso(double eps) { return std::min(eps, 0.5) / 5.0; }
inline double eps_slice_gcso_disjoint(double eps) { return std::min(eps, 0.5) / 6.0; }

inline double gcso_cost_factor(double eps) { return 2.0 + eps; }
inline double gcso_center_factor(double eps) { return 2.0 + eps; }
inline double gcso_disjoint_cost_factor(double eps) { return kDisjointCost * (1.0 + eps); }

// Relational k-center oracle: greedy cube cover gives an exact L-infinity
// 2-approximation; converting to Euclidean costs sqrt(d), so the realized
// contract is rho(S,Q) <= r_S <= rel_cluster_factor(d) * rho*_k(Q).
inline double rel_cluster_factor(int d) { return 2.0 * std::sqrt(static_cast<double>(d)); }

// RCTO1 chain: premark threshold, pipeline radius inflation, candidate grid
// snap; the end-to-end cost factor is their product with the coreset factor.
inline double rcto1_premark_factor(int d) { return 2.0 * rel_cluster_factor(d); }
inline double rcto1_pipeline_radius(int d) { return 1.0 + rcto1_premark_factor(d); }
inline double rcto1_grid_snap(int d) { return std::sqrt(static_cast<double>(d)); }
inline double rcto1_cost_factor(int d, double eps) {
    return gcso_disjoint_cost_factor(eps) * rcto1_pipeline_radius(d) * rcto1_grid_snap(d);
}

// RCTO (FPT) cost bound of the partition-trial argument.
inline double rcto_cost_factor(int d) {
    const double sd = std::sqrt(static_cast<double>(d));
    return 2.0 * (static_cast<double>(d) + 6.0 * sd);
}

// RCRO: 3-approximation greedy with BBD and WSPD inflations.
inline double rcro_cost_factor(double eps) { return 3.0 + eps; }
inline double rcro_outlier_factor(double eps) { return (1.0 + eps) * (1.0 + eps); }

}  // namespace setout::factors
