#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setout/instance.hpp"

namespace setout {

// Sorted, deduplicated distances to binary-search over.
struct CandidateRadii {
    enum class Source { AllPairs, Wspd, LinfRelational };
    std::vector<double> values;  // strictly increasing, first entry 0
    Source source = Source::AllPairs;
};

using DistFn = std::function<double(int, int)>;

struct GonzalezResult {
    std::vector<int> centers;
    double radius = 0.0;
};

// Greedy farthest-point k-center over the given element ids, starting from
// elements[0] for reproducibility; ties in the farthest scan resolve by
// lowest index. 2-approximation of the optimal k-center radius.
GonzalezResult gonzalez_kcenter(const std::vector<int>& elements, const DistFn& dist, int k);
GonzalezResult gonzalez_kcenter(const GeneralInstance& inst, int k);

// All n(n-1)/2 pairwise distances, sorted and deduped, with 0 prepended.
CandidateRadii enumerate_radii(const GeneralInstance& inst);
CandidateRadii radii_from_distances(std::vector<double> values, CandidateRadii::Source source);

struct BruteForceRefused : InstanceError {
    using InstanceError::InstanceError;
};

inline constexpr long long kBruteForceDefaultCap = 2'000'000;

struct BruteForceResult {
    double opt_radius = 0.0;
    TriSolution solution;
};

// Exact optimum by enumerating all center subsets of size <= k and outlier
// subsets of size <= z, honoring C cap (union H) = empty. Deterministic
// tie-break: min by (radius, centers, outliers) lexicographically. Refuses
// with a size estimate when C(n,<=k)*C(m,<=z) exceeds the cap.
BruteForceResult brute_force_cso(const GeneralInstance& inst, const Params& p,
                                 long long cap = kBruteForceDefaultCap);
BruteForceResult brute_force_cso(const GeometricInstance& inst, const Params& p,
                                 long long cap = kBruteForceDefaultCap);

// The set-cover reduction: elements of X become points at coordinates 1..n'
// on the real line, plus k spike points q_j at 2n'+j each carried by a
// singleton set; covers in Y map to sets over the X-points.
GeneralInstance setcover_to_cso(int num_elements, const std::vector<std::vector<int>>& cover_sets, int k);

}  // namespace setout
