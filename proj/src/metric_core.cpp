#include "setout/metric_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "setout/parallel.hpp"

namespace setout {

GonzalezResult gonzalez_kcenter(const std::vector<int>& elements, const DistFn& dist, int k) {
    GonzalezResult res;
    if (elements.empty() || k < 1) return res;
    const int n = static_cast<int>(elements.size());
    std::vector<double> mind(static_cast<std::size_t>(n), inf());
    res.centers.push_back(elements.front());
    auto absorb = [&](int center) {
        for (int i = 0; i < n; ++i)
            mind[static_cast<std::size_t>(i)] =
                std::min(mind[static_cast<std::size_t>(i)], dist(elements[static_cast<std::size_t>(i)], center));
    };
    absorb(elements.front());
    while (static_cast<int>(res.centers.size()) < std::min(k, n)) {
        int far = 0;
        for (int i = 1; i < n; ++i)
            if (mind[static_cast<std::size_t>(i)] > mind[static_cast<std::size_t>(far)]) far = i;
        if (mind[static_cast<std::size_t>(far)] == 0.0) break;  // all remaining coincide with a center
        res.centers.push_back(elements[static_cast<std::size_t>(far)]);
        absorb(elements[static_cast<std::size_t>(far)]);
    }
    res.radius = *std::max_element(mind.begin(), mind.end());
    return res;
}

GonzalezResult gonzalez_kcenter(const GeneralInstance& inst, int k) {
    std::vector<int> all(static_cast<std::size_t>(inst.n));
    for (int i = 0; i < inst.n; ++i) all[static_cast<std::size_t>(i)] = i;
    return gonzalez_kcenter(all, [&](int a, int b) { return inst.dist(a, b); }, k);
}

CandidateRadii radii_from_distances(std::vector<double> values, CandidateRadii::Source source) {
    values.push_back(0.0);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    CandidateRadii r;
    r.values = std::move(values);
    r.source = source;
    return r;
}

CandidateRadii enumerate_radii(const GeneralInstance& inst) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(inst.n) * static_cast<std::size_t>(inst.n) / 2);
    for (int i = 0; i < inst.n; ++i)
        for (int j = i + 1; j < inst.n; ++j) vals.push_back(inst.dist(i, j));
    return radii_from_distances(std::move(vals), CandidateRadii::Source::AllPairs);
}

namespace {

long long count_subsets_upto(int n, int k, long long cap) {
    long long total = 0;
    for (int size = 0; size <= std::min(k, n); ++size) {
        long long c = 1;
        for (int i = 0; i < size; ++i) {
            c = c * (n - i) / (i + 1);
            if (c > cap) return cap + 1;
        }
        total += c;
        if (total > cap) return cap + 1;
    }
    return total;
}

// All subsets of {0..n-1} with size <= kmax, ascending within each subset,
// enumerated by size then lexicographically. Flat storage.
struct SubsetList {
    std::vector<int> data;
    std::vector<std::size_t> offsets;  // offsets.size() == count+1

    int count() const { return static_cast<int>(offsets.size()) - 1; }
    std::pair<const int*, const int*> get(int idx) const {
        return {data.data() + offsets[static_cast<std::size_t>(idx)],
                data.data() + offsets[static_cast<std::size_t>(idx) + 1]};
    }
};

SubsetList enumerate_subsets(int n, int kmax) {
    SubsetList out;
    out.offsets.push_back(0);
    std::vector<int> cur;
    for (int size = 0; size <= std::min(kmax, n); ++size) {
        cur.assign(static_cast<std::size_t>(size), 0);
        for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i;
        while (true) {
            out.data.insert(out.data.end(), cur.begin(), cur.end());
            out.offsets.push_back(out.data.size());
            if (size == 0) break;
            int pos = size - 1;
            while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
            if (pos < 0) break;
            ++cur[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < size; ++i)
                cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i) - 1] + 1;
        }
    }
    return out;
}

struct Candidate {
    double radius = inf();
    std::vector<int> centers;
    std::vector<int> outliers;
    bool valid = false;

    bool better_than(const Candidate& o) const {
        if (!o.valid) return valid;
        if (!valid) return false;
        if (radius != o.radius) return radius < o.radius;
        if (centers != o.centers) return centers < o.centers;
        return outliers < o.outliers;
    }
};

}  // namespace

BruteForceResult brute_force_cso(const GeneralInstance& inst, const Params& p, long long cap) {
    check_params(p);
    const long long ccount = count_subsets_upto(inst.n, p.k, cap);
    const long long ocount = count_subsets_upto(inst.m(), p.z, cap);
    if (ccount > cap || ocount > cap || ccount * ocount > cap)
        throw BruteForceRefused("brute force refused: about " + std::to_string(ccount) + " x " +
                                std::to_string(ocount) + " candidate pairs exceed cap " + std::to_string(cap));

    const SubsetList centers = enumerate_subsets(inst.n, p.k);
    const SubsetList outliers = enumerate_subsets(inst.m(), p.z);

    // Excluded masks per outlier subset, shared read-only across threads.
    std::vector<std::vector<bool>> masks(static_cast<std::size_t>(outliers.count()));
    for (int o = 0; o < outliers.count(); ++o) {
        auto [b, e] = outliers.get(o);
        masks[static_cast<std::size_t>(o)] = excluded_mask_general(inst, std::vector<int>(b, e));
    }

    const int threads = std::max(1, std::min(thread_budget(), centers.count()));
    std::vector<Candidate> best_per_thread(static_cast<std::size_t>(threads));
    const int chunk = (centers.count() + threads - 1) / threads;
    parallel_for(threads, [&](int t) {
        Candidate best;
        const int lo = t * chunk, hi = std::min(centers.count(), lo + chunk);
        for (int c = lo; c < hi; ++c) {
            auto [cb, ce] = centers.get(c);
            const std::vector<int> cset(cb, ce);
            for (int o = 0; o < outliers.count(); ++o) {
                const auto& mask = masks[static_cast<std::size_t>(o)];
                bool ok = true;
                for (int ctr : cset)
                    if (mask[static_cast<std::size_t>(ctr)]) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                const double r = clustering_cost(inst, cset, mask);
                if (r == inf()) continue;
                Candidate cand;
                cand.radius = r;
                cand.centers = cset;
                auto [ob, oe] = outliers.get(o);
                cand.outliers.assign(ob, oe);
                cand.valid = true;
                if (cand.better_than(best)) best = std::move(cand);
            }
        }
        best_per_thread[static_cast<std::size_t>(t)] = std::move(best);
    });

    Candidate best;
    for (auto& cand : best_per_thread)
        if (cand.better_than(best)) best = std::move(cand);
    if (!best.valid) throw InstanceError("brute force found no valid solution");  // cannot happen with k,z >= 1

    BruteForceResult res;
    res.opt_radius = best.radius;
    res.solution = make_solution(inst, best.centers, best.outliers, BoundsClaim{1, 1, 1});
    return res;
}

BruteForceResult brute_force_cso(const GeometricInstance& inst, const Params& p, long long cap) {
    return brute_force_cso(inst.to_general(), p, cap);
}

GeneralInstance setcover_to_cso(int num_elements, const std::vector<std::vector<int>>& cover_sets, int k) {
    if (num_elements <= 0) throw InstanceError("setcover_to_cso: empty universe");
    if (k < 1 || k > num_elements) throw InstanceError("setcover_to_cso: need 1 <= k <= |X|");
    std::vector<bool> covered(static_cast<std::size_t>(num_elements), false);
    for (const auto& y : cover_sets)
        for (int x : y) {
            if (x < 0 || x >= num_elements) throw InstanceError("setcover_to_cso: element out of range");
            covered[static_cast<std::size_t>(x)] = true;
        }
    for (int x = 0; x < num_elements; ++x)
        if (!covered[static_cast<std::size_t>(x)])
            throw InstanceError("setcover_to_cso: element " + std::to_string(x) + " uncovered");

    GeneralInstance g;
    g.n = num_elements + k;
    g.metric = GeneralInstance::Metric::Euclidean;
    g.points.reserve(static_cast<std::size_t>(g.n));
    for (int i = 0; i < num_elements; ++i) g.points.push_back({static_cast<double>(i + 1)});
    for (int j = 1; j <= k; ++j) g.points.push_back({static_cast<double>(2 * num_elements + j)});
    for (const auto& y : cover_sets) {
        std::vector<int> s(y);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        g.sets.push_back(std::move(s));
    }
    for (int j = 0; j < k; ++j) g.sets.push_back({num_elements + j});
    g.membership.assign(static_cast<std::size_t>(g.n), {});
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
    return g;
}

}  // namespace setout
