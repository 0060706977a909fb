#include "setout/mwu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace setout {

std::vector<int> top_indices(const std::vector<double>& values, int kk) {
    const int n = static_cast<int>(values.size());
    kk = std::min(kk, n);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + kk, idx.end(), [&](int a, int b) {
        const double va = values[static_cast<std::size_t>(a)], vb = values[static_cast<std::size_t>(b)];
        return va != vb ? va > vb : a < b;
    });
    idx.resize(static_cast<std::size_t>(kk));
    return idx;
}

long long mwu_iteration_budget(int num_constraints, int k, int z, double eps, double budget_c) {
    const double ln_n = std::log(static_cast<double>(std::max(num_constraints, 2)));
    return static_cast<long long>(std::ceil(budget_c * (k + z) * ln_n / (eps * eps)));
}

MwuOutcome mwu_solve(MwuOracle& oracle, int k, int z, double eps, double budget_c) {
    const int n = oracle.num_constraints();
    MwuOutcome out;
    out.psi.x_counts.assign(static_cast<std::size_t>(oracle.num_x()), 0);
    out.psi.y_counts.assign(static_cast<std::size_t>(oracle.num_y()), 0);
    if (n == 0) {  // nothing to cover
        out.feasible = true;
        out.psi.rounds = 1;
        out.iterations = 0;
        return out;
    }

    const long long T = mwu_iteration_budget(n, k, z, eps, budget_c);
    const double ksi = static_cast<double>(k + z);
    std::vector<double> sigma(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> w, tau, rows;

    for (long long t = 0; t < T; ++t) {
        oracle.coefficients(sigma, w, tau);
        const std::vector<int> xsel = top_indices(w, k);
        const std::vector<int> ysel = top_indices(tau, z);
        double lhs = 0;
        for (int l : xsel) lhs += w[static_cast<std::size_t>(l)];
        for (int j : ysel) lhs += tau[static_cast<std::size_t>(j)];
        double rhs = 0;  // b = all-ones against raw sigma mass
        for (double s : sigma) rhs += s;
        if (lhs < rhs * (1.0 - 1e-12)) {
            out.feasible = false;
            out.iterations = t + 1;
            out.witness_sigma = sigma;
            out.witness_lhs = lhs;
            out.witness_rhs = rhs;
            return out;
        }
        for (int l : xsel) ++out.psi.x_counts[static_cast<std::size_t>(l)];
        for (int j : ysel) ++out.psi.y_counts[static_cast<std::size_t>(j)];

        oracle.row_sums(xsel, ysel, rows);
        double maxw = 0;
        for (int i = 0; i < n; ++i) {
            const double delta = (rows[static_cast<std::size_t>(i)] - 1.0) / ksi;
            sigma[static_cast<std::size_t>(i)] *= 1.0 - delta * eps / 4.0;
            maxw = std::max(maxw, sigma[static_cast<std::size_t>(i)]);
        }
        if (maxw < 1e-300 && maxw > 0) {  // underflow guard
            const double scale = 1.0 / maxw;
            for (double& s : sigma) s *= scale;
        }
    }
    out.feasible = true;
    out.iterations = T;
    out.psi.rounds = T;
    return out;
}

DenseOracle::DenseOracle(std::vector<std::vector<int>> cover, std::vector<std::vector<int>> sets_of, int nx, int ny)
    : cover_(std::move(cover)), sets_of_(std::move(sets_of)), nx_(nx), ny_(ny) {
    xmark_.assign(static_cast<std::size_t>(nx_), 0);
    ymark_.assign(static_cast<std::size_t>(ny_), 0);
}

void DenseOracle::coefficients(const std::vector<double>& sigma, std::vector<double>& w, std::vector<double>& tau) {
    w.assign(static_cast<std::size_t>(nx_), 0.0);
    tau.assign(static_cast<std::size_t>(ny_), 0.0);
    for (std::size_t i = 0; i < cover_.size(); ++i) {
        const double s = sigma[i];
        for (int l : cover_[i]) w[static_cast<std::size_t>(l)] += s;
        for (int j : sets_of_[i]) tau[static_cast<std::size_t>(j)] += s;
    }
}

void DenseOracle::row_sums(const std::vector<int>& x_chosen, const std::vector<int>& y_chosen,
                           std::vector<double>& out) {
    for (int l : x_chosen) xmark_[static_cast<std::size_t>(l)] = 1;
    for (int j : y_chosen) ymark_[static_cast<std::size_t>(j)] = 1;
    out.assign(cover_.size(), 0.0);
    for (std::size_t i = 0; i < cover_.size(); ++i) {
        int hits = 0;
        for (int l : cover_[i]) hits += xmark_[static_cast<std::size_t>(l)];
        for (int j : sets_of_[i]) hits += ymark_[static_cast<std::size_t>(j)];
        out[i] = static_cast<double>(hits);
    }
    for (int l : x_chosen) xmark_[static_cast<std::size_t>(l)] = 0;
    for (int j : y_chosen) ymark_[static_cast<std::size_t>(j)] = 0;
}

}  // namespace setout
