#pragma once

#include <cstdint>
#include <vector>

#include "setout/instance.hpp"

namespace setout {

// Averaged 0/1 oracle picks over T rounds, kept as exact integer counts so
// the P-constraint sums (sum x <= k, sum y <= z) hold exactly and rounding
// thresholds compare integers.
struct MwuSolution {
    std::vector<long long> x_counts;
    std::vector<long long> y_counts;
    long long rounds = 0;

    double x(std::size_t i) const { return static_cast<double>(x_counts[i]) / static_cast<double>(rounds); }
    double y(std::size_t j) const { return static_cast<double>(y_counts[j]) / static_cast<double>(rounds); }
    // psi_{n+j} >= 1/(2f), decided exactly.
    bool y_above_threshold(std::size_t j, int f) const {
        return 2 * static_cast<long long>(f) * y_counts[j] >= rounds;
    }
};

// One covering system: constraints A psi >= 1 over x-slots (centers) and
// y-slots (outlier sets), with P = {0/1 box, sum x <= k, sum y <= z}.
// Implementations expose the sigma-weighted column coefficients and the
// per-constraint row sums for a chosen 0/1 psi.
class MwuOracle {
  public:
    virtual ~MwuOracle() = default;
    virtual int num_constraints() const = 0;
    virtual int num_x() const = 0;
    virtual int num_y() const = 0;
    // w[l] = sum_i sigma[i] A[i,l]; tau[j] = sum_i sigma[i] A[i, n+j]
    virtual void coefficients(const std::vector<double>& sigma, std::vector<double>& w,
                              std::vector<double>& tau) = 0;
    // out[i] = A_i psi for the 0/1 psi selecting x_chosen and y_chosen
    virtual void row_sums(const std::vector<int>& x_chosen, const std::vector<int>& y_chosen,
                          std::vector<double>& out) = 0;
};

struct MwuOutcome {
    bool feasible = false;
    MwuSolution psi;
    long long iterations = 0;
    // On infeasible: the dual witness sigma (raw weights) and the failed
    // aggregated comparison, max_{psi in P} sigma^T A psi < sigma^T 1.
    std::vector<double> witness_sigma;
    double witness_lhs = 0.0;
    double witness_rhs = 0.0;
};

inline constexpr double kMwuBudgetConstant = 8.0;

long long mwu_iteration_budget(int num_constraints, int k, int z, double eps,
                               double budget_c = kMwuBudgetConstant);

// Runs T = ceil(c * (k+z) * ln(n) / eps^2) iterations of the multiplicative
// weights update with the (k+z)-bounded oracle. Any failed oracle step
// certifies infeasibility of the whole system; otherwise the averaged psi*
// satisfies every constraint to within additive eps and the P sums exactly.
MwuOutcome mwu_solve(MwuOracle& oracle, int k, int z, double eps, double budget_c = kMwuBudgetConstant);

// Indices of the kk largest values, ties broken toward lower index.
std::vector<int> top_indices(const std::vector<double>& values, int kk);

// Explicit-membership oracle: cover[i] lists x-slots of constraint i,
// sets_of[i] lists its y-slots.
class DenseOracle final : public MwuOracle {
  public:
    DenseOracle(std::vector<std::vector<int>> cover, std::vector<std::vector<int>> sets_of, int nx, int ny);

    int num_constraints() const override { return static_cast<int>(cover_.size()); }
    int num_x() const override { return nx_; }
    int num_y() const override { return ny_; }
    void coefficients(const std::vector<double>& sigma, std::vector<double>& w,
                      std::vector<double>& tau) override;
    void row_sums(const std::vector<int>& x_chosen, const std::vector<int>& y_chosen,
                  std::vector<double>& out) override;

    const std::vector<std::vector<int>>& cover() const { return cover_; }
    const std::vector<std::vector<int>>& sets_of() const { return sets_of_; }

  private:
    std::vector<std::vector<int>> cover_;
    std::vector<std::vector<int>> sets_of_;
    int nx_, ny_;
    std::vector<char> xmark_, ymark_;
};

}  // namespace setout
