#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace skln {

/// Eigenvalues lambda_1..lambda_n (n >= 3) of a symmetric matrix. All entries finite.
class EigenvalueVector {
public:
    explicit EigenvalueVector(std::vector<double> entries);

    std::span<const double> entries() const noexcept { return entries_; }
    int size() const noexcept { return static_cast<int>(entries_.size()); }

private:
    std::vector<double> entries_;
};

/// Real symmetric n x n matrix; symmetry is checked exactly on construction.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    int size() const noexcept { return static_cast<int>(entries_.rows()); }

    /// Eigenvalues in ascending order.
    std::vector<double> eigenvalues() const;

private:
    Eigen::MatrixXd entries_;
};

/// Largest n for which sigma() uses the exact subset expansion.
inline constexpr int kSubsetExpansionLimit = 12;

/// k-th elementary symmetric polynomial. The input is sorted before
/// evaluation, so the result is bitwise invariant under permutations.
/// Throws ArgumentError unless 1 <= k <= n.
double sigma(std::span<const double> lambda, int k);
double sigma(const EigenvalueVector& lambda, int k);

/// Sum over all k-subsets of products, in lexicographic subset order.
double sigma_by_subsets(std::span<const double> lambda, int k);

/// Coefficient recurrence e_j <- e_j + x e_{j-1}; returns sigma_0..sigma_n.
std::vector<double> sigma_all(std::span<const double> lambda);

/// lambda in Gamma_k: sigma_j(lambda) > 0 for j = 1..k (strict).
bool in_gamma_k(const EigenvalueVector& lambda, int k);

/// Closure of Gamma_k: sigma_j(lambda) >= -tol * max(1, |lambda|_inf^j).
bool in_gamma_k_closure(const EigenvalueVector& lambda, int k, double tol = 1e-12);

/// M_ij (delta_ij - m_i m_j) = tr M - m^T M m. Non-negative whenever the
/// eigenvalues of M lie in the closure of Gamma_2 and |m| = 1.
/// Throws ArgumentError if |m| differs from 1 by more than 1e-12.
double gamma2bar_trace_gap(const SymmetricMatrix& M, std::span<const double> m);

}  // namespace skln
