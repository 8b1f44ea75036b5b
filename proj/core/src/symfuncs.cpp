#include "skln/symfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skln/errors.hpp"

namespace skln {

namespace {

void check_order(std::size_t n, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw ArgumentError("sigma: order k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(n) + "]");
    }
}

// Recursive k-subset expansion. Terms are visited in lexicographic order.
double subset_sum(std::span<const double> x, int k, std::size_t start, double prefix) {
    if (k == 0) {
        return prefix;
    }
    double total = 0.0;
    for (std::size_t i = start; i + static_cast<std::size_t>(k) <= x.size(); ++i) {
        total += subset_sum(x, k - 1, i + 1, prefix * x[i]);
    }
    return total;
}

}  // namespace

EigenvalueVector::EigenvalueVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 3) {
        throw ArgumentError("EigenvalueVector: need at least 3 entries");
    }
    for (double v : entries_) {
        if (!std::isfinite(v)) {
            throw ArgumentError("EigenvalueVector: non-finite entry");
        }
    }
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw ArgumentError("SymmetricMatrix: matrix is not square");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
            if (entries_(i, j) != entries_(j, i)) {
                throw ArgumentError("SymmetricMatrix: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") differs from its transpose");
            }
        }
    }
}

std::vector<double> SymmetricMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double sigma_by_subsets(std::span<const double> lambda, int k) {
    check_order(lambda.size(), k);
    return subset_sum(lambda, k, 0, 1.0);
}

std::vector<double> sigma_all(std::span<const double> lambda) {
    std::vector<double> e(lambda.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        for (std::size_t j = i + 1; j >= 1; --j) {
            e[j] += lambda[i] * e[j - 1];
        }
    }
    return e;
}

double sigma(std::span<const double> lambda, int k) {
    check_order(lambda.size(), k);
    std::vector<double> sorted(lambda.begin(), lambda.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() <= static_cast<std::size_t>(kSubsetExpansionLimit)) {
        return subset_sum(sorted, k, 0, 1.0);
    }
    return sigma_all(sorted)[static_cast<std::size_t>(k)];
}

double sigma(const EigenvalueVector& lambda, int k) { return sigma(lambda.entries(), k); }

bool in_gamma_k(const EigenvalueVector& lambda, int k) {
    check_order(lambda.entries().size(), k);
    for (int j = 1; j <= k; ++j) {
        if (!(sigma(lambda, j) > 0.0)) {
            return false;
        }
    }
    return true;
}

bool in_gamma_k_closure(const EigenvalueVector& lambda, int k, double tol) {
    check_order(lambda.entries().size(), k);
    double scale = 1.0;
    for (double v : lambda.entries()) {
        scale = std::max(scale, std::abs(v));
    }
    for (int j = 1; j <= k; ++j) {
        if (sigma(lambda, j) < -tol * std::pow(scale, j)) {
            return false;
        }
    }
    return true;
}

double gamma2bar_trace_gap(const SymmetricMatrix& M, std::span<const double> m) {
    const auto n = static_cast<std::size_t>(M.size());
    if (m.size() != n) {
        throw ArgumentError("gamma2bar_trace_gap: vector length does not match matrix");
    }
    double norm2 = 0.0;
    for (double v : m) {
        norm2 += v * v;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
        throw ArgumentError("gamma2bar_trace_gap: m is not a unit vector");
    }
    const Eigen::Map<const Eigen::VectorXd> mv(m.data(), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd& A = M.entries();
    return A.trace() - mv.dot(A * mv);
}

}  // namespace skln
