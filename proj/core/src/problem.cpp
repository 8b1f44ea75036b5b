#include "skln/problem.hpp"

#include <cmath>
#include <string>

#include "skln/errors.hpp"

namespace skln {

ProblemSpec::ProblemSpec(int n, int k, double a, double b, std::optional<FiniteData> bc)
    : n_(n), k_(k), a_(a), b_(b), boundary_(bc) {
    if (n < 3) {
        throw ArgumentError("ProblemSpec: dimension n must be at least 3");
    }
    if (k < 2 || k > n) {
        throw ArgumentError("ProblemSpec: need 2 <= k <= n, got k=" + std::to_string(k));
    }
    if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
        throw ArgumentError("ProblemSpec: radii must satisfy 0 < a < b < infinity");
    }
    if (bc && (!(bc->c1 > 0.0) || !(bc->c2 > 0.0) || !std::isfinite(bc->c1) ||
               !std::isfinite(bc->c2))) {
        throw ArgumentError("ProblemSpec: boundary constants must be positive and finite");
    }
}

ProblemSpec ProblemSpec::infinite(int n, int k, double a, double b) {
    return ProblemSpec(n, k, a, b, std::nullopt);
}

ProblemSpec ProblemSpec::finite(int n, int k, double a, double b, double c1, double c2) {
    return ProblemSpec(n, k, a, b, FiniteData{c1, c2});
}

double ProblemSpec::log_ratio() const noexcept { return std::log(b_ / a_); }

double ProblemSpec::half_width() const noexcept { return 0.5 * log_ratio(); }

double ProblemSpec::center_radius() const noexcept { return std::sqrt(a_ * b_); }

double ProblemSpec::p_a() const {
    if (!boundary_) {
        throw ArgumentError("p_a is undefined for infinite boundary data");
    }
    return -2.0 / (n_ - 2) * std::log(boundary_->c1) - std::log(a_);
}

double ProblemSpec::p_b() const {
    if (!boundary_) {
        throw ArgumentError("p_b is undefined for infinite boundary data");
    }
    return -2.0 / (n_ - 2) * std::log(boundary_->c2) - std::log(b_);
}

double ProblemSpec::target_sigma() const noexcept { return std::ldexp(binomial(n_, k_), -k_); }

ProblemSpec ProblemSpec::inverted() const {
    if (!boundary_) {
        return *this;
    }
    // xi(t) -> xi(-t): the new inner value is p_b, the new outer value p_a.
    const double half = 0.5 * (n_ - 2);
    const double c1 = std::exp(-half * (p_b() + std::log(a_)));
    const double c2 = std::exp(-half * (p_a() + std::log(b_)));
    return ProblemSpec(n_, k_, a_, b_, FiniteData{c1, c2});
}

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

}  // namespace skln
