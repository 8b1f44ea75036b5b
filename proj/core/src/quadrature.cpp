#include "skln/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "adaptive_gk.hpp"
#include "skln/errors.hpp"

namespace skln {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrals of the kernel switch to sigma = (-eta)^{1/k} on [-1, 0], where the
// (1 - e^{n eta})^{1/k} corner at eta = 0 becomes smooth.
constexpr double kCornerSplit = -1.0;

double stable_kernel(double x, double B) {
    // {1 + e^{-2x} B}^{-1/2}, written to avoid overflow for x << 0.
    if (x <= 0.0) {
        const double e = std::exp(x);
        return e / std::sqrt(e * e + B);
    }
    return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * x) * B);
}

double kernel_unchecked(double eta, double p, int n, int k) {
    const double B = std::pow(-std::expm1(n * eta), 1.0 / k);
    return stable_kernel(eta + p, B);
}

// Tail of the kernel below -lambda: kernel <= e^{eta+p} (1 - e^{n eta})^{-1/(2k)}.
double kernel_tail_bound(double lambda, double p, int n, int k) {
    return std::exp(-lambda + p) * std::pow(-std::expm1(-n * lambda), -0.5 / k);
}

void check_budget(const detail::AdaptiveResult& r, const char* what) {
    if (!r.converged) {
        throw BudgetError(std::string(what) + ": tolerance not reached within evaluation budget",
                          r.value, r.error);
    }
}

}  // namespace

double time_kernel(double eta, double p, int n, int k) {
    if (eta > 0.0) {
        throw DomainError("time_kernel: eta must be <= 0");
    }
    return kernel_unchecked(eta, p, n, k);
}

QuadResult kernel_integral(double eta_lo, double eta_hi, double p, int n, int k, double tol,
                           long budget) {
    if (!(tol > 0.0)) {
        throw ArgumentError("kernel_integral: tolerance must be positive");
    }
    if (eta_hi > 0.0) {
        throw DomainError("kernel_integral: upper limit must be <= 0");
    }
    if (eta_lo > eta_hi) {
        throw ArgumentError("kernel_integral: lower limit exceeds upper limit");
    }
    QuadResult out;
    if (eta_lo == eta_hi) {
        return out;
    }

    double lo = eta_lo;
    if (eta_lo == -kInf) {
        double lambda = std::max({1.0, 1.0 - eta_hi, p - std::log(0.1 * tol)});
        while (kernel_tail_bound(lambda, p, n, k) > 0.1 * tol) {
            lambda += 1.0;
        }
        out.tail_bound = kernel_tail_bound(lambda, p, n, k);
        lo = -lambda;
    }
    const double budget_tol = tol - out.tail_bound;

    // Near part in sigma, far part in eta.
    if (eta_hi > kCornerSplit) {
        const double near_lo = std::max(lo, kCornerSplit);
        const double s_lo = std::pow(-eta_hi, 1.0 / k);
        const double s_hi = std::pow(-near_lo, 1.0 / k);
        auto f = [&](double s) {
            const double sk1 = std::pow(s, k - 1);
            return kernel_unchecked(-sk1 * s, p, n, k) * k * sk1;
        };
        const auto r = detail::integrate_adaptive(f, s_lo, s_hi, 0.5 * budget_tol, budget);
        check_budget(r, "kernel_integral");
        out.value += r.value;
        out.abs_error_estimate += r.error;
        out.evaluations += r.evaluations;
    }
    if (lo < kCornerSplit) {
        const double far_hi = std::min(eta_hi, kCornerSplit);
        auto f = [&](double eta) { return kernel_unchecked(eta, p, n, k); };
        const int panels = static_cast<int>(std::min(64.0, std::ceil(far_hi - lo)));
        const auto r = detail::integrate_adaptive(f, lo, far_hi, 0.5 * budget_tol,
                                                  budget - out.evaluations, panels);
        check_budget(r, "kernel_integral");
        out.value += r.value;
        out.abs_error_estimate += r.error;
        out.evaluations += r.evaluations;
    }
    out.abs_error_estimate += out.tail_bound;
    return out;
}

QuadResult T_of_p(double p, int n, int k, double tol) {
    return kernel_integral(-kInf, 0.0, p, n, k, tol);
}

TbcResult T_bc(const ProblemSpec& spec, double tol) {
    TbcResult out;
    out.p_a = spec.p_a();
    out.p_b = spec.p_b();
    const double gap = std::abs(out.p_b - out.p_a);
    const double top = std::max(out.p_a, out.p_b);
    out.quad = kernel_integral(-gap, 0.0, top, spec.n(), spec.k(), 2.0 * tol);
    out.quad.value *= 0.5;
    out.quad.abs_error_estimate *= 0.5;
    out.quad.tail_bound *= 0.5;
    return out;
}

QuadResult transit_time(double xi_lo, double xi_hi, double s, int n, int k, double tol,
                        long budget) {
    if (xi_lo > xi_hi) {
        throw ArgumentError("transit_time: lower limit exceeds upper limit");
    }
    if (xi_lo == xi_hi) {
        return {};
    }
    if (s < 0.0) {
        const double peak = -std::log(-s) / n;
        double hi = xi_hi - peak;
        if (hi > 0.0) {
            if (hi > 1e-12 * std::max(1.0, std::abs(peak))) {
                throw DomainError("transit_time: range extends above the fold of the level");
            }
            hi = 0.0;
        }
        const double lo = (xi_lo == -kInf) ? -kInf : std::min(xi_lo - peak, hi);
        return kernel_integral(lo, hi, peak, n, k, tol, budget);
    }

    // No fold: the density is smooth and bounded by e^{xi}.
    auto density = [&](double xi) {
        const double B = std::pow(1.0 + s * std::exp(n * xi), 1.0 / k);
        return stable_kernel(xi, B);
    };
    QuadResult out;
    double lo = xi_lo;
    if (xi_lo == -kInf) {
        lo = std::min(xi_hi - 1.0, std::log(0.1 * tol));
        out.tail_bound = std::exp(lo);
    }
    const int panels = static_cast<int>(std::min(64.0, std::ceil(xi_hi - lo)));
    const auto r = detail::integrate_adaptive(density, lo, xi_hi, tol - out.tail_bound, budget,
                                              panels);
    check_budget(r, "transit_time");
    out.value = r.value;
    out.abs_error_estimate = r.error + out.tail_bound;
    out.evaluations = r.evaluations;
    return out;
}

QuadResult time_between_levels(double xi_from, double xi_to, const LevelSet& level, double tol) {
    if (!level.has_peak()) {
        throw ArgumentError("time_between_levels: level needs (-1)^k H < 0");
    }
    if (xi_from > xi_to) {
        throw ArgumentError("time_between_levels: xi_from exceeds xi_to");
    }
    const double peak = level.peak_xi();
    if (xi_to - peak > 1e-12 * std::max(1.0, std::abs(peak))) {
        throw DomainError("time_between_levels: xi_to lies above the fold of the level");
    }
    return transit_time(xi_from, std::min(xi_to, peak), level.signed_level(), level.n(),
                        level.k(), tol);
}

}  // namespace skln
