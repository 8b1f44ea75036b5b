#pragma once

#include "skln/cylinder.hpp"
#include "skln/problem.hpp"

namespace skln {

struct QuadResult {
    double value = 0.0;
    /// Quadrature error estimate plus tail_bound.
    double abs_error_estimate = 0.0;
    /// Analytic bound on the truncated part of an improper integral.
    double tail_bound = 0.0;
    long evaluations = 0;
};

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr long kDefaultEvaluationBudget = 2'000'000;

/// {1 + e^{-2 eta - 2 p} [1 - e^{n eta}]^{1/k}}^{-1/2} for eta <= 0.
/// Lies in (0, 1], equals 1 at eta = 0. Throws DomainError for eta > 0.
double time_kernel(double eta, double p, int n, int k);

/// Integral of time_kernel over [eta_lo, eta_hi], eta_lo <= eta_hi <= 0.
/// eta_lo may be -infinity; the tail beyond -Lambda is bounded analytically.
QuadResult kernel_integral(double eta_lo, double eta_hi, double p, int n, int k,
                           double tol = kDefaultQuadTol,
                           long budget = kDefaultEvaluationBudget);

/// T_p: kernel integrated over (-infinity, 0]. The cylinder time a solution
/// with fold at xi = p needs to reach xi = -infinity.
QuadResult T_of_p(double p, int n, int k, double tol = kDefaultQuadTol);

struct TbcResult {
    QuadResult quad;
    double p_a = 0.0;
    double p_b = 0.0;
};

/// T(a,b,c1,c2) = (1/2) integral over [-|p_b - p_a|, 0] of the kernel with
/// p = max(p_a, p_b). Throws ArgumentError for infinite data.
TbcResult T_bc(const ProblemSpec& spec, double tol = kDefaultQuadTol);

/// Cylinder time for a monotone branch on the contour with s = (-1)^k H to
/// cross [xi_lo, xi_hi]: the integral of 1/|xi'| d xi. Works for any s; when
/// s < 0 the range must stay below the peak. xi_lo may be -infinity.
QuadResult transit_time(double xi_lo, double xi_hi, double s, int n, int k,
                        double tol = kDefaultQuadTol,
                        long budget = kDefaultEvaluationBudget);

/// Elapsed time for the decreasing branch of an admissible level
/// ((-1)^k H < 0) to traverse [xi_from, xi_to]. xi_from may be -infinity.
/// Throws DomainError if xi_to exceeds the peak, ArgumentError if the level
/// has no peak or xi_from > xi_to.
QuadResult time_between_levels(double xi_from, double xi_to, const LevelSet& level,
                               double tol = kDefaultQuadTol);

}  // namespace skln
