#pragma once

#include <functional>

#include "skln/problem.hpp"

namespace skln {

/// Interval with a sign change of f.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

struct RootOptions {
    /// Stop once |f| <= ftol.
    double ftol = 1e-12;
    /// Stop once the bracket is narrower than xtol (absolute) plus 4 ulp.
    double xtol = 0.0;
    int max_iterations = 400;
};

/// Bracketed root of a continuous f by false position with the Illinois
/// modification, falling back to bisection whenever the secant step stalls.
/// Never evaluates f outside [lo, hi].
double solve_bracketed(const std::function<double(double)>& f, Bracket bracket,
                       const RootOptions& options = {});

/// Plain bisection on a bracket.
double bisect(const std::function<double(double)>& f, Bracket bracket,
              const RootOptions& options = {});

inline constexpr double kDefaultRootTol = 1e-9;

/// The unique p with T_p = target (T_p is increasing with limits 0 and infinity).
/// Throws ArgumentError for target <= 0, UnboundedBracketError if |p| > 100.
double solve_p_for_T(double target, int n, int k, double tol = kDefaultRootTol);

struct QaSolution {
    /// Initial slope at the inner boundary, q_a < -1.
    double q_a;
    /// First-integral value H(p_a, q_a).
    double H;
    /// Root variable s = (-1)^k H.
    double s;
};

/// Smooth-branch level for data with ln(b/a) < 2 T_bc. Requires p_a >= p_b;
/// otherwise pass spec.inverted(). Throws RegimeError if ln(b/a) >= 2 T_bc.
QaSolution solve_qa(const ProblemSpec& spec, double tol = kDefaultRootTol);

/// Half-times of the two branches meeting at a fold at xi = p:
/// t_plus reaches p_b, t_minus reaches p_a.
struct GlueTimes {
    double t_plus;
    double t_minus;
};
GlueTimes glue_times(double p, const ProblemSpec& spec, double tol = 1e-13);

/// Fold level p >= max(p_a, p_b) of the jump solution, satisfying
/// ln(b/a) = I(p_b - p) + I(p_a - p) with I(x) the kernel integral over [x, 0].
/// For infinite data returns solve_p_for_T(ln(b/a)/2).
/// Throws RegimeError unless ln(b/a) > 2 T_bc.
double solve_p_case4(const ProblemSpec& spec, double tol = kDefaultRootTol);

/// Radius of the fold: sqrt(ab) exp(t_minus - t_plus).
double matching_radius(double p, const ProblemSpec& spec);

}  // namespace skln
