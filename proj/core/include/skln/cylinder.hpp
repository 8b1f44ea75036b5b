#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "skln/problem.hpp"

namespace skln {

// Cylinder variables: t = ln r - ln(ab)/2, xi = -(2/(n-2)) ln u - ln r, so that
// u^{4/(n-2)} |dx|^2 = e^{-2 xi} (dt^2 + g_{S^{n-1}}).

struct CylinderPoint {
    double t;
    double xi;
};

struct RadialPoint {
    double r;
    double u;
};

/// Throws DomainError unless a < r < b and u > 0.
CylinderPoint to_cylinder(double r, double u, const ProblemSpec& spec);
RadialPoint from_cylinder(double t, double xi, const ProblemSpec& spec);

/// d(ln u)/dr = -(n-2)(xi' + 1)/(2r).
double dlnu_dr_from_slope(double xi_p, double r, int n);
/// Inverse of dlnu_dr_from_slope: xi' = -(2/(n-2)) r d(ln u)/dr - 1.
double slope_from_dlnu_dr(double dlnu_dr, double r, int n);

struct CylinderState {
    double t = 0.0;
    double xi = 0.0;
    double xi_p = 0.0;
    std::optional<double> xi_pp;
};

/// sigma_k(lambda(-A^u)) in cylinder variables:
/// (-1)^k 2^{1-k} binom(n-1,k-1) e^{2k xi} (1 - xi'^2)^{k-1} [xi'' + (n-2k)/(2k) (1 - xi'^2)].
/// Throws ArgumentError if state.xi_pp is absent.
double sigma_k_radial(const CylinderState& state, int n, int k);

/// First integral H(xi, xi') = e^{(2k-n) xi} (1 - xi'^2)^k - (-1)^k e^{-n xi}.
double first_integral(double xi, double xi_p, int n, int k);

/// Magnitude of the larger of the two terms of H; the floating-point error of
/// first_integral is proportional to this.
double first_integral_scale(double xi, double xi_p, int n, int k);

/// A contour of the first integral. Along a solution with |xi'| > 1 on this
/// level, xi'^2 = 1 + e^{-2 xi} [1 + s e^{n xi}]^{1/k} with s = (-1)^k H.
class LevelSet {
public:
    LevelSet(double H, int n, int k);

    /// Level whose fold (xi' = +-1) sits at xi = peak: H = -(-1)^k e^{-n peak}.
    static LevelSet from_peak(double peak, int n, int k);
    static LevelSet from_state(double xi, double xi_p, int n, int k);

    double H() const noexcept { return H_; }
    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }

    /// s = (-1)^k H.
    double signed_level() const noexcept { return s_; }
    /// True when s < 0: the decreasing branch reaches |xi'| = 1 at peak_xi().
    bool has_peak() const noexcept { return s_ < 0.0; }
    /// -(1/n) ln|H|; throws DomainError when has_peak() is false.
    double peak_xi() const;

    /// 1 + s e^{n xi}, evaluated without cancellation near the peak.
    double bracket(double xi) const;
    /// |xi'| on this level. Throws DomainError above the peak.
    double speed(double xi) const;
    /// 1/|xi'|, the time spent per unit of xi.
    double time_density(double xi) const;
    /// xi'' = (1/2) d/dxi [e^{-2 xi} (1 + s e^{n xi})^{1/k}], the differentiated
    /// first-integral relation. Independent of the branch direction.
    double xi_pp(double xi) const;

private:
    double H_;
    double s_;
    int n_;
    int k_;
    double peak_;
};

/// Input for the ambient finite-difference oracle: a radial profile u(|x|).
struct AmbientSample {
    double r = 1.0;
    std::function<double(double)> u;
    /// Finite-difference step; 0 selects r * 2e-3 (tuned for the Richardson pair).
    double h = 0.0;
    /// Combine steps h and h/2 by Richardson extrapolation.
    bool richardson = true;
};

struct AmbientOracleResult {
    double sigma_k = 0.0;
    /// Eigenvalues of -A^u at x0 = (r, 0, ..., 0), ascending.
    std::vector<double> eigenvalues;
    bool in_cone = false;
    /// Set when h > r/100.
    bool precision_warning = false;
};

/// Builds the full n x n matrix -A^u from the definition of the conformal
/// Hessian at x0 = (r, 0, ..., 0) using central differences of u(|x|) in every
/// coordinate direction, diagonalizes it and returns sigma_k of the
/// eigenvalues. Does not use the cylinder formula.
AmbientOracleResult ambient_oracle_sigma_k(const AmbientSample& sample, int n, int k);

}  // namespace skln
