#pragma once

#include <optional>

namespace skln {

/// Constant boundary values u = c1 on |x| = a and u = c2 on |x| = b.
struct FiniteData {
    double c1;
    double c2;
};

/// Annulus {a < |x| < b} in R^n with sigma_k order k and either infinite or
/// finite constant boundary data.
class ProblemSpec {
public:
    static ProblemSpec infinite(int n, int k, double a, double b);
    static ProblemSpec finite(int n, int k, double a, double b, double c1, double c2);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

    bool is_infinite() const noexcept { return !boundary_; }
    const std::optional<FiniteData>& boundary() const noexcept { return boundary_; }

    /// ln(b/a).
    double log_ratio() const noexcept;
    /// Half-length T = ln(b/a)/2 of the cylinder interval [-T, T].
    double half_width() const noexcept;
    /// sqrt(ab), the radius mapped to t = 0.
    double center_radius() const noexcept;

    /// Boundary ordinates of xi: p_a = -(2/(n-2)) ln c1 - ln a, and likewise p_b.
    /// Throws ArgumentError for infinite data.
    double p_a() const;
    double p_b() const;

    /// Right-hand side 2^{-k} binom(n, k) of the equation.
    double target_sigma() const noexcept;

    /// Data for the inversion r -> ab/r, which swaps the roles of the two
    /// boundary spheres (p_a and p_b exchange). Infinite data maps to itself.
    ProblemSpec inverted() const;

private:
    ProblemSpec(int n, int k, double a, double b, std::optional<FiniteData> bc);

    int n_;
    int k_;
    double a_;
    double b_;
    std::optional<FiniteData> boundary_;
};

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(int n, int k);

}  // namespace skln
