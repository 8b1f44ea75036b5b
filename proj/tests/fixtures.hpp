#pragma once

#include <algorithm>
#include <cmath>

#include "skln/problem.hpp"
#include "skln/quadrature.hpp"

namespace fixture {

/// Finite data on (a, b) with prescribed boundary ordinates p_a, p_b.
inline skln::ProblemSpec from_ordinates(int n, int k, double a, double b, double pa, double pb) {
    const double c1 = std::exp(-0.5 * (n - 2) * (pa + std::log(a)));
    const double c2 = std::exp(-0.5 * (n - 2) * (pb + std::log(b)));
    return skln::ProblemSpec::finite(n, k, a, b, c1, c2);
}

/// Data with a = 1 and ln(b/a) = fraction * 2 T_bc for the ordinates p_a != p_b:
/// fraction < 1 is the smooth case, 1 the frontier, > 1 the interior jump.
inline skln::ProblemSpec relative_to_frontier(int n, int k, double pa, double pb, double fraction) {
    const double gap = std::abs(pa - pb);
    const double top = std::max(pa, pb);
    const double Tbc = 0.5 * skln::kernel_integral(-gap, 0.0, top, n, k, 1e-14).value;
    return from_ordinates(n, k, 1.0, std::exp(fraction * 2.0 * Tbc), pa, pb);
}

inline skln::ProblemSpec frontier(int n, int k, double pa, double pb) {
    return relative_to_frontier(n, k, pa, pb, 1.0);
}

}  // namespace fixture
