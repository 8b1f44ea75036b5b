#pragma once

// Global adaptive Gauss-Kronrod (G10/K21) driver: the panel with
// the largest error estimate is bisected until the summed estimate meets an
// absolute tolerance or the evaluation budget runs out.
//
// Nodes and weights come from Boost, but the panel rule is applied here:
// Boost's own error output has a roundoff floor proportional to max|f| that
// does not shrink with the panel, so bisection could never meet an absolute
// tolerance below it. Here the floor is 4 eps times the panel's integral of |f|.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

namespace skln::detail {

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double tol, long budget,
                                  int initial_panels = 1) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    static const auto& kx = Kronrod::abscissa();
    static const auto& kw = Kronrod::weights();
    static const auto& gw = Gauss::weights();
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& other) const { return error < other.error; }
    };

    AdaptiveResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    auto panel = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        const double f0 = f(c);
        double K = kw[0] * f0;
        double absK = kw[0] * std::abs(f0);
        double G = 0.0;
        for (std::size_t i = 1; i < kx.size(); ++i) {
            const double fl = f(c - h * kx[i]);
            const double fr = f(c + h * kx[i]);
            K += kw[i] * (fl + fr);
            absK += kw[i] * (std::abs(fl) + std::abs(fr));
            if (i % 2 == 1) G += gw[i / 2] * (fl + fr);
        }
        out.evaluations += 21;
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * h * absK;
        return Panel{lo, hi, h * K, std::max(h * std::abs(K - G), floor)};
    };

    std::priority_queue<Panel> heap;
    const int count = std::max(1, initial_panels);
    for (int i = 0; i < count; ++i) {
        const double lo = a + (b - a) * i / count;
        const double hi = (i + 1 == count) ? b : a + (b - a) * (i + 1) / count;
        heap.push(panel(lo, hi));
    }

    auto total_error = [&] {
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            e += copy.top().error;
            copy.pop();
        }
        return e;
    };

    double err = total_error();
    std::vector<Panel> frozen;
    while (err > tol && out.evaluations < budget && !heap.empty()) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        const Panel left = panel(worst.a, mid);
        const Panel right = panel(mid, worst.b);
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (heap.size() % 64 == 0) {
            err = total_error();
            for (const Panel& p : frozen) err += p.error;
        }
    }

    double value = 0.0;
    double error = 0.0;
    std::vector<Panel> all;
    all.reserve(heap.size() + frozen.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    all.insert(all.end(), frozen.begin(), frozen.end());
    // Sum in position order so the result does not depend on heap layout.
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : all) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.error = error;
    out.converged = error <= tol;
    return out;
}

}  // namespace skln::detail
