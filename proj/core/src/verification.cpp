#include "skln/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "skln/cylinder.hpp"
#include "skln/errors.hpp"

namespace skln {

namespace {

struct LineFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double N = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - my - f.slope * (x[i] - mx);
        rss += e * e;
    }
    f.stderr_ = x.size() > 2 ? std::sqrt(rss / (N - 2.0) / sxx) : 0.0;
    return f;
}

// Rows on the anchor's side, walking away from it inside its segment.
std::vector<std::size_t> side_rows(const CylinderProfile& profile, const Anchor& anchor) {
    std::vector<std::size_t> rows;
    const auto& segs = profile.segments();
    const CylinderProfile::Segment* seg = nullptr;
    for (const auto& s : segs) {
        if (anchor.index >= s.begin && anchor.index < s.end) seg = &s;
    }
    if (!seg) {
        throw ArgumentError("anchor row lies outside the profile");
    }
    if (anchor.side == Anchor::Side::Right) {
        for (std::size_t i = anchor.index + 1; i < seg->end; ++i) rows.push_back(i);
    } else {
        for (std::size_t i = anchor.index; i-- > seg->begin;) rows.push_back(i);
    }
    return rows;
}

double fd_weight_derivative(const double* x, double x0, int m, int j) {
    // Fornberg weights for the first derivative; recomputed per call, m <= 5.
    double c[5][2] = {};
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < m; ++i) {
        const int mn = std::min(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int jj = 0; jj < i; ++jj) {
            const double c3 = x[i] - x[jj];
            c2 *= c3;
            if (jj == i - 1) {
                for (int kk = mn; kk >= 1; --kk) {
                    c[i][kk] = c1 * (kk * c[i - 1][kk - 1] - c5 * c[i - 1][kk]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int kk = mn; kk >= 1; --kk) {
                c[jj][kk] = (c4 * c[jj][kk] - kk * c[jj][kk - 1]) / c3;
            }
            c[jj][0] = c4 * c[jj][0] / c3;
        }
        c1 = c2;
    }
    return c[j][1];
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

HolderFit fit_holder_exponent(const CylinderProfile& profile, const Anchor& anchor,
                              const HolderWindow& window) {
    std::vector<double> x, y;
    for (std::size_t i : side_rows(profile, anchor)) {
        const double tau = std::abs(profile.t()[i] - anchor.t);
        if (tau > window.hi) break;
        if (tau < window.lo) continue;
        const double dev = std::abs(std::abs(profile.xi_p()[i]) - 1.0);
        if (dev > 0.0) {
            x.push_back(std::log(tau));
            y.push_back(std::log(dev));
        }
    }
    if (x.size() < 10) {
        throw ResolutionError("fit_holder_exponent: fewer than 10 samples in the window (" +
                              std::to_string(x.size()) + ")");
    }
    const LineFit f = least_squares(x, y);
    return {f.slope, f.stderr_, static_cast<int>(x.size())};
}

HolderFit fit_holder_exponent(const CylinderProfile& profile, const HolderWindow& window) {
    const auto anchor = profile.singular_anchor();
    if (!anchor) {
        throw ArgumentError("fit_holder_exponent: profile has no singular point");
    }
    return fit_holder_exponent(profile, *anchor, window);
}

double extrapolate_slope(const CylinderProfile& profile, const Anchor& anchor) {
    const auto rows = side_rows(profile, anchor);
    if (rows.size() < 3) {
        throw ResolutionError("extrapolate_slope: fewer than 3 samples beside the anchor");
    }
    const double e = 1.0 / profile.k();
    Eigen::Matrix3d A;
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
        const std::size_t r = rows[i];
        const double w = std::pow(std::abs(profile.t()[r] - anchor.t), e);
        A(i, 0) = 1.0;
        A(i, 1) = w;
        A(i, 2) = w * w;
        rhs(i) = profile.xi_p()[r];
    }
    return A.colPivHouseholderQr().solve(rhs)(0);
}

SharpnessWitness sharpness_witness(const CylinderProfile& profile, double gamma, double delta0) {
    const auto anchor = profile.singular_anchor();
    if (!anchor) {
        throw NoWitnessError("sharpness_witness: smooth profile has no singular point");
    }
    if (!(delta0 > 0.0)) {
        throw ArgumentError("sharpness_witness: delta0 must be positive");
    }
    const int k = profile.k();
    SharpnessWitness w;
    w.gamma = gamma;
    w.required_ratio = std::exp2(gamma - 1.0 / k - 0.02);
    w.t1 = anchor->t;
    const double dir = anchor->side == Anchor::Side::Right ? 1.0 : -1.0;
    const double base = profile.xi_p()[anchor->index];
    for (int i = 0; i < 4; ++i) {
        const double delta = std::ldexp(delta0, -i);
        w.t2[i] = w.t1 + dir * delta;
        const double slope = profile.evaluate(w.t2[i]).second;
        w.quotients[i] = std::abs(slope - base) / std::pow(delta, gamma);
    }
    w.min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        w.ratios[i] = w.quotients[i + 1] / w.quotients[i];
        w.min_ratio = std::min(w.min_ratio, w.ratios[i]);
    }
    w.found = w.min_ratio >= w.required_ratio && w.min_ratio > kDivergenceMargin;
    return w;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerificationReport audit(const CylinderProfile& profile, const ProblemSpec& spec,
                         const AuditOptions& options) {
    VerificationReport rep;
    rep.regime = profile.regime().tag;
    const int n = profile.n();
    const int k = profile.k();
    const double T = profile.half_width();
    const auto& t = profile.t();
    const auto& xi = profile.xi();
    const auto& xp = profile.xi_p();
    const std::size_t N = profile.size();
    const LevelSet& level = profile.level();
    const auto jump = profile.jump_index();
    const double tm = jump ? t[*jump] : 0.0;
    const auto folds = profile.fold_rows();
    auto is_fold = [&](std::size_t i) {
        return std::find(folds.begin(), folds.end(), i) != folds.end();
    };
    auto away = [&](std::size_t i) {
        if (jump && std::abs(t[i] - tm) <= options.exclusion) return false;
        return T - std::abs(t[i]) > options.exclusion;
    };

    // PDE residual with xi'' from the differentiated first integral.
    {
        const double target = spec.target_sigma();
        CheckResult c{"pde_residual", true, true, 0.0, options.residual_tol, ""};
        double worst_abs = 0.0;
        std::size_t worst_row = 0, used = 0;
        for (std::size_t i = 0; i < N; ++i) {
            if (!away(i) || is_fold(i)) continue;
            CylinderState st{t[i], xi[i], xp[i], std::nullopt};
            try {
                st.xi_pp = level.xi_pp(xi[i]);
            } catch (const DomainError&) {
                st.xi_pp = std::numeric_limits<double>::quiet_NaN();
            }
            const double err = std::abs(sigma_k_radial(st, n, k) - target);
            ++used;
            if (!(err <= worst_abs)) {
                worst_abs = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
                worst_row = i;
            }
        }
        rep.pde_residual_max = worst_abs;
        rep.pde_residual_rel = worst_abs / target;
        c.value = rep.pde_residual_rel;
        c.passed = rep.pde_residual_rel < options.residual_tol;
        c.detail = std::to_string(used) + " rows, worst at row " + std::to_string(worst_row);
        rep.checks.push_back(c);
    }

    // Conservation, with every row's error measured against the floating-point
    // scale of the two terms of H at that row.
    {
        rep.H_reference = level.H();
        CheckResult c{"first_integral", true, true, 0.0, options.drift_tol, ""};
        double worst = 0.0;
        std::size_t worst_row = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double H = first_integral(xi[i], xp[i], n, k);
            const double scale =
                std::max({1.0, std::abs(rep.H_reference), first_integral_scale(xi[i], xp[i], n, k)});
            const double d = std::abs(H - rep.H_reference) / scale;
            if (!(d <= worst)) {
                worst = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
                worst_row = i;
            }
        }
        rep.H_drift = worst;
        c.value = worst;
        c.passed = worst < options.drift_tol;
        c.detail = "worst at row " + std::to_string(worst_row);
        rep.checks.push_back(c);
    }

    // Cone: |xi'| > 1 off the folds, sigma_k > 0, and xi' pointing the way the
    // samples actually move.
    {
        CheckResult c{"cone", true, true, 0.0, 1.0, ""};
        std::string why;
        double min_speed = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < N && why.empty(); ++i) {
            const double sp = std::abs(xp[i]);
            if (is_fold(i)) {
                if (sp < 1.0 - 1e-12) why = "fold row " + std::to_string(i) + " has |xi'| < 1";
                continue;
            }
            min_speed = std::min(min_speed, sp);
            if (!(sp > 1.0)) {
                why = "row " + std::to_string(i) + " has |xi'| <= 1";
                break;
            }
            CylinderState st{t[i], xi[i], xp[i], level.xi_pp(xi[i])};
            if (!(sigma_k_radial(st, n, k) > 0.0)) {
                why = "row " + std::to_string(i) + " has sigma_k <= 0";
            }
        }
        for (const auto& seg : profile.segments()) {
            if (!why.empty()) break;
            for (std::size_t i = seg.begin; i + 1 < seg.end; ++i) {
                const double step = xi[i + 1] - xi[i];
                const bool ok_here = is_fold(i) || step * xp[i] > 0.0;
                const bool ok_next = is_fold(i + 1) || step * xp[i + 1] > 0.0;
                if (!ok_here || !ok_next) {
                    why = "sign of xi' disagrees with the samples near row " + std::to_string(i);
                    break;
                }
            }
        }
        rep.cone_ok = why.empty();
        c.value = std::isfinite(min_speed) ? min_speed : 1.0;
        c.passed = rep.cone_ok;
        c.detail = rep.cone_ok ? "min |xi'| off the folds " + format_double(c.value) : why;
        rep.checks.push_back(c);
    }

    // Finite-difference slope against the stored xi'.
    {
        CheckResult c{"slope_consistency", true, true, 0.0, options.slope_consistency_tol, ""};
        double worst = 0.0;
        std::size_t worst_row = 0;
        for (const auto& seg : profile.segments()) {
            if (seg.end - seg.begin < 5) continue;
            for (std::size_t i = seg.begin + 2; i + 2 < seg.end; ++i) {
                if (!away(i)) continue;
                const std::size_t j0 = i - 2;
                double fd = 0.0;
                for (int j = 0; j < 5; ++j) {
                    fd += fd_weight_derivative(&t[j0], t[i], 5, j) * xi[j0 + j];
                }
                const double rel = std::abs(fd - xp[i]) / std::abs(xp[i]);
                if (!(rel <= worst)) {
                    worst = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
                    worst_row = i;
                }
            }
        }
        rep.slope_consistency = worst;
        c.value = worst;
        c.passed = worst < options.slope_consistency_tol;
        c.detail = "worst at row " + std::to_string(worst_row);
        rep.checks.push_back(c);
    }

    // One-sided derivatives at the jump.
    {
        CheckResult c{"jump_values", jump.has_value(), true, 0.0, options.jump_tol, ""};
        if (jump) {
            const std::size_t j = *jump;
            const double m = spec.center_radius() * std::exp(t[j]);
            const double ref = (n - 2) / m;
            try {
                const double left = extrapolate_slope(profile, {t[j], Anchor::Side::Left, j});
                const double right = extrapolate_slope(profile, {t[j + 1], Anchor::Side::Right, j + 1});
                rep.jump_left = dlnu_dr_from_slope(left, m, n);
                rep.jump_right = dlnu_dr_from_slope(right, m, n);
                const double el = std::abs(*rep.jump_left + ref) / ref;
                const double er = std::abs(*rep.jump_right) / ref;
                const double cont = std::abs(xi[j] - xi[j + 1]);
                c.value = std::max({el, er, cont});
                c.passed = c.value < options.jump_tol;
                c.detail = "left " + format_double(*rep.jump_left) + ", right " +
                           format_double(*rep.jump_right) + ", expected " + format_double(-ref) +
                           " and 0";
            } catch (const Error& e) {
                c.passed = false;
                c.detail = e.what();
            }
        } else {
            c.detail = "no jump";
        }
        rep.checks.push_back(c);
    }

    // Hoelder exponent at the singular anchor.
    {
        const auto anchor = profile.singular_anchor();
        CheckResult c{"holder_exponent", anchor.has_value(), true, 0.0, options.holder_rel_tol, ""};
        if (anchor) {
            try {
                const HolderFit f = fit_holder_exponent(profile, *anchor, options.holder_window);
                rep.holder_exponent_fit = f.exponent;
                rep.holder_exponent_stderr = f.stderr_;
                c.value = std::abs(f.exponent * k - 1.0);
                c.passed = c.value <= options.holder_rel_tol;
                c.detail = "exponent " + format_double(f.exponent) + " +- " +
                           format_double(f.stderr_) + " from " + std::to_string(f.samples) +
                           " samples, expected 1/" + std::to_string(k);
            } catch (const Error& e) {
                c.passed = false;
                c.detail = e.what();
            }
        } else {
            c.detail = "smooth profile";
        }
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"touching_certificate", jump.has_value(), true, 0.0, 0.0, ""};
        if (jump) {
            rep.certificate = touching_certificate(profile, spec);
            c.passed = rep.certificate->passed;
            c.value = rep.certificate->gap;
            c.detail = rep.certificate->detail;
        } else {
            c.detail = "no jump; certificate vacuous";
        }
        rep.checks.push_back(c);
    }

    // Blow-up rate at both boundary spheres over the last resolved decade of d.
    {
        CheckResult c{"boundary_slope", spec.is_infinite(), true, 0.0, options.boundary_rel_tol, ""};
        if (spec.is_infinite()) {
            const double expected = -0.5 * (n - 2);
            double worst_slope_err = 0.0, worst_var = 0.0;
            double reported_slope = expected;
            std::string detail;
            for (int end = 0; end < 2; ++end) {
                std::vector<double> ld, lu, coef;
                double dmin = std::numeric_limits<double>::infinity();
                std::vector<std::pair<double, double>> pts;
                for (std::size_t i = 0; i < N; ++i) {
                    const double d = end == 0 ? spec.a() * std::expm1(t[i] + T)
                                              : -spec.b() * std::expm1(t[i] - T);
                    if (!(d > 0.0)) continue;
                    const double r = spec.center_radius() * std::exp(t[i]);
                    const double log_u = -0.5 * (n - 2) * (xi[i] + std::log(r));
                    pts.emplace_back(d, log_u);
                    dmin = std::min(dmin, d);
                }
                for (const auto& [d, log_u] : pts) {
                    if (d > 10.0 * dmin) continue;
                    ld.push_back(std::log(d));
                    lu.push_back(log_u);
                    coef.push_back(std::exp(log_u - expected * std::log(d)));
                }
                if (ld.size() < 3) {
                    detail = "boundary decade under-resolved";
                    worst_slope_err = std::numeric_limits<double>::infinity();
                    continue;
                }
                const double slope = least_squares(ld, lu).slope;
                const double err = std::abs(slope - expected) / std::abs(expected);
                const auto [lo, hi] = std::minmax_element(coef.begin(), coef.end());
                double mean = 0.0;
                for (double v : coef) mean += v;
                mean /= static_cast<double>(coef.size());
                const double var = (*hi - *lo) / mean;
                if (err >= worst_slope_err) {
                    worst_slope_err = err;
                    reported_slope = slope;
                }
                worst_var = std::max(worst_var, var);
                if (end == 1) rep.boundary_coefficient = coef.front();
            }
            rep.boundary_slope_fit = reported_slope;
            c.value = std::max(worst_slope_err, worst_var);
            c.passed = worst_slope_err < options.boundary_rel_tol &&
                       worst_var < options.boundary_rel_tol;
            if (detail.empty()) {
                detail = "slope " + format_double(reported_slope) + " (expected " +
                         format_double(expected) + "), coefficient variation " +
                         format_double(worst_var);
            }
            c.detail = detail;
        } else {
            c.detail = "finite boundary data";
        }
        rep.checks.push_back(c);
    }

    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return !c.enabled || c.passed; });
    return rep;
}

}  // namespace skln
