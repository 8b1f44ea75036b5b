#include "skln/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skln/cylinder.hpp"
#include "skln/errors.hpp"
#include "skln/quadrature.hpp"
#include "skln/rootfind.hpp"

namespace skln {

namespace {

// Samples of one monotone branch of `level`, listed from its top ordinate
// xi_top down to xi_end, with elapsed times from the top.
struct BranchTable {
    std::vector<double> xi;
    std::vector<double> elapsed;
};

BranchTable tabulate_branch(const LevelSet& level, double xi_top, double xi_end, double power,
                            int count, double tol) {
    if (count < 2) {
        throw ArgumentError("build_profile: points_per_branch must be at least 2");
    }
    BranchTable out;
    out.xi.resize(count);
    out.elapsed.resize(count);
    const double range = xi_end - xi_top;
    for (int j = 0; j < count; ++j) {
        const double s = static_cast<double>(j) / (count - 1);
        // For large k the graded fraction underflows the spacing of xi near the fold.
        const double frac = std::max(std::pow(s, power), 1e-12 * j);
        out.xi[j] = (j == count - 1) ? xi_end : xi_top + range * frac;
    }
    out.elapsed[0] = 0.0;
    for (int j = 1; j < count; ++j) {
        const double dt = transit_time(out.xi[j], out.xi[j - 1], level.signed_level(), level.n(),
                                       level.k(), tol)
                              .value;
        if (!(dt > 0.0)) {
            throw ConsistencyError("build_profile: tabulated time map is not strictly monotone");
        }
        out.elapsed[j] = out.elapsed[j - 1] + dt;
    }
    return out;
}

struct Columns {
    std::vector<double> t, xi, xi_p;
    std::vector<Branch> branch;

    void push(double t_, double xi_, double xi_p_, Branch b) {
        t.push_back(t_);
        xi.push_back(xi_);
        xi_p.push_back(xi_p_);
        branch.push_back(b);
    }
};

// Branch running forward in time from its top at t_top (xi' < 0).
void append_descending(Columns& c, const LevelSet& level, const BranchTable& tab, double t_top,
                       std::optional<double> t_end, Branch tag, bool skip_first) {
    const std::size_t N = tab.xi.size();
    for (std::size_t j = skip_first ? 1 : 0; j < N; ++j) {
        double t = t_top + tab.elapsed[j];
        if (j + 1 == N && t_end) t = *t_end;
        c.push(t, tab.xi[j], -level.speed(tab.xi[j]), tag);
    }
}

// Branch running backward in time from its top at t_top (xi' > 0), pushed
// in increasing t.
void append_ascending(Columns& c, const LevelSet& level, const BranchTable& tab, double t_top,
                      std::optional<double> t_start, Branch tag) {
    const std::size_t N = tab.xi.size();
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t j = N - 1 - i;
        double t = t_top - tab.elapsed[j];
        if (i == 0 && t_start) t = *t_start;
        c.push(t, tab.xi[j], level.speed(tab.xi[j]), tag);
    }
}

void check_monotone(const Columns& c) {
    for (std::size_t i = 1; i < c.t.size(); ++i) {
        const bool pair = c.branch[i - 1] == Branch::Left && c.branch[i] == Branch::Right;
        if (pair ? c.t[i] != c.t[i - 1] : !(c.t[i] > c.t[i - 1])) {
            std::ostringstream msg;
            msg << "build_profile: time map not monotone at row " << i;
            throw ConsistencyError(msg.str());
        }
    }
}

}  // namespace

Regime classify(const ProblemSpec& spec, const ClassifyOptions& options) {
    const int n = spec.n();
    const int k = spec.k();
    Regime r;
    if (spec.is_infinite()) {
        r.tag = RegimeTag::InfiniteBC;
        r.t_m = 0.0;
        const double p = solve_p_for_T(spec.half_width(), n, k, options.tol);
        r.p = p;
        r.H = LevelSet::from_peak(p, n, k).H();
        return r;
    }
    const double pa = spec.p_a();
    const double pb = spec.p_b();
    const double Tbc = T_bc(spec, options.tol).quad.value;
    r.T_bc = Tbc;
    const double gap = spec.log_ratio() - 2.0 * Tbc;
    if (std::abs(gap) <= options.tau_c) {
        // Ordinates recomputed from c1, c2 only agree to rounding.
        if (std::abs(pa - pb) <= 1e-14 * std::max(1.0, std::abs(pa))) {
            throw InconsistentDataError(
                "classify: ln(b/a) = 2 T_bc with equal boundary ordinates is impossible");
        }
        r.borderline = true;
        r.tag = pa > pb ? RegimeTag::Case3RightSingular : RegimeTag::Case2LeftSingular;
        r.inverted = pa < pb;
        const double p = std::max(pa, pb);
        r.p = p;
        r.H = LevelSet::from_peak(p, n, k).H();
        return r;
    }
    if (gap < 0.0) {
        r.tag = RegimeTag::Case1Smooth;
        r.inverted = pa < pb;
        const QaSolution qa = solve_qa(r.inverted ? spec.inverted() : spec, options.tol);
        r.H = qa.H;
        r.q_a = qa.q_a;
        return r;
    }
    r.tag = RegimeTag::Case4InteriorJump;
    const double p = solve_p_case4(spec, options.tol);
    const GlueTimes g = glue_times(p, spec);
    r.p = p;
    r.t_m = g.t_minus - g.t_plus;
    r.H = LevelSet::from_peak(p, n, k).H();
    return r;
}

CylinderProfile build_profile(const ProblemSpec& spec, const Regime& regime,
                              const GridControl& grid) {
    const int n = spec.n();
    const int k = spec.k();
    const double T = spec.half_width();
    const int N = grid.points_per_branch;
    Columns c;

    const ProblemSpec work = regime.inverted ? spec.inverted() : spec;
    std::optional<LevelSet> level;

    switch (regime.tag) {
        case RegimeTag::Case1Smooth: {
            level.emplace(regime.H, n, k);
            const BranchTable tab = tabulate_branch(*level, work.p_a(), work.p_b(), 1.0, N, grid.tol);
            append_descending(c, *level, tab, -T, T, Branch::Single, false);
            break;
        }
        case RegimeTag::Case2LeftSingular:
        case RegimeTag::Case3RightSingular: {
            if (!regime.p) throw ArgumentError("build_profile: regime lacks its fold ordinate");
            level = LevelSet::from_peak(*regime.p, n, k);
            const BranchTable tab =
                tabulate_branch(*level, work.p_a(), work.p_b(), static_cast<double>(k), N, grid.tol);
            append_descending(c, *level, tab, -T, T, Branch::Single, false);
            // The fold is exact by construction.
            c.xi_p.front() = -1.0;
            break;
        }
        case RegimeTag::Case4InteriorJump:
        case RegimeTag::InfiniteBC: {
            if (!regime.p || !regime.t_m) {
                throw ArgumentError("build_profile: regime lacks its jump data");
            }
            const double p = *regime.p;
            const double tm = *regime.t_m;
            level = LevelSet::from_peak(p, n, k);
            double left_end, right_end;
            std::optional<double> t_lo, t_hi;
            if (regime.tag == RegimeTag::InfiniteBC) {
                left_end = right_end = std::min(grid.xi_floor, p + grid.xi_floor);
            } else {
                left_end = spec.p_a();
                right_end = spec.p_b();
                t_lo = -T;
                t_hi = T;
            }
            const double power = static_cast<double>(k);
            const BranchTable left = tabulate_branch(*level, p, left_end, power, N, grid.tol);
            const BranchTable right =
                (right_end == left_end) ? left
                                        : tabulate_branch(*level, p, right_end, power, N, grid.tol);
            append_ascending(c, *level, left, tm, t_lo, Branch::Left);
            append_descending(c, *level, right, tm, t_hi, Branch::Right, false);
            const std::size_t j = left.xi.size() - 1;
            c.xi_p[j] = 1.0;
            c.xi_p[j + 1] = -1.0;
            break;
        }
    }

    if (regime.inverted) {
        Columns m;
        for (std::size_t i = c.t.size(); i-- > 0;) {
            m.push(-c.t[i], c.xi[i], -c.xi_p[i], c.branch[i]);
        }
        c = std::move(m);
    }
    check_monotone(c);
    return CylinderProfile::from_level(n, k, T, regime, *level, std::move(c.t), std::move(c.xi),
                                       std::move(c.xi_p), std::move(c.branch));
}

RadialSolution reconstruct_u(const CylinderProfile& profile, const ProblemSpec& spec) {
    const int n = profile.n();
    RadialSolution out;
    out.regime = profile.regime().tag;
    const std::size_t N = profile.size();
    out.r.resize(N);
    out.u.resize(N);
    out.dlnu_dr.resize(N);
    out.branch = profile.branch();
    for (std::size_t i = 0; i < N; ++i) {
        const RadialPoint rp = from_cylinder(profile.t()[i], profile.xi()[i], spec);
        out.r[i] = rp.r;
        out.u[i] = rp.u;
        out.dlnu_dr[i] = dlnu_dr_from_slope(profile.xi_p()[i], rp.r, n);
    }
    if (auto j = profile.jump_index()) {
        out.m = out.r[*j];
        out.dlnu_dr_left = out.dlnu_dr[*j];
        out.dlnu_dr_right = out.dlnu_dr[*j + 1];
    }
    if (spec.is_infinite()) {
        const double T = spec.half_width();
        const double e = 0.5 * (n - 2);
        const double d_in = spec.a() * std::expm1(profile.t().front() + T);
        const double d_out = -spec.b() * std::expm1(profile.t().back() - T);
        out.inner_coefficient = out.u.front() * std::pow(d_in, e);
        out.outer_coefficient = out.u.back() * std::pow(d_out, e);
    }
    return out;
}

TouchingCertificate touching_certificate(const CylinderProfile& profile, const ProblemSpec& spec) {
    TouchingCertificate c;
    const auto j = profile.jump_index();
    if (!j) {
        c.detail = "no jump; certificate vacuous";
        return c;
    }
    c.applicable = true;
    const int n = profile.n();
    const double t = profile.t()[*j];
    c.m = spec.center_radius() * std::exp(t);
    c.dlnu_left = dlnu_dr_from_slope(profile.xi_p()[*j], c.m, n);
    c.dlnu_right = dlnu_dr_from_slope(profile.xi_p()[*j + 1], c.m, n);
    c.gap = c.dlnu_right - c.dlnu_left;
    // Smooth functions touching from below have slopes in [left, right].
    c.image_lo = slope_from_dlnu_dr(c.dlnu_left, c.m, n);
    c.image_hi = slope_from_dlnu_dr(c.dlnu_right, c.m, n);
    const bool strict = c.gap > 0.0;
    const bool bounded = std::abs(c.image_lo) <= 1.0 + 1e-12 && std::abs(c.image_hi) <= 1.0 + 1e-12;
    c.passed = strict && bounded;
    std::ostringstream os;
    os.precision(17);
    if (!strict) {
        os << "one-sided derivative gap " << c.gap << " is not strictly positive";
    } else if (!bounded) {
        os << "touching slopes map to [" << c.image_hi << ", " << c.image_lo
           << "], outside [-1, 1]";
    } else {
        os << "gap " << c.gap << ", touching slopes map onto [" << c.image_hi << ", "
           << c.image_lo << "]";
    }
    c.detail = os.str();
    return c;
}

double trajectory_time(const CylinderState& state, double xi, int n, int k, double tol) {
    if (std::abs(state.xi_p) <= 1.0) {
        throw DomainError("trajectory_time: state must satisfy |xi'| > 1");
    }
    const LevelSet level = LevelSet::from_state(state.xi, state.xi_p, n, k);
    const double lo = std::min(state.xi, xi);
    const double hi = std::max(state.xi, xi);
    const double dt = transit_time(lo, hi, level.signed_level(), n, k, tol).value;
    // Along a decreasing branch, lower ordinates are reached later.
    const double oriented = (xi < state.xi) ? dt : -dt;
    return state.t + (state.xi_p < 0.0 ? oriented : -oriented);
}

}  // namespace skln
