#include "skln/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "skln/errors.hpp"
#include "skln/quadrature.hpp"

namespace skln {

namespace {

constexpr double kFoldTol = 1e-9;

std::string row_message(const char* what, std::size_t row) {
    return std::string("profile row ") + std::to_string(row) + ": " + what;
}

}  // namespace

std::string_view to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Case1Smooth: return "Case1Smooth";
        case RegimeTag::Case2LeftSingular: return "Case2LeftSingular";
        case RegimeTag::Case3RightSingular: return "Case3RightSingular";
        case RegimeTag::Case4InteriorJump: return "Case4InteriorJump";
        case RegimeTag::InfiniteBC: return "InfiniteBC";
    }
    return "unknown";
}

std::optional<RegimeTag> regime_from_string(std::string_view name) {
    for (RegimeTag tag : {RegimeTag::Case1Smooth, RegimeTag::Case2LeftSingular,
                          RegimeTag::Case3RightSingular, RegimeTag::Case4InteriorJump,
                          RegimeTag::InfiniteBC}) {
        if (to_string(tag) == name) return tag;
    }
    return std::nullopt;
}

CylinderProfile CylinderProfile::from_level(int n, int k, double T, Regime regime,
                                            LevelSet level, std::vector<double> t,
                                            std::vector<double> xi, std::vector<double> xi_p,
                                            std::vector<Branch> branch) {
    if (n < 3 || k < 2 || k > n) {
        throw ArgumentError("profile: invalid (n, k)");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ArgumentError("profile: half-width must be positive");
    }
    const std::size_t N = t.size();
    if (N < 2) {
        throw ArgumentError("profile: needs at least two rows");
    }
    if (xi.size() != N || xi_p.size() != N || branch.size() != N) {
        throw ArgumentError("profile: column lengths differ");
    }
    const double slack = 1e-12 * std::max(1.0, T);
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(xi[i]) || !std::isfinite(xi_p[i])) {
            throw ArgumentError(row_message("non-finite value", i));
        }
        if (std::abs(t[i]) > T + slack) {
            throw ArgumentError(row_message("t outside [-T, T]", i));
        }
        if (i == 0) continue;
        if (t[i] < t[i - 1]) {
            throw ArgumentError(row_message("t decreases", i));
        }
        if (t[i] == t[i - 1] && !(branch[i - 1] == Branch::Left && branch[i] == Branch::Right)) {
            throw ArgumentError(row_message("repeated t outside an L/R jump pair", i));
        }
        if (branch[i - 1] != branch[i]) {
            const bool ok = branch[i - 1] == Branch::Left && branch[i] == Branch::Right;
            if (!ok) {
                throw ArgumentError(row_message("branch tags must be all S, or L rows then R rows", i));
            }
            if (t[i] != t[i - 1]) {
                throw ArgumentError(row_message("the L/R jump pair must share its t value", i));
            }
        }
    }
    const bool has_jump = branch.front() != Branch::Single || branch.back() != Branch::Single;
    if (has_jump && (branch.front() != Branch::Left || branch.back() != Branch::Right)) {
        throw ArgumentError("profile: a jump profile needs both L and R rows");
    }

    CylinderProfile p;
    p.n_ = n;
    p.k_ = k;
    p.T_ = T;
    p.regime_ = regime;
    p.level_ = level;
    p.t_ = std::move(t);
    p.xi_ = std::move(xi);
    p.xi_p_ = std::move(xi_p);
    p.branch_ = std::move(branch);
    p.index_segments();
    return p;
}

CylinderProfile CylinderProfile::from_samples(int n, int k, double T, Regime regime,
                                              std::vector<double> t, std::vector<double> xi,
                                              std::vector<double> xi_p,
                                              std::vector<Branch> branch) {
    if (n < 3 || k < 2 || k > n) {
        throw ArgumentError("profile: invalid (n, k)");
    }
    if (t.empty() || xi.size() != t.size() || xi_p.size() != t.size()) {
        throw ArgumentError("profile: column lengths differ or are empty");
    }
    // The rounding error of H is proportional to first_integral_scale, so
    // the reference level comes from the row where that scale is smallest.
    std::size_t best = 0;
    double best_scale = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(xi[i]) || !std::isfinite(xi_p[i])) {
            throw ArgumentError(row_message("non-finite value", i));
        }
        const double scale = first_integral_scale(xi[i], xi_p[i], n, k);
        if (scale < best_scale) {
            best_scale = scale;
            best = i;
        }
    }
    LevelSet level = LevelSet::from_state(xi[best], xi_p[best], n, k);
    regime.H = level.H();
    return from_level(n, k, T, regime, level, std::move(t), std::move(xi), std::move(xi_p),
                      std::move(branch));
}

void CylinderProfile::index_segments() {
    segments_.clear();
    jump_index_.reset();
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= t_.size(); ++i) {
        if (i == t_.size() || branch_[i] != branch_[begin]) {
            Segment seg{branch_[begin], begin, i, 0};
            const double rise = xi_[i - 1] - xi_[begin];
            if (i - begin >= 2 && rise != 0.0) {
                seg.orientation = rise > 0.0 ? 1 : -1;
            } else {
                seg.orientation = xi_p_[begin] > 0.0 ? 1 : -1;
            }
            segments_.push_back(seg);
            if (i < t_.size()) {
                jump_index_ = i - 1;
            }
            begin = i;
        }
    }
}

std::vector<std::size_t> CylinderProfile::fold_rows() const {
    if (jump_index_) {
        return {*jump_index_, *jump_index_ + 1};
    }
    std::vector<std::size_t> rows;
    if (std::abs(std::abs(xi_p_.front()) - 1.0) <= kFoldTol) rows.push_back(0);
    if (std::abs(std::abs(xi_p_.back()) - 1.0) <= kFoldTol) rows.push_back(size() - 1);
    return rows;
}

std::optional<Anchor> CylinderProfile::singular_anchor() const {
    if (jump_index_) {
        const std::size_t j = *jump_index_ + 1;
        return Anchor{t_[j], Anchor::Side::Right, j};
    }
    const auto rows = fold_rows();
    if (rows.empty()) {
        return std::nullopt;
    }
    const std::size_t j = rows.front();
    return Anchor{t_[j], j == 0 ? Anchor::Side::Right : Anchor::Side::Left, j};
}

std::pair<double, double> CylinderProfile::evaluate(double t, bool prefer_left) const {
    const double slack = 1e-12 * std::max(1.0, T_);
    if (t < t_.front() - slack || t > t_.back() + slack) {
        throw DomainError("evaluate: t outside the profile");
    }
    t = std::clamp(t, t_.front(), t_.back());
    if (jump_index_ && t == t_[*jump_index_]) {
        const std::size_t j = prefer_left ? *jump_index_ : *jump_index_ + 1;
        return {xi_[j], xi_p_[j]};
    }
    const Segment* seg = &segments_.front();
    for (const Segment& s : segments_) {
        if (t >= t_[s.begin] && t <= t_[s.end - 1]) {
            seg = &s;
            break;
        }
    }
    const auto first = t_.begin() + static_cast<std::ptrdiff_t>(seg->begin);
    const auto last = t_.begin() + static_cast<std::ptrdiff_t>(seg->end);
    auto it = std::upper_bound(first, last, t);
    std::size_t j = static_cast<std::size_t>(it - t_.begin());
    if (j > seg->begin) --j;
    if (j + 1 >= seg->end) j = seg->end - 2;
    if (t == t_[j]) return {xi_[j], xi_p_[j]};
    if (t == t_[j + 1]) return {xi_[j + 1], xi_p_[j + 1]};

    const LevelSet& lv = *level_;
    const double s = lv.signed_level();
    const int dir = seg->orientation;
    // Time elapsed from row j to the point at ordinate x along the segment.
    auto elapsed = [&](double x) {
        const double lo = std::min(xi_[j], x);
        const double hi = std::max(xi_[j], x);
        return transit_time(lo, hi, s, n_, k_, 1e-15 + 1e-14 * std::abs(t_[j + 1] - t_[j])).value;
    };
    double lo = xi_[j];
    double hi = xi_[j + 1];
    const double target = t - t_[j];
    // Start from linear interpolation in t.
    double x = lo + (hi - lo) * target / (t_[j + 1] - t_[j]);
    for (int it_count = 0; it_count < 60; ++it_count) {
        const double g = elapsed(x) - target;
        if (std::abs(g) <= 4e-16 * std::max(1.0, std::abs(t))) break;
        // g increases as x moves from xi_j toward xi_{j+1}.
        if (g > 0.0) hi = x; else lo = x;
        double next = x - g * lv.speed(x) * dir;
        const bool inside = (next - lo) * (next - hi) < 0.0;
        if (!inside) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return {x, dir * lv.speed(x)};
}

}  // namespace skln
