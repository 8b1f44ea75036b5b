#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skln/cylinder.hpp"

namespace skln {

/// Regime tags. Cases 2 and 3 lie on the frontier ln(b/a) = 2 T_bc; Case 2 has
/// b^{(n-2)/2} c2 < a^{(n-2)/2} c1 and its fold at the outer sphere, Case 3 the
/// reverse with its fold at the inner sphere.
enum class RegimeTag {
    Case1Smooth,
    Case2LeftSingular,
    Case3RightSingular,
    Case4InteriorJump,
    InfiniteBC,
};

std::string_view to_string(RegimeTag tag);
std::optional<RegimeTag> regime_from_string(std::string_view name);

struct Regime {
    RegimeTag tag = RegimeTag::Case1Smooth;
    /// Cylinder time of the derivative jump (Case 4 and infinite data).
    std::optional<double> t_m;
    /// First-integral value shared by every branch.
    double H = 0.0;
    /// Fold ordinate (Cases 2-4 and infinite data).
    std::optional<double> p;
    /// Inner-boundary slope of the smooth solution (Case 1, normalized orientation).
    std::optional<double> q_a;
    /// T(a,b,c1,c2); absent for infinite data.
    std::optional<double> T_bc;
    /// ln(b/a) within the classification tolerance of 2 T_bc.
    bool borderline = false;
    /// The construction ran on spec.inverted() and was mapped back.
    bool inverted = false;

    bool has_jump() const noexcept {
        return tag == RegimeTag::Case4InteriorJump || tag == RegimeTag::InfiniteBC;
    }
};

/// L and R are the two sides of a derivative jump; S is a profile without one.
enum class Branch : char { Single = 'S', Left = 'L', Right = 'R' };

/// A singular point of xi' (|xi'| = 1) and the side its samples lie on.
struct Anchor {
    enum class Side { Left, Right };
    double t;
    Side side;
    std::size_t index;
};

/// Sampled xi(t) on [-T, T] on a single contour of H. A derivative jump is
/// stored as two consecutive rows with equal t, tagged L then R.
class CylinderProfile {
public:
    struct Segment {
        Branch branch;
        std::size_t begin;
        std::size_t end;  // one past the last row
        /// +1 when xi' > 0 on the segment, -1 when xi' < 0.
        int orientation;
    };

    CylinderProfile() = default;

    /// Profile from raw samples (e.g. read from a file). Rows must have
    /// non-decreasing t; equal t is allowed only for an L row followed by an
    /// R row. The level is taken from the best-conditioned row.
    /// Throws ArgumentError naming the first offending row.
    static CylinderProfile from_samples(int n, int k, double T, Regime regime,
                                        std::vector<double> t, std::vector<double> xi,
                                        std::vector<double> xi_p, std::vector<Branch> branch);

    /// Used by the solver: the level is known exactly.
    static CylinderProfile from_level(int n, int k, double T, Regime regime, LevelSet level,
                                      std::vector<double> t, std::vector<double> xi,
                                      std::vector<double> xi_p, std::vector<Branch> branch);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double half_width() const noexcept { return T_; }
    const Regime& regime() const noexcept { return regime_; }
    const LevelSet& level() const { return *level_; }

    std::size_t size() const noexcept { return t_.size(); }
    const std::vector<double>& t() const noexcept { return t_; }
    const std::vector<double>& xi() const noexcept { return xi_; }
    const std::vector<double>& xi_p() const noexcept { return xi_p_; }
    const std::vector<Branch>& branch() const noexcept { return branch_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }

    /// Index of the L row of the jump pair, if any.
    std::optional<std::size_t> jump_index() const noexcept { return jump_index_; }
    bool has_jump() const noexcept { return jump_index_.has_value(); }

    /// Rows where |xi'| = 1 by construction: both jump rows, or the singular
    /// endpoint of a Case 2/3 profile.
    std::vector<std::size_t> fold_rows() const;

    /// The default singular anchor: the right side of the jump, or the
    /// singular endpoint. Empty for smooth profiles.
    std::optional<Anchor> singular_anchor() const;

    /// (xi, xi') at time t, obtained by inverting the level-set time map from
    /// the nearest sample. For t equal to the jump time the right limit is
    /// returned unless prefer_left is set.
    std::pair<double, double> evaluate(double t, bool prefer_left = false) const;

    /// Mutable access for fault-injection tests.
    std::vector<double>& mutable_xi_p() noexcept { return xi_p_; }
    std::vector<double>& mutable_xi() noexcept { return xi_; }

private:
    void index_segments();

    int n_ = 0;
    int k_ = 0;
    double T_ = 0.0;
    Regime regime_;
    std::optional<LevelSet> level_;
    std::vector<double> t_;
    std::vector<double> xi_;
    std::vector<double> xi_p_;
    std::vector<Branch> branch_;
    std::vector<Segment> segments_;
    std::optional<std::size_t> jump_index_;
};

}  // namespace skln
