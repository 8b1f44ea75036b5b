#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skln/problem.hpp"
#include "skln/profile.hpp"

namespace skln {

struct ClassifyOptions {
    /// Half-width tau_c of the band |ln(b/a) - 2 T_bc| treated as the frontier.
    double tau_c = 1e-9;
    /// Tolerance for T_bc and the regime's level. Must be well below tau_c.
    double tol = 1e-12;
};

/// Regime of the data and the scalars needed to build its profile.
/// Throws InconsistentDataError on the frontier with p_a == p_b.
Regime classify(const ProblemSpec& spec, const ClassifyOptions& options = {});

struct GridControl {
    /// Samples on each monotone branch, clustered toward the fold as s^k.
    int points_per_branch = 2001;
    /// Infinite data: branches stop at xi_min = min(xi_floor, p + xi_floor).
    double xi_floor = -20.0;
    /// Absolute tolerance of every segment quadrature.
    double tol = 1e-14;
};

/// Assembles xi on [-T, T] from level-set quadrature. Throws ConsistencyError
/// if the tabulated time map is not monotone.
CylinderProfile build_profile(const ProblemSpec& spec, const Regime& regime,
                              const GridControl& grid = {});

/// u(r) on the image of the profile grid.
struct RadialSolution {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> dlnu_dr;
    std::vector<Branch> branch;
    RegimeTag regime = RegimeTag::Case1Smooth;
    /// Jump radius and the one-sided values of d(ln u)/dr there.
    std::optional<double> m;
    std::optional<double> dlnu_dr_left;
    std::optional<double> dlnu_dr_right;
    /// u d^{(n-2)/2} at the innermost / outermost sample (infinite data).
    std::optional<double> inner_coefficient;
    std::optional<double> outer_coefficient;
};

RadialSolution reconstruct_u(const CylinderProfile& profile, const ProblemSpec& spec);

/// Radial viscosity conditions at the jump: no C^2 function touches from
/// above (strict gap in one-sided log-derivatives), and every admissible
/// touching slope from below maps to |d xi/dt| <= 1.
struct TouchingCertificate {
    bool applicable = false;
    bool passed = false;
    std::string detail;
    double m = 0.0;
    double dlnu_left = 0.0;
    double dlnu_right = 0.0;
    double gap = 0.0;
    /// Images of the slope interval [-(n-2)/m, 0] under d xi/dt.
    double image_lo = 0.0;
    double image_hi = 0.0;
};

TouchingCertificate touching_certificate(const CylinderProfile& profile, const ProblemSpec& spec);

/// Cylinder time at which the trajectory through `state` reaches `xi` along
/// its monotone branch, computed on the level of `state`. Used to check that
/// the profile is determined by any one of its interior states.
double trajectory_time(const CylinderState& state, double xi, int n, int k, double tol = 1e-14);

}  // namespace skln
