#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "skln/problem.hpp"
#include "skln/profile.hpp"
#include "skln/solver.hpp"

namespace skln {

/// Window of |t - anchor| used for the Hoelder fit.
struct HolderWindow {
    double lo = 1e-6;
    double hi = 1e-3;
};

struct HolderFit {
    double exponent = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
};

/// Least-squares slope of log| |xi'| - 1 | against log|t - anchor| over the
/// window. Throws ResolutionError with fewer than 10 samples in the window.
HolderFit fit_holder_exponent(const CylinderProfile& profile, const Anchor& anchor,
                              const HolderWindow& window = {});
/// Uses profile.singular_anchor(); throws ArgumentError for smooth profiles.
HolderFit fit_holder_exponent(const CylinderProfile& profile, const HolderWindow& window = {});

/// One-sided limit of xi' at an anchor, extrapolated from the three nearest
/// samples with the model L + c tau^{1/k} + d tau^{2/k}.
double extrapolate_slope(const CylinderProfile& profile, const Anchor& anchor);

/// Evidence that xi' is not C^{0,gamma} at the anchor: the quotients
/// |xi'(t1) - xi'(t2)| / |t1 - t2|^gamma over dyadic offsets delta0 / 2^j.
struct SharpnessWitness {
    bool found = false;
    double gamma = 0.0;
    /// Per-halving growth needed: 2^{gamma - 1/k - 0.02}.
    double required_ratio = 0.0;
    double t1 = 0.0;
    std::array<double, 4> t2{};
    std::array<double, 4> quotients{};
    std::array<double, 3> ratios{};
    double min_ratio = 0.0;
};

/// Growth per halving above which the quotients are reported as divergent.
inline constexpr double kDivergenceMargin = 1.035;

/// Throws NoWitnessError for profiles without a singular anchor.
SharpnessWitness sharpness_witness(const CylinderProfile& profile, double gamma,
                                   double delta0 = 1e-4);

struct CheckResult {
    std::string name;
    bool enabled = true;
    bool passed = true;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct AuditOptions {
    double residual_tol = 1e-6;
    double drift_tol = 1e-8;
    double slope_consistency_tol = 1e-5;
    double jump_tol = 1e-6;
    double holder_rel_tol = 0.05;
    double boundary_rel_tol = 0.01;
    /// Rows closer than this to the jump time or to +-T are skipped by the
    /// residual and slope checks.
    double exclusion = 0.01;
    HolderWindow holder_window{};
};

struct VerificationReport {
    RegimeTag regime = RegimeTag::Case1Smooth;
    double pde_residual_max = 0.0;
    double pde_residual_rel = 0.0;
    double H_reference = 0.0;
    double H_drift = 0.0;
    bool cone_ok = false;
    double slope_consistency = 0.0;
    std::optional<double> holder_exponent_fit;
    std::optional<double> holder_exponent_stderr;
    std::optional<double> jump_left;
    std::optional<double> jump_right;
    std::optional<double> boundary_slope_fit;
    std::optional<double> boundary_coefficient;
    std::optional<TouchingCertificate> certificate;
    std::vector<CheckResult> checks;
    bool passed = false;

    const CheckResult* find(const std::string& name) const;
};

/// Runs every applicable check on one profile. Failures are recorded, not thrown.
VerificationReport audit(const CylinderProfile& profile, const ProblemSpec& spec,
                         const AuditOptions& options = {});

}  // namespace skln
