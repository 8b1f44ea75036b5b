#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "skln/problem.hpp"
#include "skln/solver.hpp"

namespace skln::cli {

enum ExitCode : int {
    kExitPass = 0,
    kExitAuditFail = 1,
    kExitUsage = 2,
    kExitInconsistent = 3,
    kExitIo = 4,
};

struct RunConfig {
    std::string subcommand;

    // Problem (classify, solve, verify, sweep).
    int n = 7;
    int k = 2;
    double a = 1.0;
    double b = 10.0;
    bool infinite = false;
    std::optional<double> c1;
    std::optional<double> c2;

    // Tolerances and grid.
    double tau_c = 1e-9;
    double tol = 1e-12;
    int points_per_branch = 2001;
    double xi_floor = -20.0;
    double grid_tol = 1e-14;

    // Paths and format.
    std::string out;
    std::string out_profile;
    std::string out_report;
    std::string profile;
    std::string format = "csv";

    // contours
    double xi_min = -1.5;
    double xi_max = 1.5;
    double q_min = -3.0;
    double q_max = 3.0;
    int nx = 201;
    int nq = 201;

    // sweep
    double c1_min = 0.1;
    double c1_max = 10.0;
    double c2_min = 0.1;
    double c2_max = 10.0;
    int steps = 20;
    int threads = 1;
    bool audit = false;

    /// Builds the ProblemSpec; throws ArgumentError if the data is incomplete.
    ProblemSpec spec() const;
    ClassifyOptions classify_options() const;
    GridControl grid() const;
};

nlohmann::json to_json(const RunConfig& cfg);

inline constexpr int kMaxContourResolution = 4096;

/// H on a (xi, q = xi') grid with the mask |q| < 1.
struct ContourGrid {
    int n = 7;
    int k = 2;
    std::vector<double> xi;
    std::vector<double> q;
    /// H[i * q.size() + j] at (xi[i], q[j]).
    std::vector<double> H;
    std::vector<unsigned char> mask;

    double at(std::size_t i, std::size_t j) const { return H[i * q.size() + j]; }
    bool masked(std::size_t i, std::size_t j) const { return mask[i * q.size() + j] != 0; }
};

/// Throws ArgumentError for resolutions outside [2, 4096] or empty ranges.
ContourGrid contour_grid(int n, int k, double xi_min, double xi_max, double q_min, double q_max,
                         int nx, int nq);

struct SweepCell {
    int i = 0;
    int j = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::string regime;
    /// ln(b/a) - 2 T_bc.
    double margin = 0.0;
    bool jump = false;
    double inner_slope = 0.0;
    double outer_slope = 0.0;
    std::optional<bool> audit_passed;
    std::string error;
};

/// Geometric (c1, c2) grid at fixed (n, k, a, b); cells are independent and
/// are returned in row-major order regardless of the thread count.
std::vector<SweepCell> run_sweep(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skln::cli
