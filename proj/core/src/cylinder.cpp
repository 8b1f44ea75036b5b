#include "skln/cylinder.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "skln/errors.hpp"
#include "skln/symfuncs.hpp"

namespace skln {

namespace {

int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

// 1 - x^2 without cancellation near |x| = 1.
double one_minus_square(double x) { return (1.0 - x) * (1.0 + x); }

}  // namespace

CylinderPoint to_cylinder(double r, double u, const ProblemSpec& spec) {
    if (!(r > spec.a() && r < spec.b())) {
        throw DomainError("to_cylinder: radius outside the open annulus");
    }
    if (!(u > 0.0)) {
        throw DomainError("to_cylinder: u must be positive");
    }
    const double t = std::log(r) - 0.5 * std::log(spec.a() * spec.b());
    const double xi = -2.0 / (spec.n() - 2) * std::log(u) - std::log(r);
    return {t, xi};
}

RadialPoint from_cylinder(double t, double xi, const ProblemSpec& spec) {
    const double log_r = t + 0.5 * std::log(spec.a() * spec.b());
    const double u = std::exp(-0.5 * (spec.n() - 2) * (xi + log_r));
    return {std::exp(log_r), u};
}

double dlnu_dr_from_slope(double xi_p, double r, int n) {
    return (n - 2) * (-1.0 - xi_p) / (2.0 * r);
}

double slope_from_dlnu_dr(double dlnu_dr, double r, int n) {
    return -2.0 / (n - 2) * r * dlnu_dr - 1.0;
}

double sigma_k_radial(const CylinderState& state, int n, int k) {
    if (!state.xi_pp) {
        throw ArgumentError("sigma_k_radial: state has no second derivative");
    }
    const double w = one_minus_square(state.xi_p);
    const double coeff = parity_sign(k) * std::ldexp(binomial(n - 1, k - 1), 1 - k);
    const double bracket = *state.xi_pp + (n - 2.0 * k) / (2.0 * k) * w;
    return coeff * std::exp(2.0 * k * state.xi) * std::pow(w, k - 1) * bracket;
}

double first_integral(double xi, double xi_p, int n, int k) {
    const double w = one_minus_square(xi_p);
    return std::exp((2.0 * k - n) * xi) * std::pow(w, k) - parity_sign(k) * std::exp(-n * xi);
}

double first_integral_scale(double xi, double xi_p, int n, int k) {
    const double w = one_minus_square(xi_p);
    return std::max(std::abs(std::exp((2.0 * k - n) * xi) * std::pow(w, k)), std::exp(-n * xi));
}

LevelSet::LevelSet(double H, int n, int k)
    : H_(H), s_(parity_sign(k) * H), n_(n), k_(k),
      peak_(std::numeric_limits<double>::quiet_NaN()) {
    if (n < 3 || k < 1 || k > n) {
        throw ArgumentError("LevelSet: invalid (n, k)");
    }
    if (!std::isfinite(H)) {
        throw ArgumentError("LevelSet: non-finite first-integral value");
    }
    if (s_ < 0.0) {
        peak_ = -std::log(-s_) / n;
    }
}

LevelSet LevelSet::from_peak(double peak, int n, int k) {
    LevelSet level(-parity_sign(k) * std::exp(-n * peak), n, k);
    level.peak_ = peak;
    return level;
}

LevelSet LevelSet::from_state(double xi, double xi_p, int n, int k) {
    return LevelSet(first_integral(xi, xi_p, n, k), n, k);
}

double LevelSet::peak_xi() const {
    if (!has_peak()) {
        throw DomainError("LevelSet: level has no fold point ((-1)^k H >= 0)");
    }
    return peak_;
}

double LevelSet::bracket(double xi) const {
    if (s_ < 0.0) {
        const double eta = xi - peak_;
        if (eta > 0.0) {
            if (eta > 1e-12 * std::max(1.0, std::abs(peak_))) {
                throw DomainError("LevelSet: xi above the fold of the level");
            }
            return 0.0;
        }
        return -std::expm1(n_ * eta);
    }
    return 1.0 + s_ * std::exp(n_ * xi);
}

double LevelSet::speed(double xi) const {
    const double root = std::pow(bracket(xi), 1.0 / k_);
    return std::sqrt(1.0 + std::exp(-2.0 * xi) * root);
}

double LevelSet::time_density(double xi) const { return 1.0 / speed(xi); }

double LevelSet::xi_pp(double xi) const {
    const double B = bracket(xi);
    const double s_exp = (s_ < 0.0) ? -std::exp(n_ * (xi - peak_)) : s_ * std::exp(n_ * xi);
    const double root = std::pow(B, 1.0 / k_);
    if (B == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 0.5 * std::exp(-2.0 * xi) * (-2.0 * root + (static_cast<double>(n_) / k_) * root / B * s_exp);
}

namespace {

struct FiniteDifferences {
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

FiniteDifferences radial_differences(const std::function<double(double)>& u, double r, int n,
                                     double h) {
    // u is radial, so f(x) = u(|x|) and every probe point only needs its norm.
    auto f = [&](const Eigen::VectorXd& x) { return u(x.norm()); };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    x0(0) = r;
    const double f0 = f(x0);

    FiniteDifferences d{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x0;
        Eigen::VectorXd xm = x0;
        xp(i) += h;
        xm(i) -= h;
        const double fp = f(xp);
        const double fm = f(xm);
        d.gradient(i) = (fp - fm) / (2.0 * h);
        d.hessian(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd xpp = x0, xpm = x0, xmp = x0, xmm = x0;
            xpp(i) += h; xpp(j) += h;
            xpm(i) += h; xpm(j) -= h;
            xmp(i) -= h; xmp(j) += h;
            xmm(i) -= h; xmm(j) -= h;
            const double v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
            d.hessian(i, j) = v;
            d.hessian(j, i) = v;
        }
    }
    return d;
}

}  // namespace

AmbientOracleResult ambient_oracle_sigma_k(const AmbientSample& sample, int n, int k) {
    if (!sample.u) {
        throw ArgumentError("ambient_oracle_sigma_k: no profile supplied");
    }
    if (!(sample.r > 0.0)) {
        throw DomainError("ambient_oracle_sigma_k: radius must be positive");
    }
    const double h = sample.h > 0.0 ? sample.h : sample.r * 2e-3;

    FiniteDifferences d = radial_differences(sample.u, sample.r, n, h);
    if (sample.richardson) {
        const FiniteDifferences half = radial_differences(sample.u, sample.r, n, 0.5 * h);
        d.gradient = (4.0 * half.gradient - d.gradient) / 3.0;
        d.hessian = (4.0 * half.hessian - d.hessian) / 3.0;
    }

    const double u0 = sample.u(sample.r);
    const double nm2 = n - 2.0;
    const double w1 = std::pow(u0, -(n + 2.0) / nm2);
    const double w2 = std::pow(u0, -2.0 * n / nm2);
    const Eigen::MatrixXd A = -2.0 / nm2 * w1 * d.hessian +
                              2.0 * n / (nm2 * nm2) * w2 * d.gradient * d.gradient.transpose() -
                              2.0 / (nm2 * nm2) * w2 * d.gradient.squaredNorm() *
                                  Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd minus_A = -0.5 * (A + A.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(minus_A, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();

    AmbientOracleResult out;
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.sigma_k = sigma(out.eigenvalues, k);
    out.in_cone = in_gamma_k(EigenvalueVector(out.eigenvalues), k);
    out.precision_warning = h > sample.r / 100.0;
    return out;
}

}  // namespace skln
