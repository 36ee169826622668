#include "scmaofdm/specfun.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace scmaofdm {

namespace {

// Adaptive Simpson on a smooth, peak-rescaled integrand.
double simpson_segment(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double fm, double whole, double tol,
                       int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_segment(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_segment(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_segment(f, a, fa, b, fb, fm, whole, tol, 48);
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) {
        throw InputError("ln_gamma: argument must be positive");
    }
    return std::lgamma(x);
}

double ln_kummer_u(double a, double b, double x) {
    if (!(x > 0.0)) {
        throw InputError("ln_kummer_u: x must be positive");
    }
    if (!(a > 0.0)) {
        throw NumericsError("ln_kummer_u: integral representation requires a > 0");
    }

    // Integrate in y = ln u: the substitution regularizes the u -> 0 endpoint
    // for a < 1 and turns the integrand into a smooth bell
    // exp(G(y)), G(y) = a y + (b - a - 1) ln(1 + e^y) - x e^y.
    const auto big_g = [&](double y) {
        const double u = std::exp(y);
        return a * y + (b - a - 1.0) * std::log1p(u) - x * u;
    };

    // G peaks at the positive root of x u^2 + (x - b + 1) u - a = 0;
    // cancellation-free root formulas on both sign branches of p.
    const double p = x - b + 1.0;
    const double disc_rt = std::sqrt(p * p + 4.0 * x * a);
    const double u_peak = p >= 0.0 ? 2.0 * a / (p + disc_rt) : (disc_rt - p) / (2.0 * x);
    const double y_peak = std::log(u_peak);
    const double g_peak = big_g(y_peak);

    // Expand outward until the rescaled integrand underflows.
    double y_lo = y_peak - 1.0;
    for (double step = 1.0; big_g(y_lo) - g_peak > -760.0; step *= 2.0) y_lo -= step;
    double y_hi = y_peak + 1.0;
    for (double step = 1.0; big_g(y_hi) - g_peak > -760.0; step *= 2.0) y_hi += step;

    const auto f = [&](double y) {
        const double e = big_g(y) - g_peak;
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    // Splitting at the peak keeps each piece monotone, so no refinement pass
    // can mistake the bell for an all-zero integrand.
    const double tol = 1e-12 * std::max(1.0, y_hi - y_lo);
    const double integral =
        adaptive_simpson(f, y_lo, y_peak, tol) + adaptive_simpson(f, y_peak, y_hi, tol);
    if (!(integral > 0.0) || !std::isfinite(integral)) {
        throw NumericsError("ln_kummer_u: quadrature failed to converge");
    }
    return g_peak + std::log(integral) - std::lgamma(a);
}

double kummer_u(double a, double b, double x) {
    if (a == 0.0) return 1.0;  // empty-product limit, exact
    const double ln_u = ln_kummer_u(a, b, x);
    return std::exp(ln_u);
}

double ln_whittaker_w(double kappa, double mu, double z) {
    if (!(z > 0.0)) {
        throw InputError("ln_whittaker_w: z must be positive");
    }
    const double a = mu - kappa + 0.5;
    const double b = 1.0 + 2.0 * mu;
    const double head = -0.5 * z + (mu + 0.5) * std::log(z);
    if (a == 0.0) return head;  // U(0, ., .) = 1
    return head + ln_kummer_u(a, b, z);
}

double whittaker_w(double kappa, double mu, double z) {
    return std::exp(ln_whittaker_w(kappa, mu, z));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_approx(double x) {
    return std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
}

}  // namespace scmaofdm
