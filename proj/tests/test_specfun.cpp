#include <cmath>
#include <random>

#include "doctest.h"
#include "scmaofdm/specfun.hpp"

using namespace scmaofdm;

namespace {

// Independent fixed-grid quadrature of the integral representation
// U(a, b, x) = 1/Gamma(a) Int[u^(a-1) (1+u)^(b-a-1) e^(-x u), {u, 0, inf}],
// in log space (u = e^y) with a non-adaptive composite Simpson rule in long
// double. The integrand decays like e^(a y) on the left and faster than
// exponentially on the right, so a generous fixed window captures it.
long double kummer_u_reference(long double a, long double b, long double x) {
    const long double y_lo = -80.0L / a;
    const long double y_hi =
        std::log((300.0L * (1.0L + std::fabs(b - a - 1.0L)) + 300.0L) / x + 100.0L);
    const int n = 400000;  // even
    const long double h = (y_hi - y_lo) / n;
    const auto f = [&](long double y) -> long double {
        const long double u = std::exp(y);
        const long double ln_f = a * y + (b - a - 1.0L) * std::log1p(u) - x * u;
        return ln_f < -11000.0L ? 0.0L : std::exp(ln_f);
    };
    long double acc = f(y_lo) + f(y_hi);
    for (int i = 1; i < n; ++i) {
        acc += f(y_lo + i * h) * (i % 2 == 1 ? 4.0L : 2.0L);
    }
    acc *= h / 3.0L;
    return acc / std::exp(std::lgamma(static_cast<double>(a)));
}

}  // namespace

TEST_CASE("ln_gamma matches known values") {
    CHECK(std::exp(ln_gamma(5.0)) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(std::exp(ln_gamma(0.5)) ==
          doctest::Approx(std::sqrt(std::acos(-1.0))).epsilon(1e-13));
    // Frozen reference: log Gamma(10.3).
    CHECK(ln_gamma(10.3) == doctest::Approx(13.482036786138356971).epsilon(1e-14));
    CHECK_THROWS_AS(ln_gamma(0.0), InputError);
    CHECK_THROWS_AS(ln_gamma(-2.0), InputError);
}

TEST_CASE("kummer_u special values") {
    CHECK(kummer_u(0.0, 3.7, 1.2) == 1.0);  // exact by definition
    // Frozen references (30-digit arithmetic):
    CHECK(kummer_u(1.0, 1.0, 1.0) ==
          doctest::Approx(0.59634736232319407434).epsilon(1e-11));
    CHECK(ln_kummer_u(5.0, 5.0, 3.0) ==
          doctest::Approx(-6.400397711148782502).epsilon(1e-9));
    CHECK(ln_kummer_u(0.5, 1.3, 2.7) ==
          doctest::Approx(-0.52620526178424991239).epsilon(1e-9));
    CHECK(ln_kummer_u(3.5, 0.2, 8.0) ==
          doctest::Approx(-8.5910498429765362067).epsilon(1e-9));
    CHECK(ln_kummer_u(2.0, 2.0, 0.001) ==
          doctest::Approx(6.9013972353212327626).epsilon(1e-9));
    // Large-parameter regime used by the PEP series table.
    CHECK(ln_kummer_u(100.0, 100.0, 492.4) ==
          doctest::Approx(-620.11374592465077775).epsilon(1e-9));
    CHECK(ln_kummer_u(392.0, 392.0, 390.0) ==
          doctest::Approx(-2339.4245893285488456).epsilon(1e-9));
    CHECK_THROWS_AS(ln_kummer_u(1.0, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(ln_kummer_u(-1.0, 1.0, 1.0), NumericsError);
}

TEST_CASE("kummer_u against independent quadrature") {
    CHECK(kummer_u(1.0, 1.0, 1.0) ==
          doctest::Approx(static_cast<double>(kummer_u_reference(1.0L, 1.0L, 1.0L)))
              .epsilon(1e-8));
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> ua(1.0, 6.0);
    std::uniform_real_distribution<double> ub(-2.0, 6.0);
    std::uniform_real_distribution<double> ux(0.3, 12.0);
    for (int i = 0; i < 25; ++i) {
        const double a = ua(gen), b = ub(gen), x = ux(gen);
        const double ref = static_cast<double>(
            kummer_u_reference(static_cast<long double>(a),
                               static_cast<long double>(b),
                               static_cast<long double>(x)));
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(kummer_u(a, b, x) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("whittaker_w identity against quadrature on random triples") {
    // W_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} U(mu-kappa+1/2, 1+2mu, z), checked
    // against the independent U quadrature on 100 random (kappa, mu, z).
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> umu(0.25, 3.0);
    std::uniform_real_distribution<double> ushift(0.5, 4.0);  // a = mu-kappa+1/2
    std::uniform_real_distribution<double> uz(0.5, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = umu(gen);
        const double a = ushift(gen);
        const double kappa = mu + 0.5 - a;
        const double z = uz(gen);
        const double b = 1.0 + 2.0 * mu;
        const double ref =
            std::exp(-0.5 * z + (mu + 0.5) * std::log(z)) *
            static_cast<double>(kummer_u_reference(
                static_cast<long double>(a), static_cast<long double>(b),
                static_cast<long double>(z)));
        CAPTURE(kappa);
        CAPTURE(mu);
        CAPTURE(z);
        CHECK(whittaker_w(kappa, mu, z) == doctest::Approx(ref).epsilon(1e-8));
    }
    // Frozen references.
    CHECK(whittaker_w(-1.5, 1.0, 2.0) ==
          doctest::Approx(0.057919836801033475469).epsilon(1e-10));
    CHECK(whittaker_w(0.25, 0.75, 1.5) ==
          doctest::Approx(0.66391669662214235878).epsilon(1e-10));
    CHECK_THROWS_AS(whittaker_w(0.0, 0.5, -1.0), InputError);
}

TEST_CASE("q_function and q_approx") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(1.7) ==
          doctest::Approx(0.044565462758543039487).epsilon(1e-13));
    // The two-exponential form upper-bounds Q for x >= 1 and stays within a
    // small constant factor over the whole range of interest.
    for (double x = 1.0; x <= 8.0; x += 0.25) {
        CHECK(q_approx(x) >= q_function(x));
        CHECK(q_approx(x) <= 3.1 * q_function(x));
    }
    CHECK(q_approx(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}
