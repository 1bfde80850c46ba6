#include <doctest.h>

#include <cmath>
#include <random>

#include "wavedamp/errors.hpp"
#include "wavedamp/profile.hpp"
#include "wavedamp/quadrature.hpp"

using namespace wavedamp;

namespace {

double central_diff(const Profile& p, double t, double h = 1e-5) {
    return (p.value(t + h) - p.value(t - h)) / (2.0 * h);
}

} // namespace

TEST_CASE("registered families evaluate their closed forms") {
    const Profile pw = make_profile("power", {{"c", 1.0}, {"alpha", -2.0}});
    CHECK(pw.value(1.0) == doctest::Approx(0.25));
    // \int_0^T (1+t)^{-2} -> 1
    CHECK(pw.primitive(1e6) == doctest::Approx(1.0).epsilon(1e-5));

    const Profile ex = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    CHECK(ex.value(0.0) == doctest::Approx(1.0));
    CHECK(ex.d1(0.0) == doctest::Approx(1.0));

    const Profile de = make_profile("doubleexp", {{"c", 0.5}, {"sign", -1.0}});
    CHECK(de.value(0.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(de.value(0.0) == doctest::Approx(0.18394).epsilon(1e-4));
}

TEST_CASE("unknown families and bad parameters are rejected") {
    CHECK_THROWS_AS(make_profile("cubic", {{"c", 1.0}}), ConfigError);
    CHECK_THROWS_AS(make_profile("power", {{"c", -1.0}, {"alpha", 1.0}}), ConfigError);
    CHECK_THROWS_AS(make_profile("power", {{"c", 1.0}}), ConfigError);
    CHECK_THROWS_AS(make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}, {"beta", 2.0}}),
                    ConfigError);
    CHECK_THROWS_AS(make_profile("doubleexp", {{"c", 1.0}, {"sign", 2.0}}), ConfigError);
}

TEST_CASE("analytic derivatives agree with central differences") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> tdist(0.0, 10.0);
    const std::vector<Profile> profiles = {
        make_profile("power", {{"c", 1.0}, {"alpha", -2.0}}),
        make_profile("power", {{"c", 0.5}, {"alpha", -0.5}}),
        make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}}),
        make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}}),
        make_profile("const", {{"c", 2.0}}),
    };
    for (const auto& p : profiles) {
        for (int i = 0; i < 100; ++i) {
            const double t = tdist(rng);
            const double fd = central_diff(p, t);
            CHECK(std::abs(p.d1(t) - fd) <=
                  1e-6 * std::max(1.0, std::abs(p.d1(t))) + 1e-7 * std::abs(p.value(t)));
        }
    }
    // the double exponential needs a smaller range to stay representable
    const Profile de = make_profile("doubleexp", {{"c", 1.0}, {"sign", 1.0}});
    for (int i = 0; i < 100; ++i) {
        const double t = 5.0 * i / 99.0;
        const double fd = central_diff(de, t, 1e-7);
        CHECK(std::abs(de.d1(t) - fd) <= 1e-5 * std::max(1.0, std::abs(de.d1(t))));
    }
}

TEST_CASE("primitives are consistent with quadrature and non-decreasing") {
    const std::vector<Profile> profiles = {
        make_profile("power", {{"c", 2.0}, {"alpha", -1.0}}),
        make_profile("exp", {{"c", 1.0}, {"alpha", 0.5}}),
        make_profile("doubleexp", {{"c", 0.5}, {"sign", -1.0}}),
        make_profile("doubleexp", {{"c", 1.0}, {"sign", 1.0}}),
    };
    for (const auto& p : profiles) {
        CHECK(p.primitive(0.0) == 0.0);
        double prev = 0.0;
        for (double t : {0.5, 1.0, 2.0, 3.5, 5.0}) {
            CHECK(p.primitive(t) >= prev);
            prev = p.primitive(t);
        }
        const double t1 = 0.75, t2 = 4.25;
        const double q = integrate([&](double t) { return p.value(t); }, t1, t2, 1e-12).value;
        CHECK(p.primitive(t2) - p.primitive(t1) == doctest::Approx(q).epsilon(1e-8));
    }
}

TEST_CASE("auxiliary weights") {
    const Profile et = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    const Profile zero = Profile::zero();
    // G(ln 3) = (e^{ln 3} - 1)/2 = 1
    CHECK(big_g(et, std::log(3.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(big_g(et, 0.0) == 0.0);
    const Profile ehalf = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    CHECK(big_g(ehalf, 1e3) == doctest::Approx(0.25).epsilon(1e-10));

    // log delta examples
    CHECK(log_delta(zero, et, std::log(3.0), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(log_delta(zero, zero, 7.0, 3.0) == 0.0);
    CHECK(log_delta(et, zero, 1.0, 0.7) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

    // delta = lambda^2 in log space, by definition
    CHECK(log_delta(et, ehalf, 2.0, 1.5) ==
          doctest::Approx(2.0 * log_lambda(et, ehalf, 2.0, 1.5)));

    // monotone in t and xi
    double prev = -1.0;
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
        const double v = log_delta(et, ehalf, t, 1.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(log_delta(et, ehalf, 1.0, 2.0) >= log_delta(et, ehalf, 1.0, 1.0));
}

TEST_CASE("reciprocal profiles invert the family") {
    const Profile b = make_profile("power", {{"c", 2.0}, {"alpha", -0.5}});
    const Profile rb = reciprocal(b);
    for (double t : {0.0, 1.0, 4.0}) CHECK(rb.value(t) == doctest::Approx(1.0 / b.value(t)));

    const Profile e = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    CHECK(reciprocal(e).value(2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("guarded exp saturates instead of overflowing") {
    CHECK(guarded_exp(0.0) == 1.0);
    CHECK(guarded_exp(800.0) == std::numeric_limits<double>::infinity());
    CHECK(guarded_exp(-800.0) == 0.0);
}
