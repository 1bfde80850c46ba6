#include <doctest.h>

#include <cmath>

#include "wavedamp/errors.hpp"
#include "wavedamp/zones.hpp"

using namespace wavedamp;

namespace {

ZoneLayout two_zone(double N, double t_max = 50.0) {
    ZoneConstants c;
    c.N = N;
    c.t_max = t_max;
    return ZoneLayout(ZoneFamily::TwoZone, c,
                      make_profile("power", {{"c", 1.0}, {"alpha", -2.0}}),
                      make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}}));
}

} // namespace

TEST_CASE("two-zone separating time inverts G(t) xi^2 = N") {
    const ZoneLayout layout = two_zone(1.0);
    const auto t = layout.separating_time("G*xi^2=N", 1.0);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(std::log(3.0)).epsilon(1e-9));

    // tiny frequency: the curve is never crossed on the horizon
    CHECK_FALSE(layout.separating_time("G*xi^2=N", 1e-12).has_value());
}

TEST_CASE("two-zone membership and chain") {
    const ZoneLayout layout = two_zone(1.0);
    CHECK(layout.zone_of(0.0, 3.7) == ZoneId::Zpd);
    CHECK(layout.zone_of(2.0, 1.0) == ZoneId::Zell); // G(2) = (e^2-1)/2 > 1

    const auto chain = layout.zone_chain(1.0);
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].zone == ZoneId::Zpd);
    CHECK(chain[0].t_begin == 0.0);
    CHECK(chain[0].t_end == doctest::Approx(std::log(3.0)).epsilon(1e-8));
    CHECK(chain[1].zone == ZoneId::Zell);
    CHECK(chain[1].t_end == doctest::Approx(50.0));

    const auto single = layout.zone_chain(1e-12);
    REQUIRE(single.size() == 1);
    CHECK(single[0].zone == ZoneId::Zpd);
}

TEST_CASE("four-zone layout leaves early small-frequency points uncovered") {
    ZoneConstants c;
    c.N1 = 10.0;
    c.N2 = 10.0;
    c.eps = 0.1;
    c.t_max = 50.0;
    const ZoneLayout layout(ZoneFamily::FourZoneNonEffective, c,
                            make_profile("power", {{"c", 0.5}, {"alpha", -1.0}}),
                            make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}}));
    // xi = 1 at t = 0: xi <= N1 b(0) = 5 but g(0) xi = 0.5 > eps -> Gap
    CHECK(layout.zone_of(0.0, 1.0) == ZoneId::Gap);

    const auto chain = layout.zone_chain(1.0);
    REQUIRE(chain.size() >= 3);
    CHECK(chain[0].zone == ZoneId::Gap);
    CHECK(chain[1].zone == ZoneId::Zdiss);
    CHECK(chain[1].t_begin == doctest::Approx(std::log(5.0)).epsilon(1e-6)); // g xi = eps
    CHECK(chain[2].zone == ZoneId::Zhyp);
    CHECK(chain[2].t_begin == doctest::Approx(4.0).epsilon(1e-6)); // xi = N1 b
    CHECK(chain.back().t_end == doctest::Approx(50.0));

    // large frequency: Zell then Zred then Zhyp
    const auto large = layout.zone_chain(30.0);
    REQUIRE(large.size() == 3);
    CHECK(large[0].zone == ZoneId::Zell);
    CHECK(large[1].zone == ZoneId::Zred);
    CHECK(large[2].zone == ZoneId::Zhyp);
}

TEST_CASE("five-zone over-damping layout") {
    ZoneConstants c;
    c.N = 2.0;
    c.eps1 = 1.1;
    c.eps2 = 0.9;
    c.eps3 = 0.2;
    c.t_max = 50.0;
    const Profile b = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    const Profile g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    const ZoneLayout layout(ZoneFamily::FiveZoneOverdamping, c, b, g);

    // g(0) xi = 2 = N crossed exactly at t = 0
    const auto t4 = layout.separating_time("g*xi=N", 4.0);
    REQUIRE(t4.has_value());
    CHECK(*t4 == doctest::Approx(0.0).epsilon(1e-9));

    const auto chain = layout.zone_chain(100.0);
    REQUIRE(chain.size() == 5);
    CHECK(chain[0].zone == ZoneId::Zell);
    CHECK(chain[1].zone == ZoneId::Zred1);
    CHECK(chain[2].zone == ZoneId::Zhyp);
    CHECK(chain[3].zone == ZoneId::Zred2);
    CHECK(chain[4].zone == ZoneId::Zdiss);
    CHECK(chain[0].t_end == doctest::Approx(std::log(25.0)).epsilon(1e-6));   // g xi = 2
    CHECK(chain[4].t_begin == doctest::Approx(std::log(250.0)).epsilon(1e-6)); // g xi = 0.2

    SUBCASE("constants ordering is validated") {
        ZoneConstants bad = c;
        bad.eps2 = 1.2; // above eps1
        CHECK_THROWS_AS(ZoneLayout(ZoneFamily::FiveZoneOverdamping, bad, b, g), ConfigError);
    }
}

TEST_CASE("effective decaying layout picks t0 from b g <= eps^2/8") {
    ZoneConstants c;
    c.N = 10.0;
    c.eps = 0.1;
    c.t_max = 100.0;
    const Profile b = make_profile("power", {{"c", 1.0}, {"alpha", -0.5}});
    const Profile g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    const ZoneLayout layout(ZoneFamily::EffectiveDecaying, c, b, g);
    const double t0 = layout.t0();
    CHECK(b.value(t0) * g.value(t0) == doctest::Approx(0.1 * 0.1 / 8.0).epsilon(1e-6));
    CHECK(layout.zone_of(0.5 * t0, 0.05) == ZoneId::Gap); // early compact set
    CHECK(layout.zone_of(t0 + 1.0, 0.5 * b.value(t0 + 1.0)) == ZoneId::Zdiss);

    SUBCASE("-g' <= 2 - eps restriction is enforced at construction") {
        const Profile g_bad = make_profile("exp", {{"c", 3.0}, {"alpha", -1.0}});
        CHECK_THROWS_AS(ZoneLayout(ZoneFamily::EffectiveDecaying, c, b, g_bad), ConfigError);
    }
}

TEST_CASE("region classification against the separating parabola") {
    // b g = 1/2 with g = e^{-t}/2, so f1(0) = 2 (1 + 1/sqrt 2)
    const Profile b = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
    const Profile g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
    const double f1_0 = 2.0 * (1.0 + 1.0 / std::sqrt(2.0));
    CHECK(region_of(b, g, 0.0, f1_0) == RegionId::Boundary);
    CHECK(region_of(b, g, 0.0, 1.0) == RegionId::PiHyp); // between f2(0) and f1(0)
    CHECK(region_of(b, g, 0.0, 10.0) == RegionId::PiEll);
    CHECK(region_of(Profile::zero(), Profile::zero(), 3.0, 0.7) == RegionId::PiHyp);
}

TEST_CASE("zone_of only changes at separating times") {
    const ZoneLayout layout = two_zone(1.0, 20.0);
    const double xi = 1.3;
    const auto tc = layout.separating_time("G*xi^2=N", xi);
    REQUIRE(tc.has_value());
    for (int i = 0; i <= 400; ++i) {
        const double t = 20.0 * i / 400.0;
        const ZoneId z = layout.zone_of(t, xi);
        if (t < *tc - 1e-6) CHECK(z == ZoneId::Zpd);
        if (t > *tc + 1e-6) CHECK(z == ZoneId::Zell);
    }
}

TEST_CASE("dissipative sub-zones") {
    const Profile b = make_profile("power", {{"c", 1.0}, {"alpha", -0.5}});
    const double eps = 0.1;
    const double t = 4.0;
    const double edge = 0.5 * b.value(t) * std::sqrt(1.0 - eps * eps);
    CHECK(in_diss_elliptic(b, eps, t, 0.9 * edge));
    CHECK_FALSE(in_diss_elliptic(b, eps, t, 1.01 * edge));
    CHECK(in_diss_reduced(b, eps, t, 0.5 * (edge + 0.5 * b.value(t))));
    CHECK_FALSE(in_diss_reduced(b, eps, t, 0.51 * b.value(t)));
}
