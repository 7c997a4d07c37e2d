#include <catch2/catch_amalgamated.hpp>

#include <flotilla/flotilla.hpp>

#include "oracles.hpp"

using Catch::Approx;
using namespace flotilla;

TEST_CASE("angle normalization covers the wrap boundaries") {
    CHECK(norm360(0.0) == 0.0);
    CHECK(norm360(360.0) == 0.0);
    CHECK(norm360(-90.0) == 270.0);
    CHECK(norm360(720.5) == Approx(0.5));
    CHECK(norm360(-0.0) == 0.0);
    CHECK(!std::signbit(norm360(-0.0)));

    CHECK(wrap_signed(0.0) == 0.0);
    CHECK(wrap_signed(180.0) == 180.0);
    CHECK(wrap_signed(-180.0) == 180.0);
    CHECK(wrap_signed(-540.0) == 180.0);
    CHECK(wrap_signed(190.0) == Approx(-170.0));
    CHECK(wrap_signed(539.0) == Approx(179.0));
}

TEST_CASE("one degree of longitude at the equator") {
    const GeoPoint origin{0.0, 0.0, 0.0};
    const GeoPoint p{0.0, 1.0, 0.0};
    const EnuVector v = geo_to_enu(origin, p);
    const double expect = oracles::haversine_m(0, 0, 0, 1);
    CHECK(v.north == Approx(0.0).margin(1e-9));
    CHECK(v.east == Approx(expect).epsilon(1e-3));
    CHECK(v.east == Approx(111194.9266).margin(0.1));
}

TEST_CASE("projection agrees with great-circle distance away from the equator") {
    const GeoPoint origin{60.0, 25.0, 0.0};
    const struct {
        double lat, lon;
    } targets[] = {{60.0, 25.02}, {60.018, 25.0}, {60.01, 25.03}, {59.99, 24.97}};
    for (const auto& t : targets) {
        const EnuVector v = geo_to_enu(origin, {t.lat, t.lon, 0.0});
        const double got = horizontal_norm(v);
        const double expect = oracles::haversine_m(60.0, 25.0, t.lat, t.lon);
        INFO("target " << t.lat << "," << t.lon);
        CHECK(got == Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("bearing matches the spherical initial azimuth") {
    const GeoPoint origin{60.0, 25.0, 0.0};
    const GeoPoint ne = enu_to_geo(origin, {100.0, 100.0, 0.0});
    CHECK(bearing_deg(origin, ne) == Approx(45.0).margin(0.2));

    const GeoPoint far = enu_to_geo(origin, {-350.0, 820.0, 0.0});
    const double expect =
        oracles::initial_bearing_deg(origin.latitude, origin.longitude, far.latitude,
                                     far.longitude);
    CHECK(bearing_deg(origin, far) == Approx(expect).margin(0.2));
}

TEST_CASE("bearing is antisymmetric through the shared midpoint scale") {
    const GeoPoint a{59.95, 24.9, 0.0};
    const GeoPoint b = enu_to_geo(a, {420.0, -133.0, 0.0});
    const double fwd = bearing_deg(a, b);
    const double back = bearing_deg(b, a);
    CHECK(norm360(back + 180.0) == Approx(fwd).margin(1e-9));
}

TEST_CASE("enu projection round-trips") {
    const GeoPoint origin{60.0, 25.0, 3.0};
    const EnuVector cases[] = {{120.0, -40.0, 12.0}, {-900.0, 501.5, -2.0}, {0.0, 0.0, 0.0}};
    for (const auto& v : cases) {
        const EnuVector back = geo_to_enu(origin, enu_to_geo(origin, v));
        CHECK(back.east == Approx(v.east).margin(1e-9));
        CHECK(back.north == Approx(v.north).margin(1e-9));
        CHECK(back.up == Approx(v.up).margin(1e-9));
    }
}

TEST_CASE("distance includes the vertical component") {
    const GeoPoint origin{60.0, 25.0, 0.0};
    const GeoPoint p = enu_to_geo(origin, {3.0, 0.0, 4.0});
    CHECK(distance_m(origin, p) == Approx(5.0).margin(1e-6));
}

TEST_CASE("degenerate and invalid geodetic inputs throw") {
    CHECK_THROWS_AS(bearing_deg({60, 25, 0}, {60, 25, 10}), Error);
    CHECK_THROWS_AS(validate(GeoPoint{91.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(validate(GeoPoint{0.0, 200.0, 0.0}), Error);
    CHECK_THROWS_AS(geo_to_enu({0, 0, 0}, {95.0, 0.0, 0.0}), Error);
}
