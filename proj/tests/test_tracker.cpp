#include <catch2/catch_amalgamated.hpp>

#include "flotilla/geo.hpp"
#include "flotilla/tracker.hpp"

using namespace flotilla;
using Catch::Approx;

namespace {

const GeoPoint kOrigin{60.0, 25.0, 0.0};

GeoPoint at(double east, double north) { return enu_to_geo(kOrigin, {east, north, 0.0}); }

}  // namespace

TEST_CASE("target pan is bearing relative to the carrier heading") {
    GeoPose own{at(0.0, 0.0), 90.0};
    CHECK(target_pan_deg(own, at(0.0, 1000.0)) == Approx(-90.0).margin(1e-6));
    CHECK(target_pan_deg(own, at(1000.0, 0.0)) == Approx(0.0).margin(1e-6));
    own.heading_deg = 350.0;
    CHECK(target_pan_deg(own, at(0.0, 1000.0)) == Approx(10.0).margin(1e-6));
}

TEST_CASE("gimbal slews at the rate limit in whole motor steps") {
    GimbalState g;  // 30 deg/s, 1 deg steps
    g = step_gimbal(g, 10.0, 0.1);
    CHECK(g.pan_deg == Approx(3.0).margin(1e-12));
    g = step_gimbal(g, 10.0, 0.1);
    CHECK(g.pan_deg == Approx(6.0).margin(1e-12));
}

TEST_CASE("quantization truncates toward zero and never overshoots") {
    GimbalState g;
    g = step_gimbal(g, 2.5, 0.1);  // limit 3, arc 2.5 -> 2 whole steps
    CHECK(g.pan_deg == Approx(2.0).margin(1e-12));
    g = step_gimbal(g, 2.5, 0.1);  // remaining 0.5 is below one step
    CHECK(g.pan_deg == Approx(2.0).margin(1e-12));

    g.pan_deg = 0.0;
    g = step_gimbal(g, -2.5, 0.1);
    CHECK(g.pan_deg == Approx(-2.0).margin(1e-12));
}

TEST_CASE("continuous gimbal reaches the target exactly") {
    GimbalState g;
    g.quantization_deg = 0.0;
    g = step_gimbal(g, 2.5, 0.1);
    CHECK(g.pan_deg == Approx(2.5).margin(1e-12));
    g = step_gimbal(g, 2.5, 0.1);
    CHECK(g.pan_deg == Approx(2.5).margin(1e-12));
}

TEST_CASE("slew takes the shorter arc through the wrap") {
    GimbalState g;
    g.pan_deg = 170.0;
    g = step_gimbal(g, -170.0, 0.1);  // 20 degrees ahead through 180
    CHECK(g.pan_deg == Approx(173.0).margin(1e-12));
    for (int i = 0; i < 5; ++i) g = step_gimbal(g, -170.0, 0.1);
    // 170 + 18 = 188 wraps to -172.
    CHECK(g.pan_deg == Approx(-172.0).margin(1e-12));
    g = step_gimbal(g, -170.0, 0.1);
    CHECK(g.pan_deg == Approx(-170.0).margin(1e-12));
}

TEST_CASE("pointing error measures boresight against true bearing") {
    GeoPose own{at(0.0, 0.0), 30.0};
    GimbalState g;
    g.pan_deg = 15.0;  // boresight 45
    const GeoPoint peer = at(1000.0, 1000.0);
    CHECK(pointing_error_deg(own, g, peer) == Approx(0.0).margin(1e-6));
    g.pan_deg = 25.0;
    CHECK(pointing_error_deg(own, g, peer) == Approx(10.0).margin(1e-6));
    g.pan_deg = -45.0;
    CHECK(pointing_error_deg(own, g, peer) == Approx(60.0).margin(1e-6));
}
