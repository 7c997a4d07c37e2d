#include <catch2/catch_amalgamated.hpp>

#include "flotilla/error.hpp"
#include "flotilla/guidance.hpp"

using namespace flotilla;
using Catch::Approx;

TEST_CASE("path azimuth follows the compass convention") {
    CHECK(path_azimuth_deg({{0, 0, 0}, {0, 100, 0}}) == Approx(0.0).margin(1e-12));
    CHECK(path_azimuth_deg({{0, 0, 0}, {100, 0, 0}}) == Approx(90.0).margin(1e-12));
    CHECK(path_azimuth_deg({{0, 0, 0}, {0, -100, 0}}) == Approx(180.0).margin(1e-12));
    CHECK(path_azimuth_deg({{0, 0, 0}, {-100, 0, 0}}) == Approx(270.0).margin(1e-12));
    CHECK(path_azimuth_deg({{10, 10, 0}, {110, 110, 0}}) == Approx(45.0).margin(1e-12));
}

TEST_CASE("cross-track error is positive to starboard of the track") {
    const PathSegment north{{0, 0, 0}, {0, 100, 0}};
    CHECK(cross_track_error(north, {10, 50, 0}) == Approx(10.0).margin(1e-12));
    CHECK(cross_track_error(north, {-10, 50, 0}) == Approx(-10.0).margin(1e-12));

    const PathSegment east{{0, 0, 0}, {100, 0, 0}};
    CHECK(cross_track_error(east, {50, -10, 0}) == Approx(10.0).margin(1e-12));
    CHECK(cross_track_error(east, {50, 10, 0}) == Approx(-10.0).margin(1e-12));

    // Offset is measured from the infinite line, not the segment extent.
    CHECK(cross_track_error(north, {10, 500, 0}) == Approx(10.0).margin(1e-12));
}

TEST_CASE("lookahead law steers back toward the track") {
    LosParams p;
    const PathSegment north{{0, 0, 0}, {0, 1000, 0}};

    SECTION("on track the course is the path azimuth") {
        CHECK(los_desired_course_deg(north, {0, 50, 0}, p) == Approx(0.0).margin(1e-12));
    }
    SECTION("one lookahead to starboard commands 45 degrees to port") {
        CHECK(los_desired_course_deg(north, {p.lookahead_m, 50, 0}, p) ==
              Approx(315.0).margin(1e-9));
    }
    SECTION("one lookahead to port commands 45 degrees to starboard") {
        CHECK(los_desired_course_deg(north, {-p.lookahead_m, 50, 0}, p) ==
              Approx(45.0).margin(1e-9));
    }
    SECTION("correction never reaches a right angle") {
        const double c = los_desired_course_deg(north, {1e6, 50, 0}, p);
        CHECK(c > 270.0);
        CHECK(c < 360.0);
    }
    SECTION("scaling error and lookahead together leaves the course unchanged") {
        LosParams wide = p;
        wide.lookahead_m = 2.0 * p.lookahead_m;
        const double a = los_desired_course_deg(north, {12.0, 50, 0}, p);
        const double b = los_desired_course_deg(north, {24.0, 50, 0}, wide);
        CHECK(a == Approx(b).margin(1e-12));
    }
}

TEST_CASE("heading controller maps errors to nozzle and thrust") {
    LosParams p;
    HullParams hull;
    VesselState s;

    SECTION("clockwise error deflects the nozzles negative") {
        const JetCommand c = heading_controller(s, 10.0, p, hull);
        CHECK(c.nozzle_port_deg == Approx(-12.0).margin(1e-9));
        CHECK(c.nozzle_starboard_deg == Approx(-12.0).margin(1e-9));
    }
    SECTION("yaw rate damping opposes the turn") {
        s.yaw_rate_deg_s = 5.0;
        const JetCommand c = heading_controller(s, 10.0, p, hull);
        CHECK(c.nozzle_port_deg == Approx(-12.0 + 15.0).margin(1e-9));
    }
    SECTION("the error wraps across north") {
        s.heading_deg = 350.0;
        const JetCommand c = heading_controller(s, 10.0, p, hull);  // 20 deg clockwise
        CHECK(c.nozzle_port_deg == Approx(-24.0).margin(1e-9));
    }
    SECTION("large errors clamp at the nozzle stop") {
        const JetCommand c = heading_controller(s, 90.0, p, hull);
        CHECK(c.nozzle_port_deg == Approx(-hull.nozzle_max_deg).margin(1e-9));
    }
    SECTION("thrust holds cruise with feedforward plus proportional error") {
        s.surge_mps = p.cruise_speed_mps;
        CHECK(heading_controller(s, 0.0, p, hull).thrust_port_n ==
              Approx(0.5 * hull.damp_surge * p.cruise_speed_mps).margin(1e-9));
        s.surge_mps = 0.0;
        CHECK(heading_controller(s, 0.0, p, hull).thrust_port_n ==
              Approx(2500.0 + p.speed_kp * p.cruise_speed_mps).margin(1e-9));
    }
}

TEST_CASE("waypoint switching walks the path once") {
    LosParams p;
    const std::vector<EnuVector> wps{{0, 0, 0}, {0, 100, 0}, {100, 100, 0}};
    GuidanceState g;

    g = waypoint_switch(g, {0, 50, 0}, wps, p);
    CHECK(g.active_segment == 0);
    CHECK_FALSE(g.finished);

    g = waypoint_switch(g, {0, 75, 0}, wps, p);  // inside the acceptance circle
    CHECK(g.active_segment == 1);
    CHECK_FALSE(g.finished);

    g = waypoint_switch(g, {75, 100, 0}, wps, p);
    CHECK(g.finished);

    // Finished is terminal: further positions change nothing.
    const GuidanceState h = waypoint_switch(g, {0, 0, 0}, wps, p);
    CHECK(h.finished);
    CHECK(h.active_segment == 1);
}

TEST_CASE("degenerate paths are rejected") {
    CHECK_THROWS_AS(path_azimuth_deg({{5, 5, 0}, {5, 5, 0}}), Error);
    CHECK_THROWS_AS(cross_track_error({{1, 2, 0}, {1, 2, 0}}, {0, 0, 0}), Error);
    CHECK_THROWS_AS(segment_at({{0, 0, 0}}, 0), Error);
    CHECK_THROWS_AS(segment_at({{0, 0, 0}, {1, 1, 0}}, 1), Error);
}
