#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"
#include "flotilla/vessel.hpp"

/**
 * Lookahead-based line-of-sight path following over a waypoint list.
 *
 * The desired course is the path azimuth corrected by -atan(e / lookahead),
 * where e is the cross-track error, signed positive when the vehicle sits to
 * starboard of the start->end direction. The correction therefore always
 * points back toward the path. A PD law on the wrapped heading error steers
 * the nozzles; thrust holds cruise speed with a proportional term plus a
 * damping-derived feedforward.
 */
namespace flotilla {

struct PathSegment {
    EnuVector start;
    EnuVector end;
};

struct LosParams {
    double lookahead_m = 30.0;          // four boat lengths for a 7.5 m hull
    double acceptance_radius_m = 30.0;  // waypoint switch distance, defaults to the lookahead
    double cruise_speed_mps = 5.0;
    // Frozen controller gains, tuned against the default hull.
    double heading_kp = 1.2;   // deg nozzle per deg error
    double heading_kd = 3.0;   // deg nozzle per deg/s yaw rate
    double speed_kp = 2000.0;  // N per m/s speed error
};

struct GuidanceState {
    std::size_t active_segment = 0;  // index of the segment currently tracked
    bool finished = false;
};

inline void require_valid(const PathSegment& seg) {
    if (seg.start.east == seg.end.east && seg.start.north == seg.end.north)
        throw Error("degenerate path segment");
}

/// Compass azimuth of the segment direction.
inline double path_azimuth_deg(const PathSegment& seg) {
    require_valid(seg);
    return norm360(rad2deg(std::atan2(seg.end.east - seg.start.east,
                                      seg.end.north - seg.start.north)));
}

/// Signed perpendicular distance from the segment line, positive to
/// starboard of the start->end direction.
inline double cross_track_error(const PathSegment& seg, const EnuVector& pos) {
    require_valid(seg);
    const double de = seg.end.east - seg.start.east;
    const double dn = seg.end.north - seg.start.north;
    const double len = std::hypot(de, dn);
    const double we = pos.east - seg.start.east;
    const double wn = pos.north - seg.start.north;
    return (dn * we - de * wn) / len;
}

/// Lookahead steering law. The correction magnitude stays below 90 degrees
/// and scaling both the error and the lookahead together leaves it unchanged.
inline double los_desired_course_deg(const PathSegment& seg, const EnuVector& pos,
                                     const LosParams& p) {
    const double e = cross_track_error(seg, pos);
    return norm360(path_azimuth_deg(seg) - rad2deg(std::atan(e / p.lookahead_m)));
}

/**
 * Map desired course to a jet command. Both nozzles deflect together; thrust
 * to port at the stern pushes the stern to port and the bow to starboard, so
 * a positive (clockwise) heading error commands a negative deflection.
 */
inline JetCommand heading_controller(const VesselState& s, double desired_course_deg,
                                     const LosParams& p, const HullParams& hull) {
    const double err = wrap_signed(desired_course_deg - s.heading_deg);
    const double nozzle = std::clamp(-p.heading_kp * err + p.heading_kd * s.yaw_rate_deg_s,
                                     -hull.nozzle_max_deg, hull.nozzle_max_deg);

    const double feedforward = 0.5 * hull.damp_surge * p.cruise_speed_mps;
    const double thrust = feedforward + p.speed_kp * (p.cruise_speed_mps - s.surge_mps);

    JetCommand cmd;
    cmd.thrust_port_n = thrust;
    cmd.thrust_starboard_n = thrust;
    cmd.nozzle_port_deg = nozzle;
    cmd.nozzle_starboard_deg = nozzle;
    return clamped(cmd, hull);
}

inline PathSegment segment_at(const std::vector<EnuVector>& waypoints, std::size_t i) {
    if (waypoints.size() < 2 || i + 1 >= waypoints.size())
        throw Error("degenerate path: need two or more waypoints");
    return {waypoints[i], waypoints[i + 1]};
}

/**
 * Advance the active segment when the vehicle enters the acceptance circle
 * of the segment end. The index never decreases; reaching the end of the
 * last segment sets `finished`.
 */
inline GuidanceState waypoint_switch(GuidanceState g, const EnuVector& pos,
                                     const std::vector<EnuVector>& waypoints,
                                     const LosParams& p) {
    if (g.finished) return g;
    const PathSegment seg = segment_at(waypoints, g.active_segment);
    const double to_end = std::hypot(pos.east - seg.end.east, pos.north - seg.end.north);
    if (to_end <= p.acceptance_radius_m) {
        if (g.active_segment + 2 >= waypoints.size())
            g.finished = true;
        else
            g.active_segment += 1;
    }
    return g;
}

}  // namespace flotilla
