#pragma once

#include <algorithm>
#include <cmath>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"

/**
 * Planar rigid-body model of a twin-waterjet surface vessel.
 *
 * Three degrees of freedom: surge, sway and yaw. Body axes are x forward and
 * y to starboard; with heading measured clockwise from north this makes a
 * positive yaw moment turn the bow to starboard. Each jet produces thrust
 * along its steerable nozzle; a reversing bucket redirects a fraction of the
 * stream so that effective thrust is T * (1 - 2 * reverse_fraction). Damping
 * is linear in each axis, which is deliberately simple but gives the correct
 * first-order speed response for control work.
 */
namespace flotilla {

struct HullParams {
    double mass_kg = 5000.0;
    double yaw_inertia_kgm2 = 40000.0;
    double damp_surge = 1000.0;   // N per m/s
    double damp_sway = 4000.0;    // N per m/s
    double damp_yaw = 20000.0;    // N*m per rad/s
    double jet_lateral_offset_m = 0.6;   // nozzle distance from centreline
    double jet_stern_offset_m = 4.0;     // nozzle distance aft of the CG
    double max_thrust_n = 20000.0;       // per jet
    double nozzle_max_deg = 30.0;
    double max_yaw_rate_deg_s = 40.0;
};

/// Command for both jets. Nozzle angles are positive when the stream is
/// deflected to starboard; reverse fractions live in [0, 1].
struct JetCommand {
    double thrust_port_n = 0.0;
    double thrust_starboard_n = 0.0;
    double nozzle_port_deg = 0.0;
    double nozzle_starboard_deg = 0.0;
    double reverse_port = 0.0;
    double reverse_starboard = 0.0;
};

/// Clamp a command into the box allowed by the hull.
inline JetCommand clamped(JetCommand c, const HullParams& h) {
    c.thrust_port_n = std::clamp(c.thrust_port_n, 0.0, h.max_thrust_n);
    c.thrust_starboard_n = std::clamp(c.thrust_starboard_n, 0.0, h.max_thrust_n);
    c.nozzle_port_deg = std::clamp(c.nozzle_port_deg, -h.nozzle_max_deg, h.nozzle_max_deg);
    c.nozzle_starboard_deg = std::clamp(c.nozzle_starboard_deg, -h.nozzle_max_deg, h.nozzle_max_deg);
    c.reverse_port = std::clamp(c.reverse_port, 0.0, 1.0);
    c.reverse_starboard = std::clamp(c.reverse_starboard, 0.0, 1.0);
    return c;
}

/// Slowly varying environment push (current or wind drift), in earth frame.
struct Disturbance {
    EnuVector drift_mps;
};

struct VesselState {
    EnuVector position;          // metres in the scenario frame
    double heading_deg = 0.0;    // [0, 360)
    double surge_mps = 0.0;      // body x velocity
    double sway_mps = 0.0;       // body y velocity
    double yaw_rate_deg_s = 0.0;
};

struct BodyForces {
    double fx_n = 0.0;  // surge
    double fy_n = 0.0;  // sway, positive to starboard
    double mz_nm = 0.0; // yaw, positive bow-to-starboard
};

/**
 * Net body force and yaw moment produced by a jet command.
 *
 * Jets sit at (-stern_offset, -+lateral_offset); the moment picks up both the
 * differential-thrust lever about the centreline and the lateral component of
 * vectored thrust acting on the stern arm. Swapping the two jets and negating
 * both nozzle angles mirrors the command: surge is preserved while sway force
 * and yaw moment change sign exactly.
 */
inline BodyForces jet_forces(const JetCommand& cmd, const HullParams& hull) {
    const double tp = cmd.thrust_port_n * (1.0 - 2.0 * cmd.reverse_port);
    const double ts = cmd.thrust_starboard_n * (1.0 - 2.0 * cmd.reverse_starboard);
    const double ap = deg2rad(cmd.nozzle_port_deg);
    const double as = deg2rad(cmd.nozzle_starboard_deg);

    const double fpx = tp * std::cos(ap);
    const double fpy = tp * std::sin(ap);
    const double fsx = ts * std::cos(as);
    const double fsy = ts * std::sin(as);

    const double xj = -hull.jet_stern_offset_m;
    const double yp = -hull.jet_lateral_offset_m;
    const double ys = hull.jet_lateral_offset_m;

    BodyForces out;
    out.fx_n = fpx + fsx;
    out.fy_n = fpy + fsy;
    out.mz_nm = (xj * fpy - yp * fpx) + (xj * fsy - ys * fsx);
    return out;
}

/**
 * Advance the vessel by one step of semi-implicit Euler: body velocities are
 * updated from the current forces first, then position and heading integrate
 * the new velocities. Drift adds directly to the earth-frame velocity.
 * Throws if the state stops being finite.
 */
inline VesselState step(const VesselState& s, const JetCommand& cmd,
                        const Disturbance& dist, const HullParams& hull, double dt) {
    const BodyForces f = jet_forces(cmd, hull);

    const double u1 = s.surge_mps + dt * (f.fx_n - hull.damp_surge * s.surge_mps) / hull.mass_kg;
    const double v1 = s.sway_mps + dt * (f.fy_n - hull.damp_sway * s.sway_mps) / hull.mass_kg;

    const double r0 = deg2rad(s.yaw_rate_deg_s);
    double r1 = r0 + dt * (f.mz_nm - hull.damp_yaw * r0) / hull.yaw_inertia_kgm2;
    const double rmax = deg2rad(hull.max_yaw_rate_deg_s);
    r1 = std::clamp(r1, -rmax, rmax);

    const double psi = deg2rad(s.heading_deg);
    const double ve = u1 * std::sin(psi) + v1 * std::cos(psi) + dist.drift_mps.east;
    const double vn = u1 * std::cos(psi) - v1 * std::sin(psi) + dist.drift_mps.north;

    VesselState out;
    out.surge_mps = u1;
    out.sway_mps = v1;
    out.yaw_rate_deg_s = rad2deg(r1);
    out.heading_deg = norm360(s.heading_deg + dt * out.yaw_rate_deg_s);
    out.position = {s.position.east + dt * ve, s.position.north + dt * vn, s.position.up};

    if (!std::isfinite(out.position.east) || !std::isfinite(out.position.north) ||
        !std::isfinite(out.surge_mps) || !std::isfinite(out.sway_mps) ||
        !std::isfinite(out.heading_deg) || !std::isfinite(out.yaw_rate_deg_s))
        throw Error("dynamics divergence");
    return out;
}

}  // namespace flotilla
