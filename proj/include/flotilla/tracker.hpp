#pragma once

#include <algorithm>
#include <cmath>

#include "flotilla/geo.hpp"

/**
 * Pan-only antenna gimbal. The rotator steps in fixed quanta at a bounded
 * rate, always along the shorter arc, and never past the target, so the
 * wrap-aware distance to the target cannot grow. Elevation is not actuated.
 */
namespace flotilla {

struct GimbalState {
    double pan_deg = 0.0;            // relative to the carrier body, (-180, 180]
    double max_rate_deg_s = 30.0;
    double quantization_deg = 1.0;   // motor step size; 0 means continuous
};

/// Latest position report received from the tracked peer, and how old it is.
struct PeerBelief {
    GeoPoint peer_position;
    double age_s = 0.0;
};

/// Body-relative pan that would point the boresight at the peer.
inline double target_pan_deg(const GeoPose& own, const GeoPoint& peer) {
    return wrap_signed(bearing_deg(own.position, peer) - own.heading_deg);
}

/// Advance the gimbal one control period toward `target_deg`.
inline GimbalState step_gimbal(GimbalState g, double target_deg, double dt) {
    const double arc = wrap_signed(target_deg - g.pan_deg);
    const double limit = g.max_rate_deg_s * dt;
    double move = std::clamp(arc, -limit, limit);
    if (g.quantization_deg > 0.0)
        move = std::trunc(move / g.quantization_deg) * g.quantization_deg;
    g.pan_deg = wrap_signed(g.pan_deg + move);
    return g;
}

/// Angle between where the boresight actually points and the true bearing to
/// the peer. `own` carries the true pose; any compass error is already baked
/// into the pan the gimbal was driven to.
inline double pointing_error_deg(const GeoPose& own, const GimbalState& g,
                                 const GeoPoint& peer_truth) {
    const double boresight = norm360(own.heading_deg + g.pan_deg);
    const double truth = bearing_deg(own.position, peer_truth);
    return std::fabs(wrap_signed(boresight - truth));
}

}  // namespace flotilla
