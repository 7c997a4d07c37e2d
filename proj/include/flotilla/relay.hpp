#pragma once

#include <cmath>
#include <optional>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"
#include "flotilla/radio.hpp"

/**
 * Aerial relay placement for an occluded ground-to-vessel link.
 *
 * When terrain blocks the direct path, a hovering aircraft bridges it with
 * two hops: a directional hop to the ground station and an omni hop down to
 * the vessel. Placement scans a short list of hover candidates and picks the
 * one needing the lowest altitude that clears both hops.
 */
namespace flotilla {

struct RelayPolicy {
    double altitude_ceiling_m = 150.0;
    double altitude_grid_m = 1.0;
    double flight_floor_m = 10.0;
    double forwarding_delay_ms = 2.0;
};

struct RelayPlan {
    bool deploy = false;
    GeoPoint hover_position;
    double expected_end_to_end_throughput_mbps = 0.0;
    double expected_end_to_end_latency_ms = 0.0;
};

/**
 * Lowest altitude on the policy grid at which a relay hovering over
 * `hover_2d` (altitude ignored) sees both endpoints unobstructed. Scans from
 * the flight floor up to the ceiling; throws "relay infeasible" if no
 * altitude on the grid clears both hops.
 */
inline double min_relay_altitude_m(const GeoPoint& gcs, const GeoPoint& usv,
                                   const GeoPoint& hover_2d, const ObstacleMap& obstacles,
                                   const RelayPolicy& policy) {
    for (double h = policy.flight_floor_m; h <= policy.altitude_ceiling_m + 1e-9;
         h += policy.altitude_grid_m) {
        GeoPoint hover = hover_2d;
        hover.altitude = h;
        if (!los_blocked(gcs, hover, obstacles) && !los_blocked(hover, usv, obstacles))
            return h;
    }
    throw Error("relay infeasible: no altitude clears both hops");
}

namespace detail {

/// Bearing for antenna pointing; a vertical path has no meaningful azimuth,
/// so any value does (the off-boresight angle is 90 degrees regardless).
inline double pointing_bearing_deg(const GeoPoint& from, const GeoPoint& to) {
    const EnuVector d = geo_to_enu(from, to);
    if (horizontal_norm(d) < 1e-9) return 0.0;
    return norm360(rad2deg(std::atan2(d.east, d.north)));
}

/// Throughput and latency of one hop with both antennas ideally aligned.
inline LinkSample aligned_hop(const GeoPoint& a, const InterfaceConfig& ia,
                              const GeoPoint& b, const InterfaceConfig& ib,
                              const ObstacleMap& obstacles, const LinkBudgetConfig& cfg) {
    RadioEndpoint ea{a, ia, pointing_bearing_deg(a, b)};
    RadioEndpoint eb{b, ib, pointing_bearing_deg(b, a)};
    return link_rssi(ea, eb, obstacles, cfg);
}

}  // namespace detail

/**
 * Decide whether to put the aircraft up and where. Deploys only when the
 * direct station-to-vessel path is blocked. Hover candidates are eleven
 * evenly spaced points along the station-vessel baseline plus the point
 * straight above the vessel; ties in required altitude resolve toward the
 * vessel end. The returned throughput is the bottleneck of the two hops and
 * the latency is the sum of hop latencies plus the forwarding delay.
 */
inline RelayPlan plan_relay(const RadioNode& gcs, const RadioNode& usv, const RadioNode& uav,
                            const ObstacleMap& obstacles, const LinkBudgetConfig& budget,
                            const RelayPolicy& policy) {
    const InterfaceConfig& gcs_dish = find_interface(gcs, InterfaceKind::WifiDirectional);
    const InterfaceConfig& usv_omni = find_interface(usv, InterfaceKind::WifiOmni);
    const InterfaceConfig& uav_dish = find_interface(uav, InterfaceKind::WifiDirectional);
    const InterfaceConfig& uav_omni = find_interface(uav, InterfaceKind::WifiOmni);

    RelayPlan plan;
    if (!los_blocked(gcs.position, usv.position, obstacles)) {
        plan.hover_position = usv.position;
        plan.hover_position.altitude = policy.flight_floor_m;
        return plan;  // direct link is fine, keep the aircraft down
    }

    const EnuVector base = geo_to_enu(gcs.position, usv.position);
    std::optional<double> best_alt;
    GeoPoint best_hover;
    // Scanned vessel-end first (the overhead point, then t descending) with a
    // strictly-less test, so equal-altitude ties resolve toward the vessel.
    for (int i = 11; i >= 0; --i) {
        const double t = std::min(i / 10.0, 1.0);  // i == 11 re-checks the vessel overhead
        GeoPoint cand = enu_to_geo(gcs.position, {t * base.east, t * base.north, 0.0});
        cand.altitude = 0.0;
        double h;
        try {
            h = min_relay_altitude_m(gcs.position, usv.position, cand, obstacles, policy);
        } catch (const Error&) {
            continue;
        }
        if (!best_alt || h < *best_alt) {
            best_alt = h;
            best_hover = cand;
            best_hover.altitude = h;
        }
    }
    if (!best_alt) throw Error("relay infeasible: no altitude clears both hops");

    const LinkSample up = detail::aligned_hop(gcs.position, gcs_dish, best_hover, uav_dish,
                                              obstacles, budget);
    const LinkSample down = detail::aligned_hop(best_hover, uav_omni, usv.position, usv_omni,
                                                obstacles, budget);
    plan.deploy = true;
    plan.hover_position = best_hover;
    plan.expected_end_to_end_throughput_mbps = std::min(up.throughput_mbps, down.throughput_mbps);
    plan.expected_end_to_end_latency_ms = up.latency_ms + down.latency_ms +
                                          policy.forwarding_delay_ms;
    return plan;
}

}  // namespace flotilla
