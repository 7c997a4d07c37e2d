#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"

/**
 * Link budget, terrain occlusion and interface failover.
 *
 * RSSI follows the log-distance form
 *     rssi = tx_power + G_tx + G_rx - path_loss - blockage_penalty
 * with path_loss = 20*log10(f) + 10*n*log10(d) - 147.55, which reduces to
 * free space at exponent 2. Directional antennas use a Gaussian main lobe
 * clamped at a sidelobe floor. Obstacles are extruded polygons; a link is
 * blocked when the straight path crosses a polygon while below its height.
 * The cellular interface is treated as area coverage: its budget uses omni
 * gains and obstacles never block it.
 */
namespace flotilla {

enum class InterfaceKind { WifiDirectional, WifiOmni, Lte };

inline const char* to_string(InterfaceKind k) {
    switch (k) {
        case InterfaceKind::WifiDirectional: return "wifi_directional";
        case InterfaceKind::WifiOmni: return "wifi_omni";
        case InterfaceKind::Lte: return "lte";
    }
    return "?";
}

/// Gaussian main lobe: gain falls 12 dB per (theta/beamwidth)^2, limited by
/// the sidelobe floor. A floor of zero models an omnidirectional element.
struct AntennaPattern {
    double boresight_gain_dbi = 0.0;
    double half_power_beamwidth_deg = 360.0;
    double sidelobe_floor_db = 0.0;  // dB below boresight, >= 0

    static AntennaPattern omni(double gain_dbi) { return {gain_dbi, 360.0, 0.0}; }
};

struct InterfaceConfig {
    InterfaceKind kind = InterfaceKind::WifiDirectional;
    double tx_power_dbm = 27.0;
    double frequency_hz = 5.5e9;
    AntennaPattern pattern;
    double rssi_floor_dbm = -80.0;
    double max_throughput_mbps = 400.0;
    double base_latency_ms = 5.0;
};

/// A node that can hold several radio interfaces (e.g. a boat with a dish
/// and a cellular modem).
struct RadioNode {
    std::string id;
    GeoPoint position;
    std::vector<InterfaceConfig> interfaces;
};

inline const InterfaceConfig& find_interface(const RadioNode& n, InterfaceKind k) {
    for (const auto& i : n.interfaces)
        if (i.kind == k) return i;
    throw Error("node '" + n.id + "' has no " + std::string(to_string(k)) + " interface");
}

/// Flat-topped obstacle: a horizontal polygon footprint (ENU metres in the
/// map frame) extruded from the surface to `height_m`.
struct Obstacle {
    std::vector<std::array<double, 2>> polygon;
    double height_m = 0.0;
};

struct ObstacleMap {
    GeoPoint origin;  // anchor of the polygon frame
    std::vector<Obstacle> obstacles;
};

namespace detail {

inline bool point_in_polygon(double x, double y,
                             const std::vector<std::array<double, 2>>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = poly[i][0], yi = poly[i][1];
        const double xj = poly[j][0], yj = poly[j][1];
        const bool crosses = (yi > y) != (yj > y);
        if (crosses && x < (xj - xi) * (y - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

/// Parameters t in [0,1] where segment a->b crosses polygon edges.
inline void edge_crossings(const EnuVector& a, const EnuVector& b,
                           const std::vector<std::array<double, 2>>& poly,
                           std::vector<double>& ts) {
    const double rx = b.east - a.east, ry = b.north - a.north;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double sx = poly[i][0] - poly[j][0];
        const double sy = poly[i][1] - poly[j][1];
        const double denom = rx * sy - ry * sx;
        if (std::fabs(denom) < 1e-15) continue;  // parallel edge
        const double qx = poly[j][0] - a.east;
        const double qy = poly[j][1] - a.north;
        const double t = (qx * sy - qy * sx) / denom;
        const double u = (qx * ry - qy * rx) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
    }
}

}  // namespace detail

/**
 * True when the straight 3D segment between the two points passes through an
 * obstacle: its horizontal projection enters the footprint while the
 * linearly interpolated altitude is below the obstacle height somewhere in
 * the crossing interval. Symmetric in its endpoints.
 */
inline bool los_blocked(const GeoPoint& a, const GeoPoint& b, const ObstacleMap& map) {
    if (map.obstacles.empty()) return false;
    const EnuVector ea = geo_to_enu(map.origin, a);
    const EnuVector eb = geo_to_enu(map.origin, b);

    std::vector<double> ts;
    for (const Obstacle& ob : map.obstacles) {
        if (ob.polygon.size() < 3) continue;
        ts.clear();
        ts.push_back(0.0);
        ts.push_back(1.0);
        detail::edge_crossings(ea, eb, ob.polygon, ts);
        std::sort(ts.begin(), ts.end());

        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            const double t0 = ts[i], t1 = ts[i + 1];
            if (t1 - t0 < 1e-12) continue;
            const double tm = 0.5 * (t0 + t1);
            const double px = ea.east + tm * (eb.east - ea.east);
            const double py = ea.north + tm * (eb.north - ea.north);
            if (!detail::point_in_polygon(px, py, ob.polygon)) continue;
            const double z0 = ea.up + t0 * (eb.up - ea.up);
            const double z1 = ea.up + t1 * (eb.up - ea.up);
            if (std::min(z0, z1) < ob.height_m - 1e-9) return true;
        }
    }
    return false;
}

/// Path loss in dB for a log-distance model. Distances below one metre are
/// clamped to the one-metre reference.
inline double path_loss_db(double distance_m, double frequency_hz, double exponent) {
    const double d = std::max(distance_m, 1.0);
    return 20.0 * std::log10(frequency_hz) + 10.0 * exponent * std::log10(d) - 147.55;
}

/// Gain at an off-boresight angle in [0, 180] degrees.
inline double antenna_gain_dbi(const AntennaPattern& p, double off_boresight_deg) {
    if (!(off_boresight_deg >= 0.0 && off_boresight_deg <= 180.0))
        throw Error("off-boresight angle outside [0, 180]");
    const double ratio = off_boresight_deg / p.half_power_beamwidth_deg;
    const double rolloff = std::min(12.0 * ratio * ratio, p.sidelobe_floor_db);
    return p.boresight_gain_dbi - rolloff;
}

/// One end of a link: a position, an interface, and where its boresight
/// points (earth-frame azimuth; ignored for omni patterns).
struct RadioEndpoint {
    GeoPoint position;
    InterfaceConfig iface;
    double boresight_azimuth_deg = 0.0;
};

struct LinkBudgetConfig {
    double path_loss_exponent = 2.0;
    double blockage_penalty_db = 40.0;
    bool lte_in_coverage = true;
};

/// Instantaneous link observation.
struct LinkSample {
    double rssi_dbm = -200.0;
    bool blocked = false;
    bool connected = false;
    double throughput_mbps = 0.0;
    double latency_ms = 0.0;
};

/// Piecewise-linear rate adaptation: zero at the receive floor, ramping to
/// the interface maximum 20 dB above it.
inline double throughput_mbps(double rssi_dbm, const InterfaceConfig& iface) {
    if (rssi_dbm < iface.rssi_floor_dbm) return 0.0;
    const double frac = std::clamp((rssi_dbm - iface.rssi_floor_dbm) / 20.0, 0.0, 1.0);
    return frac * iface.max_throughput_mbps;
}

namespace detail {

/// 3D angle between a horizontal boresight at `azimuth` and the line of
/// sight `los` (unit not required).
inline double off_boresight_deg(double azimuth_deg, const EnuVector& los) {
    const double n = norm3d(los);
    if (n == 0.0) return 0.0;
    const double az = deg2rad(azimuth_deg);
    const double dot = (std::sin(az) * los.east + std::cos(az) * los.north) / n;
    return rad2deg(std::acos(std::clamp(dot, -1.0, 1.0)));
}

}  // namespace detail

/**
 * Evaluate one link. Gains are applied at both ends from each endpoint's
 * own pointing; the receiver's floor, rate curve and latency govern the
 * resulting sample. `noise_db` is added to the RSSI before any threshold is
 * applied. Blockage only affects the WiFi kinds; the cellular path reports
 * blocked = false whenever the scenario says it has coverage.
 */
inline LinkSample link_rssi(const RadioEndpoint& tx, const RadioEndpoint& rx,
                            const ObstacleMap& obstacles, const LinkBudgetConfig& cfg,
                            double noise_db = 0.0) {
    const EnuVector los = geo_to_enu(tx.position, rx.position);
    const double dist = norm3d(los);
    const EnuVector back = geo_to_enu(rx.position, tx.position);

    const double g_tx = antenna_gain_dbi(tx.iface.pattern,
                                         detail::off_boresight_deg(tx.boresight_azimuth_deg, los));
    const double g_rx = antenna_gain_dbi(rx.iface.pattern,
                                         detail::off_boresight_deg(rx.boresight_azimuth_deg, back));

    double rssi = tx.iface.tx_power_dbm + g_tx + g_rx -
                  path_loss_db(dist, tx.iface.frequency_hz, cfg.path_loss_exponent);

    LinkSample s;
    const bool lte = tx.iface.kind == InterfaceKind::Lte;
    if (lte) {
        s.blocked = false;
    } else {
        s.blocked = los_blocked(tx.position, rx.position, obstacles);
        if (s.blocked) rssi -= cfg.blockage_penalty_db;
    }
    s.rssi_dbm = rssi + noise_db;
    s.connected = s.rssi_dbm >= rx.iface.rssi_floor_dbm && (!lte || cfg.lte_in_coverage);
    s.throughput_mbps = s.connected ? throughput_mbps(s.rssi_dbm, rx.iface) : 0.0;
    s.latency_ms = s.connected ? rx.iface.base_latency_ms : 0.0;
    return s;
}

enum class LinkChoice { None, Wifi, Lte };

inline const char* to_string(LinkChoice c) {
    switch (c) {
        case LinkChoice::None: return "none";
        case LinkChoice::Wifi: return "wifi";
        case LinkChoice::Lte: return "lte";
    }
    return "?";
}

struct FailoverPolicy {
    double wifi_min_rssi_dbm = -75.0;  // switch-down threshold
    double hysteresis_db = 6.0;        // extra margin required to come back
};

/**
 * Prefer the high-rate WiFi path whenever it is healthy; otherwise fall back
 * to cellular. Returning to WiFi from any other choice demands the extra
 * hysteresis margin, so constant marginal samples can never oscillate.
 */
inline LinkChoice select_interface(const LinkSample& wifi, const LinkSample& lte,
                                   LinkChoice previous, const FailoverPolicy& policy) {
    double required = policy.wifi_min_rssi_dbm;
    if (previous != LinkChoice::Wifi) required += policy.hysteresis_db;
    if (wifi.connected && wifi.rssi_dbm >= required) return LinkChoice::Wifi;
    if (lte.connected) return LinkChoice::Lte;
    return LinkChoice::None;
}

}  // namespace flotilla
