#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"
#include "flotilla/guidance.hpp"
#include "flotilla/landing.hpp"
#include "flotilla/radio.hpp"
#include "flotilla/relay.hpp"
#include "flotilla/rng.hpp"
#include "flotilla/vessel.hpp"

/**
 * Scenario files: strict-schema JSON describing one mission. Every key is
 * optional and falls back to a documented default, but unknown keys are
 * rejected with their full key path, so typos cannot silently change a run.
 * All positions are ENU metres relative to the geodetic `origin`.
 */
namespace flotilla {

struct GcsSpec {
    std::string id = "gcs";
    double east = 0.0, north = 0.0;
    double antenna_height_m = 5.0;
    double heading_deg = 0.0;
};

struct UsvSpec {
    std::string id = "usv";
    double east = 0.0, north = 0.0;
    double heading_deg = 0.0;
    double antenna_height_m = 3.0;
    double deck_height_m = 1.0;
};

struct UavSpec {
    std::string id = "uav";
    bool present = false;
    double east = 0.0, north = 0.0;
    double altitude_m = 10.0;
};

struct GuidanceSection {
    LosParams los;
    double position_noise_sigma_m = 0.0;
    double heading_noise_sigma_deg = 0.0;
};

struct WifiSection {
    double tx_power_dbm = 27.0;
    double frequency_hz = 5.5e9;
    double boresight_gain_dbi = 25.0;
    double half_power_beamwidth_deg = 8.0;
    double sidelobe_floor_db = 30.0;
    double rssi_floor_dbm = -80.0;
    double max_throughput_mbps = 400.0;
    double latency_ms = 5.0;
};

struct LteSection {
    double tx_power_dbm = 23.0;
    double frequency_hz = 8.0e8;
    double antenna_gain_dbi = 2.0;
    double rssi_floor_dbm = -100.0;
    double max_throughput_mbps = 100.0;
    double latency_ms = 40.0;
};

struct OmniSection {
    double tx_power_dbm = 27.0;
    double frequency_hz = 5.5e9;
    double antenna_gain_dbi = 6.0;
    double rssi_floor_dbm = -80.0;
    double max_throughput_mbps = 400.0;
    double latency_ms = 5.0;
};

struct RadioSection {
    double path_loss_exponent = 2.0;
    double blockage_penalty_db = 40.0;
    double rssi_noise_sigma_db = 2.0;
    bool lte_coverage = true;
    WifiSection wifi;
    LteSection lte;
    FailoverPolicy failover;
};

struct TrackerSection {
    double max_rate_deg_s = 30.0;
    double quantization_deg = 1.0;
    double usv_compass_sigma_deg = 2.0;
    double gcs_compass_sigma_deg = 0.0;
    double report_interval_s = 1.0;
};

struct RelaySection {
    bool enabled = false;
    RelayPolicy policy;
    double transit_speed_mps = 10.0;
    double uav_dish_gain_offset_db = -3.0;  // airborne dish is smaller than the ground one
    OmniSection omni;
};

struct ApproachSection {
    double transit_altitude_m = 20.0;
    double rf_altitude_m = 12.0;
    double visual_altitude_m = 4.5;
    double speed_mps = 8.0;
    double climb_rate_mps = 2.0;
    double touchdown_height_m = 0.05;
};

struct ChargeTimingSection {
    double magnet_delay_s = 0.5;
    double center_time_s = 2.0;
    double connector_time_s = 2.0;
    double charge_start_delay_s = 0.5;
    double duration_s = 30.0;
    double connector_out_delay_s = 1.0;
    double demagnetize_delay_s = 1.0;
    double takeoff_delay_s = 1.0;
};

struct LandingSection {
    bool enabled = false;
    DeckSensorSuite deck;
    double camera_half_angle_deg = 45.0;
    double visibility_m = 30.0;
    double ultrasonic_max_range_m = 6.0;
    double stage_dwell_s = 2.0;
    double magnet_holding_force_n = 300.0;
    double deck_disturbance_n = 0.0;
    RfRangingModel rf;
    double rf_noise_sigma_db = 0.2;
    ApproachSection approach;
    ChargeTimingSection charge;
};

struct Scenario {
    std::uint64_t seed = 1;
    double dt = 0.1;
    double duration_s = 60.0;
    GeoPoint origin{60.0, 25.0, 0.0};
    GcsSpec gcs;
    UsvSpec usv;
    UavSpec uav;
    HullParams hull;
    GuidanceSection guidance;
    Disturbance environment;
    RadioSection radio;
    TrackerSection tracker;
    RelaySection relay;
    LandingSection landing;
    std::vector<EnuVector> waypoints;
    std::vector<Obstacle> obstacles;
};

namespace detail {

using json = nlohmann::ordered_json;

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) throw SchemaError(path.empty() ? item.key() : path + "." + item.key(),
                                      "unknown key");
    }
}

inline std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

inline void num(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) throw SchemaError(join(path, key), "expected a number");
    out = v.get<double>();
}

inline void flag(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw SchemaError(join(path, key), "expected a boolean");
    out = v.get<bool>();
}

inline void text(const json& j, const std::string& path, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
    out = v.get<std::string>();
}

inline void seed_value(const json& j, const std::string& path, const char* key,
                       std::uint64_t& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw SchemaError(join(path, key), "expected a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw SchemaError(join(path, key), "expected a non-negative integer");
    out = v.get<std::uint64_t>();
}

inline std::array<double, 2> pair2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError(path, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace detail

/// Parse a scenario from JSON text. `source` names the input in messages.
inline Scenario parse_scenario(const std::string& body, const std::string& source = "scenario") {
    using detail::check_keys;
    using detail::flag;
    using detail::join;
    using detail::num;
    using detail::pair2;
    using detail::text;
    using json = detail::json;

    json j;
    try {
        j = json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("", source + ": " + e.what());
    }

    Scenario sc;
    check_keys(j, "", {"seed", "dt", "duration_s", "origin", "gcs", "usv", "uav", "hull",
                       "guidance", "environment", "radio", "tracker", "relay", "landing",
                       "waypoints", "obstacles"});
    detail::seed_value(j, "", "seed", sc.seed);
    num(j, "", "dt", sc.dt);
    num(j, "", "duration_s", sc.duration_s);

    if (j.contains("origin")) {
        const json& o = j.at("origin");
        check_keys(o, "origin", {"latitude", "longitude"});
        num(o, "origin", "latitude", sc.origin.latitude);
        num(o, "origin", "longitude", sc.origin.longitude);
    }

    if (j.contains("gcs")) {
        const json& o = j.at("gcs");
        check_keys(o, "gcs", {"id", "east", "north", "antenna_height_m", "heading_deg"});
        text(o, "gcs", "id", sc.gcs.id);
        num(o, "gcs", "east", sc.gcs.east);
        num(o, "gcs", "north", sc.gcs.north);
        num(o, "gcs", "antenna_height_m", sc.gcs.antenna_height_m);
        num(o, "gcs", "heading_deg", sc.gcs.heading_deg);
    }

    if (j.contains("usv")) {
        const json& o = j.at("usv");
        check_keys(o, "usv",
                   {"id", "east", "north", "heading_deg", "antenna_height_m", "deck_height_m"});
        text(o, "usv", "id", sc.usv.id);
        num(o, "usv", "east", sc.usv.east);
        num(o, "usv", "north", sc.usv.north);
        num(o, "usv", "heading_deg", sc.usv.heading_deg);
        num(o, "usv", "antenna_height_m", sc.usv.antenna_height_m);
        num(o, "usv", "deck_height_m", sc.usv.deck_height_m);
    }

    if (j.contains("uav")) {
        const json& o = j.at("uav");
        check_keys(o, "uav", {"id", "east", "north", "altitude_m"});
        sc.uav.present = true;
        text(o, "uav", "id", sc.uav.id);
        num(o, "uav", "east", sc.uav.east);
        num(o, "uav", "north", sc.uav.north);
        num(o, "uav", "altitude_m", sc.uav.altitude_m);
    }

    if (j.contains("hull")) {
        const json& o = j.at("hull");
        check_keys(o, "hull",
                   {"mass_kg", "yaw_inertia_kgm2", "damp_surge", "damp_sway", "damp_yaw",
                    "jet_lateral_offset_m", "jet_stern_offset_m", "max_thrust_n", "nozzle_max_deg",
                    "max_yaw_rate_deg_s"});
        num(o, "hull", "mass_kg", sc.hull.mass_kg);
        num(o, "hull", "yaw_inertia_kgm2", sc.hull.yaw_inertia_kgm2);
        num(o, "hull", "damp_surge", sc.hull.damp_surge);
        num(o, "hull", "damp_sway", sc.hull.damp_sway);
        num(o, "hull", "damp_yaw", sc.hull.damp_yaw);
        num(o, "hull", "jet_lateral_offset_m", sc.hull.jet_lateral_offset_m);
        num(o, "hull", "jet_stern_offset_m", sc.hull.jet_stern_offset_m);
        num(o, "hull", "max_thrust_n", sc.hull.max_thrust_n);
        num(o, "hull", "nozzle_max_deg", sc.hull.nozzle_max_deg);
        num(o, "hull", "max_yaw_rate_deg_s", sc.hull.max_yaw_rate_deg_s);
    }

    if (j.contains("guidance")) {
        const json& o = j.at("guidance");
        check_keys(o, "guidance",
                   {"lookahead_m", "acceptance_radius_m", "cruise_speed_mps", "heading_kp",
                    "heading_kd", "speed_kp", "position_noise_sigma_m", "heading_noise_sigma_deg"});
        num(o, "guidance", "lookahead_m", sc.guidance.los.lookahead_m);
        num(o, "guidance", "acceptance_radius_m", sc.guidance.los.acceptance_radius_m);
        num(o, "guidance", "cruise_speed_mps", sc.guidance.los.cruise_speed_mps);
        num(o, "guidance", "heading_kp", sc.guidance.los.heading_kp);
        num(o, "guidance", "heading_kd", sc.guidance.los.heading_kd);
        num(o, "guidance", "speed_kp", sc.guidance.los.speed_kp);
        num(o, "guidance", "position_noise_sigma_m", sc.guidance.position_noise_sigma_m);
        num(o, "guidance", "heading_noise_sigma_deg", sc.guidance.heading_noise_sigma_deg);
    }

    if (j.contains("environment")) {
        const json& o = j.at("environment");
        check_keys(o, "environment", {"drift_east_mps", "drift_north_mps"});
        num(o, "environment", "drift_east_mps", sc.environment.drift_mps.east);
        num(o, "environment", "drift_north_mps", sc.environment.drift_mps.north);
    }

    if (j.contains("radio")) {
        const json& o = j.at("radio");
        check_keys(o, "radio",
                   {"path_loss_exponent", "blockage_penalty_db", "rssi_noise_sigma_db",
                    "lte_coverage", "wifi", "lte", "failover"});
        num(o, "radio", "path_loss_exponent", sc.radio.path_loss_exponent);
        num(o, "radio", "blockage_penalty_db", sc.radio.blockage_penalty_db);
        num(o, "radio", "rssi_noise_sigma_db", sc.radio.rssi_noise_sigma_db);
        flag(o, "radio", "lte_coverage", sc.radio.lte_coverage);
        if (o.contains("wifi")) {
            const json& w = o.at("wifi");
            check_keys(w, "radio.wifi",
                       {"tx_power_dbm", "frequency_hz", "boresight_gain_dbi",
                        "half_power_beamwidth_deg", "sidelobe_floor_db", "rssi_floor_dbm",
                        "max_throughput_mbps", "latency_ms"});
            num(w, "radio.wifi", "tx_power_dbm", sc.radio.wifi.tx_power_dbm);
            num(w, "radio.wifi", "frequency_hz", sc.radio.wifi.frequency_hz);
            num(w, "radio.wifi", "boresight_gain_dbi", sc.radio.wifi.boresight_gain_dbi);
            num(w, "radio.wifi", "half_power_beamwidth_deg",
                sc.radio.wifi.half_power_beamwidth_deg);
            num(w, "radio.wifi", "sidelobe_floor_db", sc.radio.wifi.sidelobe_floor_db);
            num(w, "radio.wifi", "rssi_floor_dbm", sc.radio.wifi.rssi_floor_dbm);
            num(w, "radio.wifi", "max_throughput_mbps", sc.radio.wifi.max_throughput_mbps);
            num(w, "radio.wifi", "latency_ms", sc.radio.wifi.latency_ms);
        }
        if (o.contains("lte")) {
            const json& w = o.at("lte");
            check_keys(w, "radio.lte",
                       {"tx_power_dbm", "frequency_hz", "antenna_gain_dbi", "rssi_floor_dbm",
                        "max_throughput_mbps", "latency_ms"});
            num(w, "radio.lte", "tx_power_dbm", sc.radio.lte.tx_power_dbm);
            num(w, "radio.lte", "frequency_hz", sc.radio.lte.frequency_hz);
            num(w, "radio.lte", "antenna_gain_dbi", sc.radio.lte.antenna_gain_dbi);
            num(w, "radio.lte", "rssi_floor_dbm", sc.radio.lte.rssi_floor_dbm);
            num(w, "radio.lte", "max_throughput_mbps", sc.radio.lte.max_throughput_mbps);
            num(w, "radio.lte", "latency_ms", sc.radio.lte.latency_ms);
        }
        if (o.contains("failover")) {
            const json& w = o.at("failover");
            check_keys(w, "radio.failover", {"wifi_min_rssi_dbm", "hysteresis_db"});
            num(w, "radio.failover", "wifi_min_rssi_dbm", sc.radio.failover.wifi_min_rssi_dbm);
            num(w, "radio.failover", "hysteresis_db", sc.radio.failover.hysteresis_db);
        }
    }

    if (j.contains("tracker")) {
        const json& o = j.at("tracker");
        check_keys(o, "tracker",
                   {"max_rate_deg_s", "quantization_deg", "usv_compass_sigma_deg",
                    "gcs_compass_sigma_deg", "report_interval_s"});
        num(o, "tracker", "max_rate_deg_s", sc.tracker.max_rate_deg_s);
        num(o, "tracker", "quantization_deg", sc.tracker.quantization_deg);
        num(o, "tracker", "usv_compass_sigma_deg", sc.tracker.usv_compass_sigma_deg);
        num(o, "tracker", "gcs_compass_sigma_deg", sc.tracker.gcs_compass_sigma_deg);
        num(o, "tracker", "report_interval_s", sc.tracker.report_interval_s);
    }

    if (j.contains("relay")) {
        const json& o = j.at("relay");
        check_keys(o, "relay",
                   {"enabled", "altitude_ceiling_m", "altitude_grid_m", "flight_floor_m",
                    "transit_speed_mps", "forwarding_delay_ms", "uav_dish_gain_offset_db",
                    "omni"});
        flag(o, "relay", "enabled", sc.relay.enabled);
        num(o, "relay", "altitude_ceiling_m", sc.relay.policy.altitude_ceiling_m);
        num(o, "relay", "altitude_grid_m", sc.relay.policy.altitude_grid_m);
        num(o, "relay", "flight_floor_m", sc.relay.policy.flight_floor_m);
        num(o, "relay", "transit_speed_mps", sc.relay.transit_speed_mps);
        num(o, "relay", "forwarding_delay_ms", sc.relay.policy.forwarding_delay_ms);
        num(o, "relay", "uav_dish_gain_offset_db", sc.relay.uav_dish_gain_offset_db);
        if (o.contains("omni")) {
            const json& w = o.at("omni");
            check_keys(w, "relay.omni",
                       {"tx_power_dbm", "frequency_hz", "antenna_gain_dbi", "rssi_floor_dbm",
                        "max_throughput_mbps", "latency_ms"});
            num(w, "relay.omni", "tx_power_dbm", sc.relay.omni.tx_power_dbm);
            num(w, "relay.omni", "frequency_hz", sc.relay.omni.frequency_hz);
            num(w, "relay.omni", "antenna_gain_dbi", sc.relay.omni.antenna_gain_dbi);
            num(w, "relay.omni", "rssi_floor_dbm", sc.relay.omni.rssi_floor_dbm);
            num(w, "relay.omni", "max_throughput_mbps", sc.relay.omni.max_throughput_mbps);
            num(w, "relay.omni", "latency_ms", sc.relay.omni.latency_ms);
        }
    }

    // Landing defaults are data-heavy, so build them here before overrides.
    sc.landing.deck.rf_antennas = {{1.5, 1.5}, {-1.5, 1.5}, {-1.5, -1.5}, {1.5, -1.5}};
    sc.landing.deck.lamps = {{LampColor::Red, {1.0, 0.0}},
                             {LampColor::Green, {-1.0, 0.8}},
                             {LampColor::Blue, {-1.0, -0.8}}};

    if (j.contains("landing")) {
        const json& o = j.at("landing");
        check_keys(o, "landing",
                   {"enabled", "deck_antennas", "lamps", "platform_center",
                    "camera_half_angle_deg", "visibility_m", "ultrasonic_max_range_m",
                    "stage_dwell_s", "magnet_holding_force_n", "deck_disturbance_n", "rf",
                    "approach", "charge"});
        flag(o, "landing", "enabled", sc.landing.enabled);
        if (o.contains("deck_antennas")) {
            const json& v = o.at("deck_antennas");
            if (!v.is_array()) throw SchemaError("landing.deck_antennas", "expected an array");
            sc.landing.deck.rf_antennas.clear();
            for (std::size_t i = 0; i < v.size(); ++i)
                sc.landing.deck.rf_antennas.push_back(
                    pair2(v[i], "landing.deck_antennas[" + std::to_string(i) + "]"));
        }
        if (o.contains("lamps")) {
            const json& v = o.at("lamps");
            check_keys(v, "landing.lamps", {"red", "green", "blue"});
            sc.landing.deck.lamps.clear();
            if (v.contains("red"))
                sc.landing.deck.lamps.push_back(
                    {LampColor::Red, pair2(v.at("red"), "landing.lamps.red")});
            if (v.contains("green"))
                sc.landing.deck.lamps.push_back(
                    {LampColor::Green, pair2(v.at("green"), "landing.lamps.green")});
            if (v.contains("blue"))
                sc.landing.deck.lamps.push_back(
                    {LampColor::Blue, pair2(v.at("blue"), "landing.lamps.blue")});
        }
        if (o.contains("platform_center"))
            sc.landing.deck.platform_center = pair2(o.at("platform_center"),
                                                    "landing.platform_center");
        num(o, "landing", "camera_half_angle_deg", sc.landing.camera_half_angle_deg);
        num(o, "landing", "visibility_m", sc.landing.visibility_m);
        num(o, "landing", "ultrasonic_max_range_m", sc.landing.ultrasonic_max_range_m);
        num(o, "landing", "stage_dwell_s", sc.landing.stage_dwell_s);
        num(o, "landing", "magnet_holding_force_n", sc.landing.magnet_holding_force_n);
        num(o, "landing", "deck_disturbance_n", sc.landing.deck_disturbance_n);
        if (o.contains("rf")) {
            const json& w = o.at("rf");
            check_keys(w, "landing.rf",
                       {"ref_power_dbm", "exponent", "residual_threshold_m", "noise_sigma_db"});
            num(w, "landing.rf", "ref_power_dbm", sc.landing.rf.ref_power_dbm);
            num(w, "landing.rf", "exponent", sc.landing.rf.exponent);
            num(w, "landing.rf", "residual_threshold_m", sc.landing.rf.residual_threshold_m);
            num(w, "landing.rf", "noise_sigma_db", sc.landing.rf_noise_sigma_db);
        }
        if (o.contains("approach")) {
            const json& w = o.at("approach");
            check_keys(w, "landing.approach",
                       {"transit_altitude_m", "rf_altitude_m", "visual_altitude_m", "speed_mps",
                        "climb_rate_mps", "touchdown_height_m"});
            num(w, "landing.approach", "transit_altitude_m", sc.landing.approach.transit_altitude_m);
            num(w, "landing.approach", "rf_altitude_m", sc.landing.approach.rf_altitude_m);
            num(w, "landing.approach", "visual_altitude_m", sc.landing.approach.visual_altitude_m);
            num(w, "landing.approach", "speed_mps", sc.landing.approach.speed_mps);
            num(w, "landing.approach", "climb_rate_mps", sc.landing.approach.climb_rate_mps);
            num(w, "landing.approach", "touchdown_height_m",
                sc.landing.approach.touchdown_height_m);
        }
        if (o.contains("charge")) {
            const json& w = o.at("charge");
            check_keys(w, "landing.charge",
                       {"magnet_delay_s", "center_time_s", "connector_time_s",
                        "charge_start_delay_s", "duration_s", "connector_out_delay_s",
                        "demagnetize_delay_s", "takeoff_delay_s"});
            num(w, "landing.charge", "magnet_delay_s", sc.landing.charge.magnet_delay_s);
            num(w, "landing.charge", "center_time_s", sc.landing.charge.center_time_s);
            num(w, "landing.charge", "connector_time_s", sc.landing.charge.connector_time_s);
            num(w, "landing.charge", "charge_start_delay_s",
                sc.landing.charge.charge_start_delay_s);
            num(w, "landing.charge", "duration_s", sc.landing.charge.duration_s);
            num(w, "landing.charge", "connector_out_delay_s",
                sc.landing.charge.connector_out_delay_s);
            num(w, "landing.charge", "demagnetize_delay_s",
                sc.landing.charge.demagnetize_delay_s);
            num(w, "landing.charge", "takeoff_delay_s", sc.landing.charge.takeoff_delay_s);
        }
    }

    if (j.contains("waypoints")) {
        const json& v = j.at("waypoints");
        if (!v.is_array()) throw SchemaError("waypoints", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto p = pair2(v[i], "waypoints[" + std::to_string(i) + "]");
            sc.waypoints.push_back({p[0], p[1], 0.0});
        }
    }

    if (j.contains("obstacles")) {
        const json& v = j.at("obstacles");
        if (!v.is_array()) throw SchemaError("obstacles", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string path = "obstacles[" + std::to_string(i) + "]";
            check_keys(v[i], path, {"polygon", "height_m"});
            Obstacle ob;
            if (!v[i].contains("polygon") || !v[i].at("polygon").is_array())
                throw SchemaError(path + ".polygon", "expected an array of [x, y]");
            const json& poly = v[i].at("polygon");
            for (std::size_t k = 0; k < poly.size(); ++k)
                ob.polygon.push_back(pair2(poly[k], path + ".polygon[" + std::to_string(k) + "]"));
            num(v[i], path, "height_m", ob.height_m);
            sc.obstacles.push_back(std::move(ob));
        }
    }

    // Cross-field invariants.
    if (!(sc.dt > 0.0 && sc.dt <= 1.0)) throw SchemaError("dt", "must be in (0, 1]");
    if (!(sc.duration_s > 0.0)) throw SchemaError("duration_s", "must be positive");
    try {
        validate(sc.origin);
    } catch (const Error& e) {
        throw SchemaError("origin", e.what());
    }
    {
        std::set<std::string> ids{sc.gcs.id, sc.usv.id};
        std::size_t expected = 2;
        if (sc.uav.present) {
            ids.insert(sc.uav.id);
            expected = 3;
        }
        if (ids.size() != expected) throw SchemaError("", "node ids must be unique");
    }
    if (sc.waypoints.size() == 1)
        throw SchemaError("waypoints", "need at least two waypoints (or none)");
    for (std::size_t i = 0; i + 1 < sc.waypoints.size(); ++i)
        if (sc.waypoints[i].east == sc.waypoints[i + 1].east &&
            sc.waypoints[i].north == sc.waypoints[i + 1].north)
            throw SchemaError("waypoints[" + std::to_string(i + 1) + "]",
                              "repeated waypoint makes a degenerate segment");
    for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
        if (sc.obstacles[i].polygon.size() < 3)
            throw SchemaError("obstacles[" + std::to_string(i) + "].polygon",
                              "need at least three vertices");
        if (!(sc.obstacles[i].height_m > 0.0))
            throw SchemaError("obstacles[" + std::to_string(i) + "].height_m",
                              "must be positive");
    }
    for (auto [value, name] : {std::pair<double, const char*>{sc.hull.mass_kg, "hull.mass_kg"},
                               {sc.hull.yaw_inertia_kgm2, "hull.yaw_inertia_kgm2"},
                               {sc.hull.max_thrust_n, "hull.max_thrust_n"},
                               {sc.guidance.los.lookahead_m, "guidance.lookahead_m"},
                               {sc.guidance.los.cruise_speed_mps, "guidance.cruise_speed_mps"},
                               {sc.tracker.report_interval_s, "tracker.report_interval_s"},
                               {sc.relay.policy.altitude_grid_m, "relay.altitude_grid_m"}})
        if (!(value > 0.0)) throw SchemaError(name, "must be positive");
    if (sc.radio.path_loss_exponent < 1.0 || sc.radio.path_loss_exponent > 6.0)
        throw SchemaError("radio.path_loss_exponent", "must be in [1, 6]");
    if (sc.relay.enabled && !sc.uav.present)
        throw SchemaError("relay.enabled", "relay mission needs a uav section");
    if (sc.landing.enabled) {
        if (!sc.uav.present)
            throw SchemaError("landing.enabled", "landing mission needs a uav section");
        if (sc.landing.deck.rf_antennas.size() < 3)
            throw SchemaError("landing.deck_antennas", "need at least three antennas");
        if (detail::antennas_collinear(sc.landing.deck.rf_antennas))
            throw SchemaError("landing.deck_antennas", "antennas must not be collinear");
    }

    return sc;
}

/// Load a scenario from a file on disk.
inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

/// Canonical JSON image of a scenario with every default made explicit.
/// Hashing this (rather than the raw file) makes the trace metadata stable
/// under formatting differences and command-line overrides alike.
inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
    using json = nlohmann::ordered_json;
    json j;
    j["seed"] = sc.seed;
    j["dt"] = sc.dt;
    j["duration_s"] = sc.duration_s;
    j["origin"] = {{"latitude", sc.origin.latitude}, {"longitude", sc.origin.longitude}};
    j["gcs"] = {{"id", sc.gcs.id},
                {"east", sc.gcs.east},
                {"north", sc.gcs.north},
                {"antenna_height_m", sc.gcs.antenna_height_m},
                {"heading_deg", sc.gcs.heading_deg}};
    j["usv"] = {{"id", sc.usv.id},
                {"east", sc.usv.east},
                {"north", sc.usv.north},
                {"heading_deg", sc.usv.heading_deg},
                {"antenna_height_m", sc.usv.antenna_height_m},
                {"deck_height_m", sc.usv.deck_height_m}};
    if (sc.uav.present)
        j["uav"] = {{"id", sc.uav.id},
                    {"east", sc.uav.east},
                    {"north", sc.uav.north},
                    {"altitude_m", sc.uav.altitude_m}};
    j["hull"] = {{"mass_kg", sc.hull.mass_kg},
                 {"yaw_inertia_kgm2", sc.hull.yaw_inertia_kgm2},
                 {"damp_surge", sc.hull.damp_surge},
                 {"damp_sway", sc.hull.damp_sway},
                 {"damp_yaw", sc.hull.damp_yaw},
                 {"jet_lateral_offset_m", sc.hull.jet_lateral_offset_m},
                 {"jet_stern_offset_m", sc.hull.jet_stern_offset_m},
                 {"max_thrust_n", sc.hull.max_thrust_n},
                 {"nozzle_max_deg", sc.hull.nozzle_max_deg},
                 {"max_yaw_rate_deg_s", sc.hull.max_yaw_rate_deg_s}};
    j["guidance"] = {{"lookahead_m", sc.guidance.los.lookahead_m},
                     {"acceptance_radius_m", sc.guidance.los.acceptance_radius_m},
                     {"cruise_speed_mps", sc.guidance.los.cruise_speed_mps},
                     {"heading_kp", sc.guidance.los.heading_kp},
                     {"heading_kd", sc.guidance.los.heading_kd},
                     {"speed_kp", sc.guidance.los.speed_kp},
                     {"position_noise_sigma_m", sc.guidance.position_noise_sigma_m},
                     {"heading_noise_sigma_deg", sc.guidance.heading_noise_sigma_deg}};
    j["environment"] = {{"drift_east_mps", sc.environment.drift_mps.east},
                        {"drift_north_mps", sc.environment.drift_mps.north}};
    j["radio"] = {{"path_loss_exponent", sc.radio.path_loss_exponent},
                  {"blockage_penalty_db", sc.radio.blockage_penalty_db},
                  {"rssi_noise_sigma_db", sc.radio.rssi_noise_sigma_db},
                  {"lte_coverage", sc.radio.lte_coverage},
                  {"wifi",
                   {{"tx_power_dbm", sc.radio.wifi.tx_power_dbm},
                    {"frequency_hz", sc.radio.wifi.frequency_hz},
                    {"boresight_gain_dbi", sc.radio.wifi.boresight_gain_dbi},
                    {"half_power_beamwidth_deg", sc.radio.wifi.half_power_beamwidth_deg},
                    {"sidelobe_floor_db", sc.radio.wifi.sidelobe_floor_db},
                    {"rssi_floor_dbm", sc.radio.wifi.rssi_floor_dbm},
                    {"max_throughput_mbps", sc.radio.wifi.max_throughput_mbps},
                    {"latency_ms", sc.radio.wifi.latency_ms}}},
                  {"lte",
                   {{"tx_power_dbm", sc.radio.lte.tx_power_dbm},
                    {"frequency_hz", sc.radio.lte.frequency_hz},
                    {"antenna_gain_dbi", sc.radio.lte.antenna_gain_dbi},
                    {"rssi_floor_dbm", sc.radio.lte.rssi_floor_dbm},
                    {"max_throughput_mbps", sc.radio.lte.max_throughput_mbps},
                    {"latency_ms", sc.radio.lte.latency_ms}}},
                  {"failover",
                   {{"wifi_min_rssi_dbm", sc.radio.failover.wifi_min_rssi_dbm},
                    {"hysteresis_db", sc.radio.failover.hysteresis_db}}}};
    j["tracker"] = {{"max_rate_deg_s", sc.tracker.max_rate_deg_s},
                    {"quantization_deg", sc.tracker.quantization_deg},
                    {"usv_compass_sigma_deg", sc.tracker.usv_compass_sigma_deg},
                    {"gcs_compass_sigma_deg", sc.tracker.gcs_compass_sigma_deg},
                    {"report_interval_s", sc.tracker.report_interval_s}};
    j["relay"] = {{"enabled", sc.relay.enabled},
                  {"altitude_ceiling_m", sc.relay.policy.altitude_ceiling_m},
                  {"altitude_grid_m", sc.relay.policy.altitude_grid_m},
                  {"flight_floor_m", sc.relay.policy.flight_floor_m},
                  {"transit_speed_mps", sc.relay.transit_speed_mps},
                  {"forwarding_delay_ms", sc.relay.policy.forwarding_delay_ms},
                  {"uav_dish_gain_offset_db", sc.relay.uav_dish_gain_offset_db},
                  {"omni",
                   {{"tx_power_dbm", sc.relay.omni.tx_power_dbm},
                    {"frequency_hz", sc.relay.omni.frequency_hz},
                    {"antenna_gain_dbi", sc.relay.omni.antenna_gain_dbi},
                    {"rssi_floor_dbm", sc.relay.omni.rssi_floor_dbm},
                    {"max_throughput_mbps", sc.relay.omni.max_throughput_mbps},
                    {"latency_ms", sc.relay.omni.latency_ms}}}};
    json lamps = json::object();
    for (const auto& lamp : sc.landing.deck.lamps) {
        const char* name = lamp.color == LampColor::Red
                               ? "red"
                               : lamp.color == LampColor::Green ? "green" : "blue";
        lamps[name] = {lamp.position[0], lamp.position[1]};
    }
    json ants = json::array();
    for (const auto& a : sc.landing.deck.rf_antennas) ants.push_back({a[0], a[1]});
    j["landing"] = {{"enabled", sc.landing.enabled},
                    {"deck_antennas", ants},
                    {"lamps", lamps},
                    {"platform_center",
                     {sc.landing.deck.platform_center[0], sc.landing.deck.platform_center[1]}},
                    {"camera_half_angle_deg", sc.landing.camera_half_angle_deg},
                    {"visibility_m", sc.landing.visibility_m},
                    {"ultrasonic_max_range_m", sc.landing.ultrasonic_max_range_m},
                    {"stage_dwell_s", sc.landing.stage_dwell_s},
                    {"magnet_holding_force_n", sc.landing.magnet_holding_force_n},
                    {"deck_disturbance_n", sc.landing.deck_disturbance_n},
                    {"rf",
                     {{"ref_power_dbm", sc.landing.rf.ref_power_dbm},
                      {"exponent", sc.landing.rf.exponent},
                      {"residual_threshold_m", sc.landing.rf.residual_threshold_m},
                      {"noise_sigma_db", sc.landing.rf_noise_sigma_db}}},
                    {"approach",
                     {{"transit_altitude_m", sc.landing.approach.transit_altitude_m},
                      {"rf_altitude_m", sc.landing.approach.rf_altitude_m},
                      {"visual_altitude_m", sc.landing.approach.visual_altitude_m},
                      {"speed_mps", sc.landing.approach.speed_mps},
                      {"climb_rate_mps", sc.landing.approach.climb_rate_mps},
                      {"touchdown_height_m", sc.landing.approach.touchdown_height_m}}},
                    {"charge",
                     {{"magnet_delay_s", sc.landing.charge.magnet_delay_s},
                      {"center_time_s", sc.landing.charge.center_time_s},
                      {"connector_time_s", sc.landing.charge.connector_time_s},
                      {"charge_start_delay_s", sc.landing.charge.charge_start_delay_s},
                      {"duration_s", sc.landing.charge.duration_s},
                      {"connector_out_delay_s", sc.landing.charge.connector_out_delay_s},
                      {"demagnetize_delay_s", sc.landing.charge.demagnetize_delay_s},
                      {"takeoff_delay_s", sc.landing.charge.takeoff_delay_s}}}};
    json wps = json::array();
    for (const auto& w : sc.waypoints) wps.push_back({w.east, w.north});
    j["waypoints"] = wps;
    json obs = json::array();
    for (const auto& ob : sc.obstacles) {
        json poly = json::array();
        for (const auto& p : ob.polygon) poly.push_back({p[0], p[1]});
        obs.push_back({{"polygon", poly}, {"height_m", ob.height_m}});
    }
    j["obstacles"] = obs;
    return j;
}

/// 16-hex-digit hash of the canonical scenario, printed in trace metadata.
inline std::string scenario_hash(const Scenario& sc) {
    const std::uint64_t h = fnv1a64(scenario_to_json(sc).dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace flotilla
