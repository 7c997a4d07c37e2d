#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flotilla/error.hpp"
#include "flotilla/landing.hpp"
#include "flotilla/radio.hpp"

/**
 * Trace output: one record per simulation step, serialized as CSV or JSON
 * Lines. Both formats carry the same fields in the same order and open with
 * a metadata line naming the scenario hash and seed, so a trace can always
 * be matched back to the exact configuration that produced it.
 */
namespace flotilla {

struct TraceRecord {
    double time_s = 0.0;
    double usv_east = 0.0;
    double usv_north = 0.0;
    double usv_heading_deg = 0.0;
    double usv_surge_mps = 0.0;
    double usv_sway_mps = 0.0;
    double usv_yaw_rate_deg_s = 0.0;
    double cross_track_m = 0.0;
    int active_segment = 0;
    bool path_finished = false;
    LinkSample wifi;
    LinkSample lte;
    LinkChoice selected = LinkChoice::None;
    double gcs_pan_deg = 0.0;
    double gcs_pointing_error_deg = 0.0;
    double usv_pan_deg = 0.0;
    double usv_pointing_error_deg = 0.0;
    double gcs_belief_age_s = 0.0;
    bool relay_deployed = false;
    double uav_east = 0.0;
    double uav_north = 0.0;
    double uav_up = 0.0;
    double hop1_rssi_dbm = -200.0;
    double hop2_rssi_dbm = -200.0;
    double relay_throughput_mbps = 0.0;
    double relay_latency_ms = 0.0;
    LandingStage landing_stage = LandingStage::Transit;
    ChargeState charge_state = ChargeState::Departed;  // airframe not on the deck
    std::string events;  // ';'-separated event names fired during this step
};

inline constexpr std::array<const char*, 36> kTraceColumns = {
    "time_s",
    "usv_east",
    "usv_north",
    "usv_heading_deg",
    "usv_surge_mps",
    "usv_sway_mps",
    "usv_yaw_rate_deg_s",
    "cross_track_m",
    "active_segment",
    "path_finished",
    "wifi_rssi_dbm",
    "wifi_blocked",
    "wifi_connected",
    "wifi_throughput_mbps",
    "wifi_latency_ms",
    "lte_rssi_dbm",
    "lte_connected",
    "lte_throughput_mbps",
    "lte_latency_ms",
    "selected_link",
    "gcs_pan_deg",
    "gcs_pointing_error_deg",
    "usv_pan_deg",
    "usv_pointing_error_deg",
    "gcs_belief_age_s",
    "relay_deployed",
    "uav_east",
    "uav_north",
    "uav_up",
    "hop1_rssi_dbm",
    "hop2_rssi_dbm",
    "relay_throughput_mbps",
    "relay_latency_ms",
    "landing_stage",
    "charge_state",
    "events",
};

namespace detail {

/// Shortest decimal form that round-trips doubles we care about; fixed
/// format so the byte stream is identical run to run.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline LandingStage stage_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(LandingStage::Secured); ++i)
        if (s == to_string(static_cast<LandingStage>(i))) return static_cast<LandingStage>(i);
    throw Error("unknown landing stage: " + s);
}

inline ChargeState charge_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(ChargeState::Departed); ++i)
        if (s == to_string(static_cast<ChargeState>(i))) return static_cast<ChargeState>(i);
    throw Error("unknown charge state: " + s);
}

inline LinkChoice link_from_string(const std::string& s) {
    if (s == "none") return LinkChoice::None;
    if (s == "wifi") return LinkChoice::Wifi;
    if (s == "lte") return LinkChoice::Lte;
    throw Error("unknown link choice: " + s);
}

}  // namespace detail

inline nlohmann::ordered_json record_to_json(const TraceRecord& r) {
    using detail::fmt_double;
    nlohmann::ordered_json j;
    j["time_s"] = r.time_s;
    j["usv_east"] = r.usv_east;
    j["usv_north"] = r.usv_north;
    j["usv_heading_deg"] = r.usv_heading_deg;
    j["usv_surge_mps"] = r.usv_surge_mps;
    j["usv_sway_mps"] = r.usv_sway_mps;
    j["usv_yaw_rate_deg_s"] = r.usv_yaw_rate_deg_s;
    j["cross_track_m"] = r.cross_track_m;
    j["active_segment"] = r.active_segment;
    j["path_finished"] = r.path_finished;
    j["wifi_rssi_dbm"] = r.wifi.rssi_dbm;
    j["wifi_blocked"] = r.wifi.blocked;
    j["wifi_connected"] = r.wifi.connected;
    j["wifi_throughput_mbps"] = r.wifi.throughput_mbps;
    j["wifi_latency_ms"] = r.wifi.latency_ms;
    j["lte_rssi_dbm"] = r.lte.rssi_dbm;
    j["lte_connected"] = r.lte.connected;
    j["lte_throughput_mbps"] = r.lte.throughput_mbps;
    j["lte_latency_ms"] = r.lte.latency_ms;
    j["selected_link"] = to_string(r.selected);
    j["gcs_pan_deg"] = r.gcs_pan_deg;
    j["gcs_pointing_error_deg"] = r.gcs_pointing_error_deg;
    j["usv_pan_deg"] = r.usv_pan_deg;
    j["usv_pointing_error_deg"] = r.usv_pointing_error_deg;
    j["gcs_belief_age_s"] = r.gcs_belief_age_s;
    j["relay_deployed"] = r.relay_deployed;
    j["uav_east"] = r.uav_east;
    j["uav_north"] = r.uav_north;
    j["uav_up"] = r.uav_up;
    j["hop1_rssi_dbm"] = r.hop1_rssi_dbm;
    j["hop2_rssi_dbm"] = r.hop2_rssi_dbm;
    j["relay_throughput_mbps"] = r.relay_throughput_mbps;
    j["relay_latency_ms"] = r.relay_latency_ms;
    j["landing_stage"] = to_string(r.landing_stage);
    j["charge_state"] = to_string(r.charge_state);
    j["events"] = r.events;
    return j;
}

inline TraceRecord record_from_json(const nlohmann::ordered_json& j) {
    TraceRecord r;
    r.time_s = j.at("time_s").get<double>();
    r.usv_east = j.at("usv_east").get<double>();
    r.usv_north = j.at("usv_north").get<double>();
    r.usv_heading_deg = j.at("usv_heading_deg").get<double>();
    r.usv_surge_mps = j.at("usv_surge_mps").get<double>();
    r.usv_sway_mps = j.at("usv_sway_mps").get<double>();
    r.usv_yaw_rate_deg_s = j.at("usv_yaw_rate_deg_s").get<double>();
    r.cross_track_m = j.at("cross_track_m").get<double>();
    r.active_segment = j.at("active_segment").get<int>();
    r.path_finished = j.at("path_finished").get<bool>();
    r.wifi.rssi_dbm = j.at("wifi_rssi_dbm").get<double>();
    r.wifi.blocked = j.at("wifi_blocked").get<bool>();
    r.wifi.connected = j.at("wifi_connected").get<bool>();
    r.wifi.throughput_mbps = j.at("wifi_throughput_mbps").get<double>();
    r.wifi.latency_ms = j.at("wifi_latency_ms").get<double>();
    r.lte.rssi_dbm = j.at("lte_rssi_dbm").get<double>();
    r.lte.connected = j.at("lte_connected").get<bool>();
    r.lte.throughput_mbps = j.at("lte_throughput_mbps").get<double>();
    r.lte.latency_ms = j.at("lte_latency_ms").get<double>();
    r.selected = detail::link_from_string(j.at("selected_link").get<std::string>());
    r.gcs_pan_deg = j.at("gcs_pan_deg").get<double>();
    r.gcs_pointing_error_deg = j.at("gcs_pointing_error_deg").get<double>();
    r.usv_pan_deg = j.at("usv_pan_deg").get<double>();
    r.usv_pointing_error_deg = j.at("usv_pointing_error_deg").get<double>();
    r.gcs_belief_age_s = j.at("gcs_belief_age_s").get<double>();
    r.relay_deployed = j.at("relay_deployed").get<bool>();
    r.uav_east = j.at("uav_east").get<double>();
    r.uav_north = j.at("uav_north").get<double>();
    r.uav_up = j.at("uav_up").get<double>();
    r.hop1_rssi_dbm = j.at("hop1_rssi_dbm").get<double>();
    r.hop2_rssi_dbm = j.at("hop2_rssi_dbm").get<double>();
    r.relay_throughput_mbps = j.at("relay_throughput_mbps").get<double>();
    r.relay_latency_ms = j.at("relay_latency_ms").get<double>();
    r.landing_stage = detail::stage_from_string(j.at("landing_stage").get<std::string>());
    r.charge_state = detail::charge_from_string(j.at("charge_state").get<std::string>());
    r.events = j.at("events").get<std::string>();
    return r;
}

inline void write_csv(std::ostream& out, const std::vector<TraceRecord>& records,
                      const std::string& scenario_hash, std::uint64_t seed) {
    using detail::fmt_double;
    for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
        if (i) out << ',';
        out << kTraceColumns[i];
    }
    out << '\n';
    out << "# scenario_hash=" << scenario_hash << " seed=" << seed << '\n';
    for (const auto& r : records) {
        out << fmt_double(r.time_s) << ',' << fmt_double(r.usv_east) << ','
            << fmt_double(r.usv_north) << ',' << fmt_double(r.usv_heading_deg) << ','
            << fmt_double(r.usv_surge_mps) << ',' << fmt_double(r.usv_sway_mps) << ','
            << fmt_double(r.usv_yaw_rate_deg_s) << ',' << fmt_double(r.cross_track_m) << ','
            << r.active_segment << ',' << int(r.path_finished) << ','
            << fmt_double(r.wifi.rssi_dbm) << ',' << int(r.wifi.blocked) << ','
            << int(r.wifi.connected) << ',' << fmt_double(r.wifi.throughput_mbps) << ','
            << fmt_double(r.wifi.latency_ms) << ',' << fmt_double(r.lte.rssi_dbm) << ','
            << int(r.lte.connected) << ',' << fmt_double(r.lte.throughput_mbps) << ','
            << fmt_double(r.lte.latency_ms) << ',' << to_string(r.selected) << ','
            << fmt_double(r.gcs_pan_deg) << ',' << fmt_double(r.gcs_pointing_error_deg) << ','
            << fmt_double(r.usv_pan_deg) << ',' << fmt_double(r.usv_pointing_error_deg) << ','
            << fmt_double(r.gcs_belief_age_s) << ',' << int(r.relay_deployed) << ','
            << fmt_double(r.uav_east) << ',' << fmt_double(r.uav_north) << ','
            << fmt_double(r.uav_up) << ',' << fmt_double(r.hop1_rssi_dbm) << ','
            << fmt_double(r.hop2_rssi_dbm) << ',' << fmt_double(r.relay_throughput_mbps) << ','
            << fmt_double(r.relay_latency_ms) << ',' << to_string(r.landing_stage) << ','
            << to_string(r.charge_state) << ',' << r.events << '\n';
    }
}

inline void write_jsonl(std::ostream& out, const std::vector<TraceRecord>& records,
                        const std::string& scenario_hash, std::uint64_t seed) {
    nlohmann::ordered_json meta;
    meta["scenario_hash"] = scenario_hash;
    meta["seed"] = seed;
    out << meta.dump() << '\n';
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace flotilla
