#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"
#include "flotilla/guidance.hpp"
#include "flotilla/landing.hpp"
#include "flotilla/radio.hpp"
#include "flotilla/relay.hpp"
#include "flotilla/rng.hpp"
#include "flotilla/scenario.hpp"
#include "flotilla/trace.hpp"
#include "flotilla/tracker.hpp"
#include "flotilla/vessel.hpp"

/**
 * The simulation engine. One fixed-step loop advances the vessel, the
 * antenna trackers, the radio links, and (when enabled) the relay aircraft
 * or the deck-landing sequence, emitting one trace record per step.
 *
 * Step order within a record: guidance decides a jet command from noisy
 * measurements, the trackers slew, the links are sampled with the resulting
 * pointing and the failover choice is made, then the relay and landing
 * subsystems react. Kinematics integrate after the record is taken, so each
 * record shows the state at its timestamp together with the decisions taken
 * from it.
 */
namespace flotilla {

struct SimResult {
    std::vector<TraceRecord> records;
    bool aborted = false;
    std::string abort_reason;
};

class Engine {
public:
    explicit Engine(const Scenario& sc)
        : sc_(sc),
          streams_(sc.seed),
          compass_usv_(streams_.stream("compass.usv")),
          compass_gcs_(streams_.stream("compass.gcs")),
          guid_pos_(streams_.stream("guidance.position")),
          guid_head_(streams_.stream("guidance.heading")),
          rssi_wifi_(streams_.stream("rssi.wifi")),
          rssi_lte_(streams_.stream("rssi.lte")),
          rf_landing_(streams_.stream("rf.landing")),
          machine_(sc.landing.stage_dwell_s) {
        omap_.origin = sc_.origin;
        omap_.obstacles = sc_.obstacles;
        budget_ = {sc_.radio.path_loss_exponent, sc_.radio.blockage_penalty_db,
                   sc_.radio.lte_coverage};

        const WifiSection& w = sc_.radio.wifi;
        wifi_cfg_ = {InterfaceKind::WifiDirectional,
                     w.tx_power_dbm,
                     w.frequency_hz,
                     {w.boresight_gain_dbi, w.half_power_beamwidth_deg, w.sidelobe_floor_db},
                     w.rssi_floor_dbm,
                     w.max_throughput_mbps,
                     w.latency_ms};
        const LteSection& l = sc_.radio.lte;
        lte_cfg_ = {InterfaceKind::Lte,
                    l.tx_power_dbm,
                    l.frequency_hz,
                    AntennaPattern::omni(l.antenna_gain_dbi),
                    l.rssi_floor_dbm,
                    l.max_throughput_mbps,
                    l.latency_ms};
        const OmniSection& o = sc_.relay.omni;
        omni_cfg_ = {InterfaceKind::WifiOmni,
                     o.tx_power_dbm,
                     o.frequency_hz,
                     AntennaPattern::omni(o.antenna_gain_dbi),
                     o.rssi_floor_dbm,
                     o.max_throughput_mbps,
                     o.latency_ms};
        uav_dish_cfg_ = wifi_cfg_;
        uav_dish_cfg_.pattern.boresight_gain_dbi += sc_.relay.uav_dish_gain_offset_db;

        usv_.position = {sc_.usv.east, sc_.usv.north, 0.0};
        usv_.heading_deg = norm360(sc_.usv.heading_deg);
        gcs_enu_ = {sc_.gcs.east, sc_.gcs.north, 0.0};
        gimbal_gcs_ = {0.0, sc_.tracker.max_rate_deg_s, sc_.tracker.quantization_deg};
        gimbal_usv_ = gimbal_gcs_;
        belief_enu_ = usv_.position;  // start position is shared before departure

        uav_pos_ = {sc_.uav.east, sc_.uav.north, sc_.uav.altitude_m};
        landing_mission_ = sc_.landing.enabled && sc_.uav.present;
        relay_mission_ = !landing_mission_ && sc_.relay.enabled && sc_.uav.present;
    }

    /// Run the whole configured duration; on an internal error the partial
    /// trace is returned with the abort flag set.
    SimResult run() {
        SimResult res;
        const long long n = std::llround(sc_.duration_s / sc_.dt);
        res.records.reserve(static_cast<std::size_t>(n) + 1);
        try {
            for (long long k = 0; k <= n; ++k) {
                res.records.push_back(compute_step(static_cast<double>(k) * sc_.dt));
                if (k < n) advance();
            }
        } catch (const Error& e) {
            res.aborted = true;
            res.abort_reason = e.what();
        }
        return res;
    }

    const Scenario& scenario() const { return sc_; }

private:
    GeoPoint geo(const EnuVector& v) const { return enu_to_geo(sc_.origin, v); }

    /// Deck platform centre in the scenario ENU frame.
    EnuVector deck_center(const VesselState& s) const {
        const double psi = deg2rad(s.heading_deg);
        const double cx = sc_.landing.deck.platform_center[0];
        const double cy = sc_.landing.deck.platform_center[1];
        return {s.position.east + cx * std::sin(psi) + cy * std::cos(psi),
                s.position.north + cx * std::cos(psi) - cy * std::sin(psi),
                sc_.usv.deck_height_m};
    }

    void push_event(std::vector<std::string>& evs, std::string name) {
        evs.push_back(std::move(name));
    }

    TraceRecord compute_step(double t) {
        TraceRecord r;
        r.time_s = t;
        r.usv_east = usv_.position.east;
        r.usv_north = usv_.position.north;
        r.usv_heading_deg = usv_.heading_deg;
        r.usv_surge_mps = usv_.surge_mps;
        r.usv_sway_mps = usv_.sway_mps;
        r.usv_yaw_rate_deg_s = usv_.yaw_rate_deg_s;
        std::vector<std::string> evs = std::move(pending_events_);
        pending_events_.clear();

        // Guidance: steer from noisy position and heading, then update the
        // active segment for the next step.
        last_cmd_ = JetCommand{};
        if (sc_.waypoints.size() >= 2) {
            const PathSegment seg = segment_at(sc_.waypoints, guid_.active_segment);
            r.cross_track_m = cross_track_error(seg, usv_.position);
            if (!guid_.finished) {
                EnuVector meas = usv_.position;
                if (sc_.guidance.position_noise_sigma_m > 0.0) {
                    meas.east += guid_pos_.gaussian(0.0, sc_.guidance.position_noise_sigma_m);
                    meas.north += guid_pos_.gaussian(0.0, sc_.guidance.position_noise_sigma_m);
                }
                VesselState meas_state = usv_;
                if (sc_.guidance.heading_noise_sigma_deg > 0.0)
                    meas_state.heading_deg = norm360(
                        usv_.heading_deg +
                        guid_head_.gaussian(0.0, sc_.guidance.heading_noise_sigma_deg));
                const double desired = los_desired_course_deg(seg, meas, sc_.guidance.los);
                last_cmd_ = heading_controller(meas_state, desired, sc_.guidance.los, sc_.hull);
                const bool was_finished = guid_.finished;
                guid_ = waypoint_switch(guid_, meas, sc_.waypoints, sc_.guidance.los);
                if (guid_.finished && !was_finished) push_event(evs, "path_complete");
            }
        }
        r.active_segment = static_cast<int>(guid_.active_segment);
        r.path_finished = guid_.finished;

        // Position report from the vessel, carried by whichever link was up
        // on the previous step (the relay counts once it is on station).
        const bool report_due =
            t - last_report_ >= sc_.tracker.report_interval_s - 1e-9 && t > 0.0;
        if (report_due && (prev_selected_ != LinkChoice::None || relay_link_up_)) {
            belief_enu_ = usv_.position;
            belief_age_ = 0.0;
            last_report_ = t;
        }
        r.gcs_belief_age_s = belief_age_;

        // Trackers slew toward their targets; compass noise enters through
        // the measured carrier heading baked into the pan command.
        const GeoPoint usv_geo = geo(usv_.position);
        const GeoPoint gcs_geo = geo(gcs_enu_);
        {
            const EnuVector target_enu = on_station_ ? hover_enu_ : belief_enu_;
            if (horizontal_norm(target_enu - gcs_enu_) > 1e-9) {
                double h = sc_.gcs.heading_deg;
                if (sc_.tracker.gcs_compass_sigma_deg > 0.0)
                    h += compass_gcs_.gaussian(0.0, sc_.tracker.gcs_compass_sigma_deg);
                const double tgt = target_pan_deg({gcs_geo, h}, geo(target_enu));
                gimbal_gcs_ = step_gimbal(gimbal_gcs_, tgt, sc_.dt);
            }
            r.gcs_pan_deg = gimbal_gcs_.pan_deg;
            const EnuVector truth_enu = on_station_ ? hover_enu_ : usv_.position;
            if (horizontal_norm(truth_enu - gcs_enu_) > 1e-9)
                r.gcs_pointing_error_deg = pointing_error_deg(
                    {gcs_geo, sc_.gcs.heading_deg}, gimbal_gcs_, geo(truth_enu));
        }
        {
            if (horizontal_norm(gcs_enu_ - usv_.position) > 1e-9) {
                double h = usv_.heading_deg;
                if (sc_.tracker.usv_compass_sigma_deg > 0.0)
                    h += compass_usv_.gaussian(0.0, sc_.tracker.usv_compass_sigma_deg);
                const double tgt = target_pan_deg({usv_geo, norm360(h)}, gcs_geo);
                gimbal_usv_ = step_gimbal(gimbal_usv_, tgt, sc_.dt);
            }
            r.usv_pan_deg = gimbal_usv_.pan_deg;
            if (horizontal_norm(gcs_enu_ - usv_.position) > 1e-9)
                r.usv_pointing_error_deg = pointing_error_deg(
                    {usv_geo, usv_.heading_deg}, gimbal_usv_, gcs_geo);
        }

        // Direct station-to-vessel links with the pointing achieved above.
        const GeoPoint gcs_ant = geo(gcs_enu_ + EnuVector{0.0, 0.0, sc_.gcs.antenna_height_m});
        const GeoPoint usv_ant =
            geo(usv_.position + EnuVector{0.0, 0.0, sc_.usv.antenna_height_m});
        {
            const RadioEndpoint tx{gcs_ant, wifi_cfg_,
                                   norm360(sc_.gcs.heading_deg + gimbal_gcs_.pan_deg)};
            const RadioEndpoint rx{usv_ant, wifi_cfg_,
                                   norm360(usv_.heading_deg + gimbal_usv_.pan_deg)};
            const double noise = sc_.radio.rssi_noise_sigma_db > 0.0
                                     ? rssi_wifi_.gaussian(0.0, sc_.radio.rssi_noise_sigma_db)
                                     : 0.0;
            r.wifi = link_rssi(tx, rx, omap_, budget_, noise);
        }
        {
            const RadioEndpoint tx{gcs_ant, lte_cfg_, 0.0};
            const RadioEndpoint rx{usv_ant, lte_cfg_, 0.0};
            const double noise = sc_.radio.rssi_noise_sigma_db > 0.0
                                     ? rssi_lte_.gaussian(0.0, sc_.radio.rssi_noise_sigma_db)
                                     : 0.0;
            r.lte = link_rssi(tx, rx, omap_, budget_, noise);
        }
        r.selected = select_interface(r.wifi, r.lte, prev_selected_, sc_.radio.failover);
        if (r.selected != prev_selected_)
            push_event(evs, std::string("link_") + to_string(r.selected));
        prev_selected_ = r.selected;

        if (relay_mission_) relay_step(t, r, evs);
        if (landing_mission_) landing_step(t, r, evs);

        if (sc_.uav.present) {
            r.uav_east = uav_pos_.east;
            r.uav_north = uav_pos_.north;
            r.uav_up = uav_pos_.up;
        }

        std::string joined;
        for (std::size_t i = 0; i < evs.size(); ++i) {
            if (i) joined += ';';
            joined += evs[i];
        }
        r.events = std::move(joined);
        return r;
    }

    void relay_step(double t, TraceRecord& r, std::vector<std::string>& evs) {
        (void)t;
        if (!planned_ && r.wifi.blocked) {
            const RadioNode gcs_node{sc_.gcs.id,
                                     geo(gcs_enu_ + EnuVector{0.0, 0.0, sc_.gcs.antenna_height_m}),
                                     {wifi_cfg_}};
            const RadioNode usv_node{
                sc_.usv.id,
                geo(usv_.position + EnuVector{0.0, 0.0, sc_.usv.antenna_height_m}),
                {omni_cfg_}};
            const RadioNode uav_node{sc_.uav.id, geo(uav_pos_), {uav_dish_cfg_, omni_cfg_}};
            plan_ = plan_relay(gcs_node, usv_node, uav_node, omap_, budget_,
                               sc_.relay.policy);
            planned_ = true;
            if (plan_.deploy) {
                hover_enu_ = geo_to_enu(sc_.origin, plan_.hover_position);
                deploying_ = true;
                push_event(evs, "relay_planned");
            }
        }
        r.relay_deployed = deploying_;
        if (on_station_) {
            const GeoPoint gcs_ant =
                geo(gcs_enu_ + EnuVector{0.0, 0.0, sc_.gcs.antenna_height_m});
            const GeoPoint uav_geo = geo(uav_pos_);
            const GeoPoint usv_ant =
                geo(usv_.position + EnuVector{0.0, 0.0, sc_.usv.antenna_height_m});
            // Uplink: station dish (its real pointing) to the aircraft dish,
            // which is assumed converged on the static station.
            const RadioEndpoint tx{gcs_ant, wifi_cfg_,
                                   norm360(sc_.gcs.heading_deg + gimbal_gcs_.pan_deg)};
            const RadioEndpoint rx{uav_geo, uav_dish_cfg_, bearing_deg(uav_geo, gcs_ant)};
            const LinkSample up = link_rssi(tx, rx, omap_, budget_);
            // Downlink: omni on both ends, unaffected by pointing.
            const RadioEndpoint dtx{uav_geo, omni_cfg_, 0.0};
            const RadioEndpoint drx{usv_ant, omni_cfg_, 0.0};
            const LinkSample down = link_rssi(dtx, drx, omap_, budget_);
            r.hop1_rssi_dbm = up.rssi_dbm;
            r.hop2_rssi_dbm = down.rssi_dbm;
            const bool both = up.connected && down.connected;
            r.relay_throughput_mbps = both ? std::min(up.throughput_mbps, down.throughput_mbps)
                                           : 0.0;
            r.relay_latency_ms =
                both ? up.latency_ms + down.latency_ms + sc_.relay.policy.forwarding_delay_ms
                     : 0.0;
            relay_link_up_ = both && r.relay_throughput_mbps > 0.0;
        }
    }

    void landing_step(double t, TraceRecord& r, std::vector<std::string>& evs) {
        // Scheduled protocol events come due before anything reads the
        // charging machine's outputs this step.
        drain_schedule(t, evs);
        if (charge_live_ && charge_.state == ChargeState::Departed) departed_ = true;

        // Once cleared off the deck the landing pattern is abandoned: the
        // lander idles in transit and does not re-arm for another approach.
        if (departed_) {
            if (machine_.stage() != LandingStage::Transit) {
                machine_ = LandingMachine(sc_.landing.stage_dwell_s);
                rf_good_s_ = 0.0;
                push_event(evs, "stage_transit");
            }
            on_deck_ = false;
            r.landing_stage = LandingStage::Transit;
            r.charge_state = ChargeState::Departed;
            return;
        }

        const EnuVector deck = deck_center(usv_);
        const EnuVector rel = uav_pos_ - deck;
        const double h = rel.up;
        const double psi = deg2rad(usv_.heading_deg);
        const double xb = rel.east * std::sin(psi) + rel.north * std::cos(psi);
        const double yb = rel.east * std::cos(psi) - rel.north * std::sin(psi);

        on_deck_ = !departed_ && h <= sc_.landing.approach.touchdown_height_m + 1e-9;

        // Synthetic sensing from true geometry.
        std::vector<double> rssi;
        rssi.reserve(sc_.landing.deck.rf_antennas.size());
        for (const auto& a : sc_.landing.deck.rf_antennas) {
            const double dx = xb - a[0];
            const double dy = yb - a[1];
            const double d = std::sqrt(dx * dx + dy * dy + h * h);
            double v = rf_range_rssi_dbm(d, sc_.landing.rf);
            if (sc_.landing.rf_noise_sigma_db > 0.0)
                v += rf_landing_.gaussian(0.0, sc_.landing.rf_noise_sigma_db);
            rssi.push_back(v);
        }
        const RfFix fix = rf_localize(rssi, sc_.landing.deck, std::max(h, 0.0), sc_.landing.rf);
        const auto lamps = led_visible({xb, yb, h}, sc_.landing.deck,
                                       sc_.landing.camera_half_angle_deg, sc_.landing.visibility_m);

        // A ranging solution must stay reliable for a full dwell before it
        // can first arm the approach; a single overfit residual at long
        // range is not a fix. Once tracking, raw per-sample reliability is
        // enough and momentary dropouts are absorbed by the loss dwell.
        rf_good_s_ = fix.reliable ? rf_good_s_ + sc_.dt : 0.0;
        const bool rf_confirmed = rf_good_s_ >= sc_.landing.stage_dwell_s - 1e-9;

        StageEvidence ev;
        ev.rf_fix = machine_.stage() == LandingStage::Transit ? rf_confirmed : fix.reliable;
        ev.lamps = lamps.size() >= 2;
        ev.ultrasonic = h <= sc_.landing.ultrasonic_max_range_m;
        ev.touchdown = on_deck_;
        ev.secured = secure_check(sc_.landing.deck_disturbance_n, charge_.magnet_engaged,
                                  sc_.landing.magnet_holding_force_n);
        const LandingStage before = machine_.stage();
        const LandingStage stage = machine_.step(ev, sc_.dt);
        if (stage != before)
            push_event(evs, std::string("stage_") + to_string(stage));

        if (stage == LandingStage::Touchdown && !charge_live_) {
            charge_live_ = true;
            double at = t;
            const ChargeTimingSection& ct = sc_.landing.charge;
            const std::pair<double, ChargeEvent> plan[] = {
                {0.0, ChargeEvent::TouchdownConfirmed},
                {ct.magnet_delay_s, ChargeEvent::MagnetOn},
                {ct.center_time_s, ChargeEvent::Centered},
                {ct.connector_time_s, ChargeEvent::ConnectorIn},
                {ct.charge_start_delay_s, ChargeEvent::ChargeStarted},
                {ct.duration_s, ChargeEvent::ChargeDone},
                {ct.connector_out_delay_s, ChargeEvent::ConnectorOut},
                {ct.demagnetize_delay_s, ChargeEvent::Demagnetized},
                {ct.takeoff_delay_s, ChargeEvent::TakeoffCleared},
            };
            for (const auto& [delay, event] : plan) {
                at += delay;
                sched_.emplace_back(at, event);
            }
            drain_schedule(t, evs);  // the confirmation itself is due immediately
        }

        r.landing_stage = stage;
        r.charge_state = charge_live_ ? charge_.state : ChargeState::Departed;
    }

    /// Fire every scheduled charging event that has come due, surfacing any
    /// protocol warning the machine raises.
    void drain_schedule(double t, std::vector<std::string>& evs) {
        while (sched_idx_ < sched_.size() && sched_[sched_idx_].first <= t + 1e-9) {
            const int warnings_before = charge_.protocol_warnings;
            charge_ = charging_step(charge_, sched_[sched_idx_].second);
            push_event(evs, to_string(sched_[sched_idx_].second));
            if (charge_.protocol_warnings > warnings_before) push_event(evs, "charge_warning");
            ++sched_idx_;
        }
    }

    /// End-of-step kinematics: aircraft first (against the pre-step deck),
    /// then the vessel, then ride-along and aging bookkeeping.
    void advance() {
        const VesselState before = usv_;
        if (sc_.uav.present) move_uav(before);
        usv_ = step(usv_, last_cmd_, sc_.environment, sc_.hull, sc_.dt);
        usv_vel_ = {(usv_.position.east - before.position.east) / sc_.dt,
                    (usv_.position.north - before.position.north) / sc_.dt, 0.0};
        if (landing_mission_ && on_deck_ && !departed_) {
            const EnuVector deck = deck_center(usv_);
            uav_pos_ = deck;  // secured or resting airframe rides the deck
        }
        if (relay_mission_ && !deploying_)
            uav_pos_ = {usv_.position.east, usv_.position.north, sc_.usv.deck_height_m};
        belief_age_ += sc_.dt;
    }

    void move_uav(const VesselState& usv_now) {
        const double dt = sc_.dt;
        if (relay_mission_) {
            if (!deploying_ || on_station_) return;
            double span = sc_.relay.transit_speed_mps * dt;
            // Climb to the hover altitude first, then close horizontally;
            // the straight-line alternative could clip the obstacle.
            const double dz = hover_enu_.up - uav_pos_.up;
            if (std::fabs(dz) > 1e-12) {
                const double mv = std::clamp(dz, -span, span);
                uav_pos_.up += mv;
                span -= std::fabs(mv);
            }
            if (span > 0.0) {
                const double de = hover_enu_.east - uav_pos_.east;
                const double dn = hover_enu_.north - uav_pos_.north;
                const double dist = std::hypot(de, dn);
                if (dist <= span) {
                    uav_pos_.east = hover_enu_.east;
                    uav_pos_.north = hover_enu_.north;
                    on_station_ = true;
                    pending_events_.push_back("relay_on_station");
                } else if (dist > 0.0) {
                    uav_pos_.east += de / dist * span;
                    uav_pos_.north += dn / dist * span;
                }
            }
            return;
        }
        if (!landing_mission_) return;
        if (on_deck_ && !departed_) return;  // motors off, ride handled after integration

        const EnuVector deck = deck_center(usv_now);
        double target_up;
        if (departed_) {
            target_up = deck.up + sc_.landing.approach.transit_altitude_m;
        } else {
            switch (machine_.stage()) {
                case LandingStage::Transit:
                    target_up = deck.up + sc_.landing.approach.transit_altitude_m;
                    break;
                case LandingStage::RfApproach:
                    target_up = deck.up + sc_.landing.approach.rf_altitude_m;
                    break;
                case LandingStage::VisualAlign:
                    target_up = deck.up + sc_.landing.approach.visual_altitude_m;
                    break;
                default:
                    target_up = deck.up;  // final descent and below: all the way down
                    break;
            }
        }
        const double dz = target_up - uav_pos_.up;
        const double vlimit = sc_.landing.approach.climb_rate_mps * dt;
        uav_pos_.up += std::clamp(dz, -vlimit, vlimit);

        // Horizontal pursuit of the moving deck with velocity feedforward.
        const double de = deck.east - uav_pos_.east;
        const double dn = deck.north - uav_pos_.north;
        const double dist = std::hypot(de, dn);
        const double hlimit = sc_.landing.approach.speed_mps * dt;
        double stepped_e = 0.0, stepped_n = 0.0;
        if (dist <= hlimit) {
            stepped_e = de;
            stepped_n = dn;
        } else if (dist > 0.0) {
            stepped_e = de / dist * hlimit;
            stepped_n = dn / dist * hlimit;
        }
        uav_pos_.east += stepped_e + usv_vel_.east * dt;
        uav_pos_.north += stepped_n + usv_vel_.north * dt;
    }

    Scenario sc_;
    NoiseStreams streams_;
    SplitMix64 compass_usv_, compass_gcs_, guid_pos_, guid_head_, rssi_wifi_, rssi_lte_,
        rf_landing_;

    ObstacleMap omap_;
    LinkBudgetConfig budget_;
    InterfaceConfig wifi_cfg_, lte_cfg_, omni_cfg_, uav_dish_cfg_;

    VesselState usv_;
    EnuVector usv_vel_;
    GuidanceState guid_;
    JetCommand last_cmd_;
    EnuVector gcs_enu_;
    GimbalState gimbal_gcs_, gimbal_usv_;
    EnuVector belief_enu_;
    double belief_age_ = 0.0;
    double last_report_ = 0.0;
    LinkChoice prev_selected_ = LinkChoice::None;
    std::vector<std::string> pending_events_;

    bool relay_mission_ = false;
    bool planned_ = false;
    bool deploying_ = false;
    bool on_station_ = false;
    bool relay_link_up_ = false;
    RelayPlan plan_;
    EnuVector hover_enu_;
    EnuVector uav_pos_;

    bool landing_mission_ = false;
    LandingMachine machine_;
    double rf_good_s_ = 0.0;
    ChargeMachine charge_;
    bool charge_live_ = false;
    bool on_deck_ = false;
    bool departed_ = false;
    std::vector<std::pair<double, ChargeEvent>> sched_;
    std::size_t sched_idx_ = 0;
};

inline SimResult run_scenario(const Scenario& sc) { return Engine(sc).run(); }

}  // namespace flotilla
