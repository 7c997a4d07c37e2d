#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"

/**
 * Staged landing of a multirotor on a small moving deck, and the charging
 * handshake that follows touchdown.
 *
 * The approach degrades gracefully: radio ranging gets the aircraft over the
 * deck, upward-shining coloured lamps take over inside visual range, and an
 * ultrasonic altimeter drives the last metres. Each stage advances when the
 * next sensor comes good and falls back one stage when its own evidence has
 * been gone longer than a dwell, so a lost camera never aborts straight to
 * a ballistic state. After touchdown a permanent-magnet gripper secures the
 * airframe before the charging connector is allowed to move.
 */
namespace flotilla {

enum class LandingStage { Transit, RfApproach, VisualAlign, FinalDescent, Touchdown, Secured };

inline const char* to_string(LandingStage s) {
    switch (s) {
        case LandingStage::Transit: return "transit";
        case LandingStage::RfApproach: return "rf_approach";
        case LandingStage::VisualAlign: return "visual_align";
        case LandingStage::FinalDescent: return "final_descent";
        case LandingStage::Touchdown: return "touchdown";
        case LandingStage::Secured: return "secured";
    }
    return "?";
}

enum class ChargeState {
    LandedUnsecured,
    MagnetEngaged,
    Centered,
    ConnectorEngaged,
    Charging,
    ChargeComplete,
    ConnectorRetracted,
    ReadyForTakeoff,
    Departed,
};

inline const char* to_string(ChargeState s) {
    switch (s) {
        case ChargeState::LandedUnsecured: return "landed_unsecured";
        case ChargeState::MagnetEngaged: return "magnet_engaged";
        case ChargeState::Centered: return "centered";
        case ChargeState::ConnectorEngaged: return "connector_engaged";
        case ChargeState::Charging: return "charging";
        case ChargeState::ChargeComplete: return "charge_complete";
        case ChargeState::ConnectorRetracted: return "connector_retracted";
        case ChargeState::ReadyForTakeoff: return "ready_for_takeoff";
        case ChargeState::Departed: return "departed";
    }
    return "?";
}

enum class LampColor { Red, Green, Blue };

/// Deck-frame instrumentation: ranging antennas, coloured lamps and the
/// platform centre, all in metres on the deck plane.
struct DeckSensorSuite {
    std::vector<std::array<double, 2>> rf_antennas;
    struct Lamp {
        LampColor color;
        std::array<double, 2> position;
    };
    std::vector<Lamp> lamps;
    std::array<double, 2> platform_center{0.0, 0.0};
};

/// Propagation model used to invert RSSI readings into ranges.
struct RfRangingModel {
    double ref_power_dbm = -40.0;  // received power at one metre
    double exponent = 2.0;
    double residual_threshold_m = 1.0;
};

struct RfFix {
    std::array<double, 2> position{0.0, 0.0};  // deck frame
    double rms_residual_m = 0.0;
    bool reliable = false;
};

/// Expected reading at 3D range `d` under the ranging model.
inline double rf_range_rssi_dbm(double d, const RfRangingModel& m) {
    return m.ref_power_dbm - 10.0 * m.exponent * std::log10(std::max(d, 0.1));
}

namespace detail {

inline bool antennas_collinear(const std::vector<std::array<double, 2>>& a) {
    for (std::size_t i = 0; i + 2 < a.size(); ++i)
        for (std::size_t j = i + 1; j + 1 < a.size(); ++j)
            for (std::size_t k = j + 1; k < a.size(); ++k) {
                const double area = (a[j][0] - a[i][0]) * (a[k][1] - a[i][1]) -
                                    (a[k][0] - a[i][0]) * (a[j][1] - a[i][1]);
                if (std::fabs(area) > 1e-9) return false;
            }
    return true;
}

}  // namespace detail

/**
 * Estimate the aircraft's horizontal deck-frame position from per-antenna
 * RSSI readings at a known height. Each reading inverts to a range, then a
 * damped Gauss-Newton least squares starts from the antenna centroid.
 * Throws on fewer than three readings or a collinear array.
 */
inline RfFix rf_localize(const std::vector<double>& rssi_dbm, const DeckSensorSuite& suite,
                         double height_m, const RfRangingModel& model) {
    const auto& ants = suite.rf_antennas;
    if (rssi_dbm.size() < 3 || ants.size() < 3 || rssi_dbm.size() != ants.size())
        throw Error("insufficient observations for localization");
    if (detail::antennas_collinear(ants))
        throw Error("degenerate antenna geometry");

    std::vector<double> range(rssi_dbm.size());
    for (std::size_t i = 0; i < rssi_dbm.size(); ++i)
        range[i] = std::pow(10.0, (model.ref_power_dbm - rssi_dbm[i]) / (10.0 * model.exponent));

    double x = 0.0, y = 0.0;
    for (const auto& a : ants) {
        x += a[0];
        y += a[1];
    }
    x /= static_cast<double>(ants.size());
    y /= static_cast<double>(ants.size());

    const double lambda = 1e-6;  // Levenberg damping keeps the 2x2 solve well posed
    for (int iter = 0; iter < 60; ++iter) {
        double jtj00 = lambda, jtj01 = 0.0, jtj11 = lambda;
        double jtr0 = 0.0, jtr1 = 0.0;
        for (std::size_t i = 0; i < ants.size(); ++i) {
            const double dx = x - ants[i][0];
            const double dy = y - ants[i][1];
            const double pred = std::sqrt(dx * dx + dy * dy + height_m * height_m);
            const double r = pred - range[i];
            const double jx = dx / std::max(pred, 1e-9);
            const double jy = dy / std::max(pred, 1e-9);
            jtj00 += jx * jx;
            jtj01 += jx * jy;
            jtj11 += jy * jy;
            jtr0 += jx * r;
            jtr1 += jy * r;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        const double sx = (jtj11 * jtr0 - jtj01 * jtr1) / det;
        const double sy = (jtj00 * jtr1 - jtj01 * jtr0) / det;
        x -= sx;
        y -= sy;
        if (std::fabs(sx) < 1e-10 && std::fabs(sy) < 1e-10) break;
    }

    double ss = 0.0;
    for (std::size_t i = 0; i < ants.size(); ++i) {
        const double dx = x - ants[i][0];
        const double dy = y - ants[i][1];
        const double r = std::sqrt(dx * dx + dy * dy + height_m * height_m) - range[i];
        ss += r * r;
    }
    RfFix fix;
    fix.position = {x, y};
    fix.rms_residual_m = std::sqrt(ss / static_cast<double>(ants.size()));
    fix.reliable = fix.rms_residual_m <= model.residual_threshold_m;
    return fix;
}

/**
 * Which lamps the down-facing camera can resolve from `uav_deck` (deck-frame
 * position, z = height above the deck plane). A lamp is visible when it lies
 * inside the camera cone and within the optical visibility range.
 */
inline std::vector<LampColor> led_visible(const std::array<double, 3>& uav_deck,
                                          const DeckSensorSuite& suite,
                                          double camera_half_angle_deg, double visibility_m) {
    std::vector<LampColor> out;
    const double z = uav_deck[2];
    if (z <= 0.0) return out;
    const double tan_half = std::tan(deg2rad(camera_half_angle_deg));
    for (const auto& lamp : suite.lamps) {
        const double dx = lamp.position[0] - uav_deck[0];
        const double dy = lamp.position[1] - uav_deck[1];
        const double horiz = std::hypot(dx, dy);
        const double slant = std::sqrt(horiz * horiz + z * z);
        if (slant <= visibility_m && horiz <= z * tan_half) out.push_back(lamp.color);
    }
    return out;
}

/// Deck-frame yaw recovered from lamp colours: each identified lamp pairs a
/// known deck bearing with an observed body bearing. Needs two or more lamps.
inline double deck_yaw_from_lamps(const std::array<double, 2>& uav_xy,
                                  const std::vector<DeckSensorSuite::Lamp>& seen_deck,
                                  const std::vector<double>& body_bearings_deg) {
    if (seen_deck.size() < 2 || seen_deck.size() != body_bearings_deg.size())
        throw Error("need at least two identified lamps");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < seen_deck.size(); ++i) {
        const double deck_bearing = rad2deg(std::atan2(seen_deck[i].position[0] - uav_xy[0],
                                                       seen_deck[i].position[1] - uav_xy[1]));
        const double yaw = deg2rad(deck_bearing - body_bearings_deg[i]);
        sx += std::cos(yaw);
        sy += std::sin(yaw);
    }
    return wrap_signed(rad2deg(std::atan2(sy, sx)));
}

/// True when the magnet can hold the airframe against `force_n` of
/// disturbance. The margin is strict: force equal to the rating fails.
inline bool secure_check(double force_n, bool magnet_engaged, double holding_force_n) {
    return magnet_engaged && force_n < holding_force_n;
}

/// Sensor evidence consumed by the stage machine each step.
struct StageEvidence {
    bool rf_fix = false;      // ranging solution available and reliable
    bool lamps = false;       // two or more lamps identified
    bool ultrasonic = false;  // altimeter inside its working band
    bool touchdown = false;   // gear contact confirmed
    bool secured = false;     // magnet engaged and holding
};

namespace detail {

inline bool stage_holds(LandingStage s, const StageEvidence& ev) {
    switch (s) {
        case LandingStage::Transit: return true;
        case LandingStage::RfApproach: return ev.rf_fix;
        case LandingStage::VisualAlign: return ev.lamps;
        case LandingStage::FinalDescent: return ev.ultrasonic;
        case LandingStage::Touchdown: return ev.touchdown;
        case LandingStage::Secured: return ev.secured;
    }
    return true;
}

inline bool stage_advances(LandingStage s, const StageEvidence& ev) {
    switch (s) {
        case LandingStage::Transit: return ev.rf_fix;
        case LandingStage::RfApproach: return ev.lamps;
        case LandingStage::VisualAlign: return ev.ultrasonic;
        case LandingStage::FinalDescent: return ev.touchdown;
        case LandingStage::Touchdown: return ev.secured;
        case LandingStage::Secured: return false;
    }
    return false;
}

}  // namespace detail

/**
 * One decision of the stage graph: forward one stage when the next stage's
 * enabling evidence is present, backward one stage when the current stage's
 * own evidence has been lost past the dwell. Never moves more than one
 * stage, never drops below Transit.
 */
inline LandingStage stage_transition(LandingStage s, const StageEvidence& ev,
                                     bool loss_dwell_expired) {
    if (detail::stage_advances(s, ev))
        return static_cast<LandingStage>(static_cast<int>(s) + 1);
    if (!detail::stage_holds(s, ev) && loss_dwell_expired && s != LandingStage::Transit)
        return static_cast<LandingStage>(static_cast<int>(s) - 1);
    return s;
}

/// Stage machine with the dwell timer attached.
class LandingMachine {
public:
    explicit LandingMachine(double dwell_s = 2.0) : dwell_s_(dwell_s) {}

    LandingStage step(const StageEvidence& ev, double dt) {
        const bool holds = detail::stage_holds(stage_, ev);
        loss_timer_ = holds ? 0.0 : loss_timer_ + dt;
        // The tolerance keeps accumulated dt sums that land on the dwell
        // boundary from counting as past it.
        const bool expired = loss_timer_ > dwell_s_ + 1e-9;
        const LandingStage next = stage_transition(stage_, ev, expired);
        if (next != stage_) loss_timer_ = 0.0;
        stage_ = next;
        return stage_;
    }

    LandingStage stage() const { return stage_; }

private:
    double dwell_s_;
    double loss_timer_ = 0.0;
    LandingStage stage_ = LandingStage::Transit;
};

enum class ChargeEvent {
    TouchdownConfirmed,
    MagnetOn,
    Centered,
    ConnectorIn,
    ChargeStarted,
    ChargeDone,
    ConnectorOut,
    Demagnetized,
    TakeoffCleared,
};

inline const char* to_string(ChargeEvent e) {
    switch (e) {
        case ChargeEvent::TouchdownConfirmed: return "touchdown_confirmed";
        case ChargeEvent::MagnetOn: return "magnet_on";
        case ChargeEvent::Centered: return "centered";
        case ChargeEvent::ConnectorIn: return "connector_in";
        case ChargeEvent::ChargeStarted: return "charge_started";
        case ChargeEvent::ChargeDone: return "charge_done";
        case ChargeEvent::ConnectorOut: return "connector_out";
        case ChargeEvent::Demagnetized: return "demagnetized";
        case ChargeEvent::TakeoffCleared: return "takeoff_cleared";
    }
    return "?";
}

/// Charging handshake state plus the two safety latches the protocol cares
/// about. Motors go off when touchdown is confirmed and must be off before
/// the connector may move; the magnet engages before anything else and only
/// releases right before takeoff clearance.
struct ChargeMachine {
    ChargeState state = ChargeState::LandedUnsecured;
    bool motors_off = false;
    bool magnet_engaged = false;
    int protocol_warnings = 0;
};

/**
 * Feed one event to the charging protocol. The chain only ever advances one
 * state at a time on its matching event; any event that does not match the
 * current state is ignored with a protocol warning. A takeoff clearance
 * before the connector has retracted is the one hard failure.
 */
inline ChargeMachine charging_step(ChargeMachine m, ChargeEvent e) {
    using CS = ChargeState;
    using CE = ChargeEvent;

    if (e == CE::TakeoffCleared && static_cast<int>(m.state) < static_cast<int>(CS::ConnectorRetracted))
        throw Error("unsafe takeoff blocked");

    switch (m.state) {
        case CS::LandedUnsecured:
            if (e == CE::TouchdownConfirmed) {
                m.motors_off = true;
                return m;
            }
            if (e == CE::MagnetOn) {
                m.state = CS::MagnetEngaged;
                m.magnet_engaged = true;
                return m;
            }
            break;
        case CS::MagnetEngaged:
            if (e == CE::Centered) {
                m.state = CS::Centered;
                return m;
            }
            break;
        case CS::Centered:
            if (e == CE::ConnectorIn) {
                if (!m.motors_off) break;  // connector stays put while motors can spin
                m.state = CS::ConnectorEngaged;
                return m;
            }
            break;
        case CS::ConnectorEngaged:
            if (e == CE::ChargeStarted) {
                m.state = CS::Charging;
                return m;
            }
            break;
        case CS::Charging:
            if (e == CE::ChargeDone) {
                m.state = CS::ChargeComplete;
                return m;
            }
            break;
        case CS::ChargeComplete:
            if (e == CE::ConnectorOut) {
                m.state = CS::ConnectorRetracted;
                return m;
            }
            break;
        case CS::ConnectorRetracted:
            if (e == CE::Demagnetized) {
                m.state = CS::ReadyForTakeoff;
                m.magnet_engaged = false;
                return m;
            }
            break;
        case CS::ReadyForTakeoff:
            if (e == CE::TakeoffCleared) {
                m.state = CS::Departed;
                return m;
            }
            break;
        case CS::Departed:
            break;
    }
    m.protocol_warnings += 1;
    return m;
}

}  // namespace flotilla
