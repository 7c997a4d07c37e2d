#pragma once

#include <cmath>

#include "flotilla/error.hpp"

/**
 * Geodetic and local-frame primitives.
 *
 * All positions use a spherical Earth model. Local coordinates are
 * east-north-up (ENU) metres relative to a geodetic anchor; the mapping is
 * equirectangular with the east scale taken at the mean latitude of the two
 * points, which keeps distances and bearings usable out to a few tens of
 * kilometres away from the poles. Headings and bearings are compass degrees,
 * clockwise from true north.
 */
namespace flotilla {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

/// Normalize an angle in degrees to [0, 360).
inline double norm360(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;
    return r + 0.0;  // collapse -0.0
}

/// Normalize an angle in degrees to (-180, 180]. The boundary maps to +180,
/// so wrap_signed(-540) == 180.
inline double wrap_signed(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r > 180.0) r -= 360.0;
    else if (r <= -180.0) r += 360.0;
    return r + 0.0;
}

/// Geodetic position. Latitude in [-90, 90], longitude in (-180, 180],
/// altitude in metres above the reference surface.
struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;
    double altitude = 0.0;
};

/// Local tangent-frame displacement in metres (east, north, up).
struct EnuVector {
    double east = 0.0;
    double north = 0.0;
    double up = 0.0;
};

inline EnuVector operator+(const EnuVector& a, const EnuVector& b) {
    return {a.east + b.east, a.north + b.north, a.up + b.up};
}
inline EnuVector operator-(const EnuVector& a, const EnuVector& b) {
    return {a.east - b.east, a.north - b.north, a.up - b.up};
}
inline EnuVector operator*(double s, const EnuVector& v) {
    return {s * v.east, s * v.north, s * v.up};
}

inline double horizontal_norm(const EnuVector& v) {
    return std::hypot(v.east, v.north);
}
inline double norm3d(const EnuVector& v) {
    return std::sqrt(v.east * v.east + v.north * v.north + v.up * v.up);
}

/// Position plus compass heading, e.g. an antenna carrier.
struct GeoPose {
    GeoPoint position;
    double heading_deg = 0.0;
};

inline void validate(const GeoPoint& p) {
    if (!(p.latitude >= -90.0 && p.latitude <= 90.0))
        throw Error("latitude out of range");
    if (!(p.longitude > -180.0 && p.longitude <= 180.0))
        throw Error("longitude out of range");
    if (!std::isfinite(p.altitude))
        throw Error("altitude not finite");
}

/// Wrap a longitude in degrees into (-180, 180].
inline double wrap_longitude(double lon) { return wrap_signed(lon); }

/// Project a geodetic point into the ENU frame anchored at `origin`.
inline EnuVector geo_to_enu(const GeoPoint& origin, const GeoPoint& p) {
    validate(origin);
    validate(p);
    const double phi0 = deg2rad(origin.latitude);
    const double phi1 = deg2rad(p.latitude);
    const double dlon = deg2rad(wrap_signed(p.longitude - origin.longitude));
    const double phim = 0.5 * (phi0 + phi1);
    return {kEarthRadiusM * std::cos(phim) * dlon,
            kEarthRadiusM * (phi1 - phi0),
            p.altitude - origin.altitude};
}

/// Inverse of geo_to_enu for the same origin.
inline GeoPoint enu_to_geo(const GeoPoint& origin, const EnuVector& v) {
    validate(origin);
    const double phi0 = deg2rad(origin.latitude);
    const double phi1 = phi0 + v.north / kEarthRadiusM;
    const double phim = 0.5 * (phi0 + phi1);
    const double lon = origin.longitude + rad2deg(v.east / (kEarthRadiusM * std::cos(phim)));
    GeoPoint out{rad2deg(phi1), wrap_longitude(lon), origin.altitude + v.up};
    validate(out);
    return out;
}

/// Compass bearing from `origin` to `target`, computed in the local ENU
/// frame. Throws if the two points coincide horizontally.
inline double bearing_deg(const GeoPoint& origin, const GeoPoint& target) {
    const EnuVector d = geo_to_enu(origin, target);
    if (d.east == 0.0 && d.north == 0.0)
        throw Error("undefined bearing: coincident positions");
    return norm360(rad2deg(std::atan2(d.east, d.north)));
}

/// Straight-line distance between two points through the local frame.
inline double distance_m(const GeoPoint& a, const GeoPoint& b) {
    return norm3d(geo_to_enu(a, b));
}

}  // namespace flotilla
