// Constellation geometry for GEO/LEO satellite networks.
//
// All positions are a single epoch snapshot in an Earth Centered Inertial
// frame: first axis through the prime meridian, third axis through the
// north pole. Lengths are kilometres, angles are degrees at the API.
#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace satdelay::geometry {

struct EarthModel {
    double equatorial_radius_km = 6378.0;
    double speed_of_light_km_per_s = 299792.458;
    double geo_altitude_km = 35786.0;

    double geo_radius_km() const { return equatorial_radius_km + geo_altitude_km; }

    /// Throws InvalidConfig on non-positive radius or speed of light.
    void validate() const;
};

struct ConstellationConfig {
    int number_of_orbit_planes = 0;
    int number_of_sats_per_plane = 0;
    double altitude_km = 0.0;
    double inclination_deg = 0.0;

    void validate() const;
};

struct EciVector {
    double x_km = 0.0;
    double y_km = 0.0;
    double z_km = 0.0;

    double norm() const { return std::sqrt(x_km * x_km + y_km * y_km + z_km * z_km); }
    double dot(const EciVector& o) const { return x_km * o.x_km + y_km * o.y_km + z_km * o.z_km; }

    EciVector operator-(const EciVector& o) const { return {x_km - o.x_km, y_km - o.y_km, z_km - o.z_km}; }
    EciVector operator+(const EciVector& o) const { return {x_km + o.x_km, y_km + o.y_km, z_km + o.z_km}; }
    EciVector operator*(double s) const { return {x_km * s, y_km * s, z_km * s}; }
    bool operator==(const EciVector&) const = default;
};

/// 1-based (plane, in-plane) index. Ordering is lexicographic, which is
/// also the tie-break order for every nearest-neighbour query.
struct SatelliteId {
    int plane_index = 1;
    int in_plane_index = 1;

    auto operator<=>(const SatelliteId&) const = default;
};

std::string to_string(SatelliteId id);

/// Angular spacing of a constellation, degrees.
struct Spacing {
    double delta_anomaly_deg = 0.0;
    double ra_correction_deg = 0.0;
    double delta_right_ascension_deg = 0.0;
    double inter_plane_phasing_deg = 0.0;
};

struct GroundTerminal {
    std::string name;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;

    void validate() const;
};

/// Immutable snapshot of satellite positions.
class Constellation {
public:
    Constellation(ConstellationConfig config, EarthModel earth);

    const ConstellationConfig& config() const { return config_; }
    const EarthModel& earth() const { return earth_; }
    const Spacing& spacing() const { return spacing_; }
    double orbital_radius_km() const { return radius_km_; }

    int planes() const { return config_.number_of_orbit_planes; }
    int sats_per_plane() const { return config_.number_of_sats_per_plane; }
    std::size_t size() const { return positions_.size(); }

    bool contains(SatelliteId id) const;
    const EciVector& position(SatelliteId id) const;

    /// Anomaly of a satellite measured within its own orbit plane, degrees.
    double anomaly_deg(SatelliteId id) const;
    double right_ascension_deg(int plane_index) const;

    /// Unit normal of a plane's orbit (angular momentum direction).
    EciVector plane_normal(int plane_index) const;

    /// All ids in lexicographic order.
    std::vector<SatelliteId> ids() const;

private:
    std::size_t slot(SatelliteId id) const;

    ConstellationConfig config_;
    EarthModel earth_;
    Spacing spacing_;
    double radius_km_;
    std::vector<EciVector> positions_;
};

Spacing compute_spacing(const ConstellationConfig& config);

Constellation build_constellation(const ConstellationConfig& config, const EarthModel& earth = {});

/// Position of a circular-orbit point at the given in-plane anomaly, plane
/// inclination and right ascension.
EciVector orbit_point(double radius_km, double anomaly_deg, double inclination_deg,
                      double right_ascension_deg);

/// Spherical-earth conversion at the constellation epoch.
EciVector ground_to_eci(const GroundTerminal& terminal, const EarthModel& earth = {});

double distance(const EciVector& a, const EciVector& b);

SatelliteId nearest_satellite(const Constellation& constellation, const EciVector& point);

/// Satellite of `plane_index` nearest to `point`.
SatelliteId nearest_in_plane(const Constellation& constellation, int plane_index,
                             const EciVector& point);

/// Crosslink neighbours in the fixed order fore, aft, port, starboard.
/// Fore/aft are the in-plane successor/predecessor; port is the nearest
/// satellite of the next plane and starboard of the previous plane, both
/// wrapping across the seam. Duplicate ids (tiny constellations) are
/// reported once.
std::vector<SatelliteId> crosslink_neighbors(const Constellation& constellation, SatelliteId id);

}  // namespace satdelay::geometry
