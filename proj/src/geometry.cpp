#include "satdelay/geometry.hpp"

#include "satdelay/error.hpp"

#include <limits>
#include <numbers>

namespace satdelay::geometry {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double sin_deg(double deg) { return std::sin(deg * kDegToRad); }
double cos_deg(double deg) { return std::cos(deg * kDegToRad); }

int wrap_index(int index, int count) { return ((index - 1) % count + count) % count + 1; }

}  // namespace

void EarthModel::validate() const {
    if (!(equatorial_radius_km > 0.0)) {
        throw InvalidConfig("equatorial radius must be positive");
    }
    if (!(speed_of_light_km_per_s > 0.0)) {
        throw InvalidConfig("speed of light must be positive");
    }
    if (!(geo_altitude_km >= 0.0)) {
        throw InvalidConfig("GEO altitude must be non-negative");
    }
}

void ConstellationConfig::validate() const {
    if (number_of_orbit_planes < 1) {
        throw InvalidConfig("number of orbit planes must be at least 1");
    }
    if (number_of_sats_per_plane < 1) {
        throw InvalidConfig("number of satellites per plane must be at least 1");
    }
    if (!(altitude_km > 0.0)) {
        throw InvalidConfig("altitude must be positive");
    }
    if (!(inclination_deg > 0.0 && inclination_deg <= 90.0)) {
        throw InvalidConfig("inclination must lie in (0, 90] degrees");
    }
}

void GroundTerminal::validate() const {
    if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) {
        throw InvalidArgument("terminal '" + name + "': latitude outside [-90, 90]");
    }
    if (!(longitude_deg > -180.0 && longitude_deg <= 180.0)) {
        throw InvalidArgument("terminal '" + name + "': longitude outside (-180, 180]");
    }
}

std::string to_string(SatelliteId id) {
    return "(" + std::to_string(id.plane_index) + "," + std::to_string(id.in_plane_index) + ")";
}

Spacing compute_spacing(const ConstellationConfig& config) {
    if (config.number_of_orbit_planes < 1 || config.number_of_sats_per_plane < 1) {
        throw InvalidConfig("constellation needs at least one plane and one satellite per plane");
    }
    Spacing s;
    const double complement = 90.0 - config.inclination_deg;
    s.delta_anomaly_deg = 360.0 / config.number_of_sats_per_plane;
    s.ra_correction_deg = 1.5 * complement / config.number_of_orbit_planes;
    s.delta_right_ascension_deg = 180.0 / config.number_of_orbit_planes + s.ra_correction_deg;
    s.inter_plane_phasing_deg =
        0.5 * s.delta_anomaly_deg + s.delta_right_ascension_deg * sin_deg(complement);
    return s;
}

EciVector orbit_point(double radius_km, double anomaly_deg, double inclination_deg,
                      double right_ascension_deg) {
    // Anomaly in the equatorial plane, tilt about the first axis, then
    // rotate about the polar axis.
    const double cu = cos_deg(anomaly_deg);
    const double su = sin_deg(anomaly_deg);
    const double ci = cos_deg(inclination_deg);
    const double si = sin_deg(inclination_deg);
    const double co = cos_deg(right_ascension_deg);
    const double so = sin_deg(right_ascension_deg);

    const double x = radius_km * cu;
    const double y = radius_km * su * ci;
    const double z = radius_km * su * si;
    return {x * co - y * so, x * so + y * co, z};
}

Constellation::Constellation(ConstellationConfig config, EarthModel earth)
    : config_(config), earth_(earth) {
    config_.validate();
    earth_.validate();
    spacing_ = compute_spacing(config_);
    radius_km_ = earth_.equatorial_radius_km + config_.altitude_km;

    positions_.reserve(static_cast<std::size_t>(planes()) * sats_per_plane());
    for (int p = 1; p <= planes(); ++p) {
        for (int s = 1; s <= sats_per_plane(); ++s) {
            const SatelliteId id{p, s};
            positions_.push_back(orbit_point(radius_km_, anomaly_deg(id), config_.inclination_deg,
                                             right_ascension_deg(p)));
        }
    }
}

bool Constellation::contains(SatelliteId id) const {
    return id.plane_index >= 1 && id.plane_index <= planes() && id.in_plane_index >= 1 &&
           id.in_plane_index <= sats_per_plane();
}

std::size_t Constellation::slot(SatelliteId id) const {
    if (!contains(id)) {
        throw InvalidArgument("satellite " + to_string(id) + " is not in the constellation");
    }
    return static_cast<std::size_t>(id.plane_index - 1) * sats_per_plane() +
           static_cast<std::size_t>(id.in_plane_index - 1);
}

const EciVector& Constellation::position(SatelliteId id) const { return positions_[slot(id)]; }

double Constellation::anomaly_deg(SatelliteId id) const {
    // Anomaly is applied in the negative sense about the plane normal, so the
    // in-plane index advances clockwise seen from the north side of the plane.
    return -((id.in_plane_index - 1) * spacing_.delta_anomaly_deg +
             (id.plane_index - 1) * spacing_.inter_plane_phasing_deg);
}

double Constellation::right_ascension_deg(int plane_index) const {
    return (plane_index - 1) * spacing_.delta_right_ascension_deg;
}

EciVector Constellation::plane_normal(int plane_index) const {
    const double si = sin_deg(config_.inclination_deg);
    const double ra = right_ascension_deg(plane_index);
    return {si * sin_deg(ra), -si * cos_deg(ra), cos_deg(config_.inclination_deg)};
}

std::vector<SatelliteId> Constellation::ids() const {
    std::vector<SatelliteId> out;
    out.reserve(positions_.size());
    for (int p = 1; p <= planes(); ++p) {
        for (int s = 1; s <= sats_per_plane(); ++s) {
            out.push_back({p, s});
        }
    }
    return out;
}

Constellation build_constellation(const ConstellationConfig& config, const EarthModel& earth) {
    return Constellation(config, earth);
}

EciVector ground_to_eci(const GroundTerminal& terminal, const EarthModel& earth) {
    terminal.validate();
    const double r = earth.equatorial_radius_km;
    const double clat = cos_deg(terminal.latitude_deg);
    return {r * clat * cos_deg(terminal.longitude_deg), r * clat * sin_deg(terminal.longitude_deg),
            r * sin_deg(terminal.latitude_deg)};
}

double distance(const EciVector& a, const EciVector& b) { return (a - b).norm(); }

SatelliteId nearest_in_plane(const Constellation& constellation, int plane_index,
                             const EciVector& point) {
    SatelliteId best{plane_index, 1};
    double best_d = std::numeric_limits<double>::infinity();
    for (int s = 1; s <= constellation.sats_per_plane(); ++s) {
        const SatelliteId id{plane_index, s};
        const double d = distance(constellation.position(id), point);
        // Strict comparison keeps the lowest index on ties.
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

SatelliteId nearest_satellite(const Constellation& constellation, const EciVector& point) {
    SatelliteId best{1, 1};
    double best_d = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= constellation.planes(); ++p) {
        const SatelliteId candidate = nearest_in_plane(constellation, p, point);
        const double d = distance(constellation.position(candidate), point);
        if (d < best_d) {
            best_d = d;
            best = candidate;
        }
    }
    return best;
}

std::vector<SatelliteId> crosslink_neighbors(const Constellation& constellation, SatelliteId id) {
    if (!constellation.contains(id)) {
        throw InvalidArgument("satellite " + to_string(id) + " is not in the constellation");
    }
    const int planes = constellation.planes();
    const int sats = constellation.sats_per_plane();
    const EciVector& here = constellation.position(id);

    std::vector<SatelliteId> out;
    auto push_unique = [&](SatelliteId n) {
        if (n == id) {
            return;
        }
        for (const auto& existing : out) {
            if (existing == n) {
                return;
            }
        }
        out.push_back(n);
    };

    push_unique({id.plane_index, wrap_index(id.in_plane_index + 1, sats)});
    push_unique({id.plane_index, wrap_index(id.in_plane_index - 1, sats)});
    if (planes > 1) {
        push_unique(nearest_in_plane(constellation, wrap_index(id.plane_index + 1, planes), here));
        push_unique(nearest_in_plane(constellation, wrap_index(id.plane_index - 1, planes), here));
    }
    return out;
}

}  // namespace satdelay::geometry
