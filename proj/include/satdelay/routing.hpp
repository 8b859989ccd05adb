// Greedy geometric routing through a LEO constellation.
#pragma once

#include "satdelay/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace satdelay::routing {

using geometry::Constellation;
using geometry::GroundTerminal;
using geometry::SatelliteId;

struct RoutePath {
    GroundTerminal source;
    GroundTerminal destination;
    std::vector<SatelliteId> hops;
    double uplink_km = 0.0;
    double downlink_km = 0.0;
    std::vector<double> isl_km;
    double uplink_delay_ms = 0.0;
    double downlink_delay_ms = 0.0;
    std::vector<double> isl_delays_ms;
    double total_delay_ms = 0.0;

    int satellites_in_path() const { return static_cast<int>(hops.size()); }
    double isl_total_ms() const;
};

/// Routes from the source terminal's nearest satellite, greedily stepping to
/// the unvisited crosslink neighbour closest to the destination terminal's
/// nearest satellite. Throws RoutingFailure on a dead end.
RoutePath compute_route(const Constellation& constellation, const GroundTerminal& src,
                        const GroundTerminal& dst);

/// Lower-triangular (i >= j) city-to-city matrices; upper entries are unset.
struct CityMatrix {
    std::vector<GroundTerminal> terminals;
    std::vector<std::vector<double>> total_delay_ms;
    std::vector<std::vector<int>> satellites_in_path;
};

/// Routes run from terminal i to terminal j for every i >= j. Pairs are
/// evaluated on `threads` workers; the result does not depend on it.
CityMatrix city_matrix(const Constellation& constellation,
                       const std::vector<GroundTerminal>& terminals, unsigned threads = 1);

/// Ten-city list with standard coordinates, in table order.
const std::vector<GroundTerminal>& bundled_cities();

/// Case-insensitive lookup; throws InvalidArgument when absent.
const GroundTerminal& find_city(const std::vector<GroundTerminal>& cities, const std::string& name);

/// CSV `name,lat_deg,lon_deg`, optional header row.
std::vector<GroundTerminal> read_cities_csv(std::istream& in);
void write_cities_csv(std::ostream& out, const std::vector<GroundTerminal>& cities);

/// Matrix CSVs: city names label the header row and first column; cells
/// above the diagonal are empty.
void write_delay_matrix_csv(std::ostream& out, const CityMatrix& m);
void write_count_matrix_csv(std::ostream& out, const CityMatrix& m);

/// Human-readable hop report in the layout of a per-link delay table.
void write_route_report(std::ostream& out, const RoutePath& route);

}  // namespace satdelay::routing
