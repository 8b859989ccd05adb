#include "satdelay/routing.hpp"

#include "satdelay/csv.hpp"
#include "satdelay/error.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

namespace satdelay::routing {

using geometry::distance;
using geometry::EciVector;

double RoutePath::isl_total_ms() const {
    return std::accumulate(isl_delays_ms.begin(), isl_delays_ms.end(), 0.0);
}

RoutePath compute_route(const Constellation& constellation, const GroundTerminal& src,
                        const GroundTerminal& dst) {
    const auto& earth = constellation.earth();
    const double ms_per_km = 1000.0 / earth.speed_of_light_km_per_s;
    const EciVector src_pos = geometry::ground_to_eci(src, earth);
    const EciVector dst_pos = geometry::ground_to_eci(dst, earth);

    const SatelliteId first = geometry::nearest_satellite(constellation, src_pos);
    const SatelliteId last = geometry::nearest_satellite(constellation, dst_pos);
    const EciVector& target = constellation.position(last);

    RoutePath route;
    route.source = src;
    route.destination = dst;
    route.hops.push_back(first);

    std::set<SatelliteId> visited{first};
    SatelliteId current = first;
    while (current != last) {
        std::optional<SatelliteId> next;
        double best = std::numeric_limits<double>::infinity();
        for (const SatelliteId candidate : geometry::crosslink_neighbors(constellation, current)) {
            if (visited.contains(candidate)) {
                continue;
            }
            const double d = distance(constellation.position(candidate), target);
            if (d < best) {
                best = d;
                next = candidate;
            }
        }
        if (!next) {
            throw RoutingFailure("route " + src.name + " -> " + dst.name + " stuck at satellite " +
                                 geometry::to_string(current) +
                                 ": every crosslink neighbour already visited");
        }
        const double hop_km = distance(constellation.position(current), constellation.position(*next));
        route.isl_km.push_back(hop_km);
        route.isl_delays_ms.push_back(hop_km * ms_per_km);
        route.hops.push_back(*next);
        visited.insert(*next);
        current = *next;
    }

    route.uplink_km = distance(src_pos, constellation.position(first));
    route.downlink_km = distance(constellation.position(last), dst_pos);
    route.uplink_delay_ms = route.uplink_km * ms_per_km;
    route.downlink_delay_ms = route.downlink_km * ms_per_km;
    route.total_delay_ms = route.uplink_delay_ms + route.isl_total_ms() + route.downlink_delay_ms;
    return route;
}

CityMatrix city_matrix(const Constellation& constellation,
                       const std::vector<GroundTerminal>& terminals, unsigned threads) {
    if (terminals.empty()) {
        throw InvalidArgument("city matrix needs at least one terminal");
    }
    const std::size_t n = terminals.size();
    CityMatrix m;
    m.terminals = terminals;
    m.total_delay_ms.assign(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
    m.satellites_in_path.assign(n, std::vector<int>(n, 0));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            pairs.emplace_back(i, j);
        }
    }

    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::size_t error_index = pairs.size();
    std::string error_message;

    auto worker = [&] {
        for (std::size_t k = cursor++; k < pairs.size(); k = cursor++) {
            const auto [i, j] = pairs[k];
            try {
                const RoutePath r = compute_route(constellation, terminals[i], terminals[j]);
                m.total_delay_ms[i][j] = r.total_delay_ms;
                m.satellites_in_path[i][j] = r.satellites_in_path();
            } catch (const RoutingFailure& e) {
                std::lock_guard lock(error_mutex);
                // Report the first failing pair in table order.
                if (k < error_index) {
                    error_index = k;
                    error_message = std::string("pair (") + terminals[i].name + ", " +
                                    terminals[j].name + "): " + e.what();
                }
            }
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error_index != pairs.size()) {
        throw RoutingFailure(error_message);
    }
    return m;
}

const std::vector<GroundTerminal>& bundled_cities() {
    static const std::vector<GroundTerminal> cities = {
        {"New York", 40.71, -74.01},   {"Tokyo", 35.68, 139.69},      {"Paris", 48.86, 2.35},
        {"London", 51.51, -0.13},      {"Seoul", 37.57, 126.98},      {"Los Angeles", 34.05, -118.24},
        {"Toronto", 43.65, -79.38},    {"Mexico City", 19.43, -99.13}, {"Sydney", -33.87, 151.21},
        {"Chicago", 41.88, -87.63},
    };
    return cities;
}

namespace {
std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}
}  // namespace

const GroundTerminal& find_city(const std::vector<GroundTerminal>& cities, const std::string& name) {
    const std::string key = lower(name);
    for (const auto& c : cities) {
        if (lower(c.name) == key) {
            return c;
        }
    }
    throw InvalidArgument("unknown city '" + name + "'");
}

std::vector<GroundTerminal> read_cities_csv(std::istream& in) {
    std::vector<GroundTerminal> out;
    const auto rows = csv::read_all(in);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.empty() && lower(csv::trim(row[0])) == "name") {
            continue;
        }
        if (row.size() != 3) {
            throw ConfigurationError("city CSV line " + std::to_string(r + 1) +
                                     ": expected name,lat_deg,lon_deg");
        }
        GroundTerminal t{csv::trim(row[0]), csv::parse_double(row[1]), csv::parse_double(row[2])};
        try {
            t.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigurationError("city CSV line " + std::to_string(r + 1) + ": " + e.what());
        }
        out.push_back(std::move(t));
    }
    if (out.empty()) {
        throw ConfigurationError("city CSV contains no cities");
    }
    return out;
}

void write_cities_csv(std::ostream& out, const std::vector<GroundTerminal>& cities) {
    out << "name,lat_deg,lon_deg\n";
    for (const auto& c : cities) {
        out << csv::join({c.name, csv::fixed(c.latitude_deg, 6), csv::fixed(c.longitude_deg, 6)})
            << '\n';
    }
}

namespace {

template <typename Cell>
void write_matrix(std::ostream& out, const CityMatrix& m, Cell cell) {
    std::vector<std::string> header{""};
    for (const auto& t : m.terminals) {
        header.push_back(t.name);
    }
    out << csv::join(header) << '\n';
    for (std::size_t i = 0; i < m.terminals.size(); ++i) {
        std::vector<std::string> row{m.terminals[i].name};
        for (std::size_t j = 0; j < m.terminals.size(); ++j) {
            row.push_back(j <= i ? cell(i, j) : std::string{});
        }
        out << csv::join(row) << '\n';
    }
}

}  // namespace

void write_delay_matrix_csv(std::ostream& out, const CityMatrix& m) {
    write_matrix(out, m, [&](std::size_t i, std::size_t j) { return csv::fixed(m.total_delay_ms[i][j], 2); });
}

void write_count_matrix_csv(std::ostream& out, const CityMatrix& m) {
    write_matrix(out, m, [&](std::size_t i, std::size_t j) { return std::to_string(m.satellites_in_path[i][j]); });
}

void write_route_report(std::ostream& out, const RoutePath& route) {
    out << "Source," << csv::field(route.source.name) << '\n';
    out << "Destination," << csv::field(route.destination.name) << '\n';
    out << "Satellites In Path," << route.satellites_in_path() << '\n';
    out << "Path,";
    for (std::size_t i = 0; i < route.hops.size(); ++i) {
        out << (i ? " " : "") << geometry::to_string(route.hops[i]);
    }
    out << '\n';
    out << "Link,Distance (km),Delay (ms)\n";
    out << "Uplink," << csv::fixed(route.uplink_km, 1) << ',' << csv::fixed(route.uplink_delay_ms, 2) << '\n';
    for (std::size_t i = 0; i < route.isl_delays_ms.size(); ++i) {
        out << "ISL " << (i + 1) << ',' << csv::fixed(route.isl_km[i], 1) << ','
            << csv::fixed(route.isl_delays_ms[i], 2) << '\n';
    }
    out << "Downlink," << csv::fixed(route.downlink_km, 1) << ','
        << csv::fixed(route.downlink_delay_ms, 2) << '\n';
    out << "Total Prop. Delay,," << csv::fixed(route.total_delay_ms, 2) << '\n';
}

}  // namespace satdelay::routing
