#include "satdelay/delay_model.hpp"

#include "satdelay/csv.hpp"
#include "satdelay/error.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace satdelay::delay {

void DelayBreakdown::validate() const {
    const double parts[] = {transmission_ms, uplink_ms,        downlink_ms,     isl_total_ms,
                            switching_processing_ms, buffering_ms_min, buffering_ms_max};
    for (double p : parts) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvalidArgument("delay components must be finite and non-negative");
        }
    }
    if (buffering_ms_min > buffering_ms_max) {
        throw InvalidArgument("buffering minimum exceeds maximum");
    }
    if (queuing_points < 0) {
        throw InvalidArgument("queuing points must be non-negative");
    }
}

DelayRange compose_delay(const DelayBreakdown& b) {
    b.validate();
    const double fixed_part =
        b.transmission_ms + b.uplink_ms + b.isl_total_ms + b.downlink_ms + b.switching_processing_ms;
    return {fixed_part + b.buffering_ms_min, fixed_part + b.buffering_ms_max};
}

DelayBreakdown with_queuing(DelayBreakdown base, int queuing_points, double per_point_ms) {
    if (queuing_points < 0 || !(per_point_ms >= 0.0)) {
        throw InvalidArgument("queuing points and per-point buffering must be non-negative");
    }
    base.queuing_points = queuing_points;
    base.buffering_ms_min = 0.0;
    base.buffering_ms_max = queuing_points * per_point_ms;
    return base;
}

double transmission_delay_ms(double packet_size_bytes, double data_rate_bps) {
    if (!(data_rate_bps > 0.0)) {
        throw InvalidArgument("data rate must be positive");
    }
    if (packet_size_bytes < 0.0) {
        throw InvalidArgument("packet size must be non-negative");
    }
    return packet_size_bytes * 8.0 / data_rate_bps * 1000.0;
}

double buffering_delay_bound_ms(double buffer_size_cells, double drain_rate_bps) {
    if (!(drain_rate_bps > 0.0)) {
        throw InvalidArgument("drain rate must be positive");
    }
    if (buffer_size_cells < 0.0) {
        throw InvalidArgument("buffer size must be non-negative");
    }
    return buffer_size_cells * kCellBits / drain_rate_bps * 1000.0;
}

GeoIslEntry geo_isl_entry(int n_satellites, const geometry::EarthModel& earth) {
    if (n_satellites < 2) {
        throw InvalidArgument("a GEO ring needs at least 2 satellites");
    }
    const double d = 2.0 * earth.geo_radius_km() * std::sin(std::numbers::pi / n_satellites);
    return {n_satellites, d, d / earth.speed_of_light_km_per_s * 1000.0};
}

std::vector<GeoIslEntry> geo_isl_table(int n_min, int n_max, const geometry::EarthModel& earth) {
    if (n_min < 2 || n_max < n_min) {
        throw InvalidArgument("GEO table range must satisfy 2 <= min <= max");
    }
    std::vector<GeoIslEntry> rows;
    for (int n = n_min; n <= n_max; ++n) {
        rows.push_back(geo_isl_entry(n, earth));
    }
    return rows;
}

double geo_slant_delay_ms(const geometry::GroundTerminal& terminal,
                          double sub_satellite_longitude_deg, const geometry::EarthModel& earth) {
    const double lon = sub_satellite_longitude_deg * std::numbers::pi / 180.0;
    const geometry::EciVector sat{earth.geo_radius_km() * std::cos(lon),
                                  earth.geo_radius_km() * std::sin(lon), 0.0};
    const auto ground = geometry::ground_to_eci(terminal, earth);
    return geometry::distance(ground, sat) / earth.speed_of_light_km_per_s * 1000.0;
}

std::vector<CaseStudyColumn> published_case_study() {
    auto column = [](std::string label, int satellites, double propagation_ms, int points) {
        DelayBreakdown b;
        // Only the total up+down+ISL figure is published; carry it as ISL-free
        // uplink/downlink halves so the sum is exact.
        b.uplink_ms = propagation_ms / 2.0;
        b.downlink_ms = propagation_ms / 2.0;
        return CaseStudyColumn{std::move(label), satellites, with_queuing(b, points, propagation_ms)};
    };
    // Queuing points: GEO counts the earth station only; LEO columns count the
    // earth station plus every satellite on the path.
    return {
        column("GEO", 1, 250.0, 1),
        column("6x11 LEO", 5, 60.0, 6),
        column("12x24 LEO", 10, 77.0, 11),
    };
}

void write_geo_table_csv(std::ostream& out, const std::vector<GeoIslEntry>& rows) {
    out << "n_satellites,isl_distance_km,isl_delay_ms\n";
    for (const auto& r : rows) {
        out << r.n_satellites << ',' << csv::fixed(r.isl_distance_km, 0) << ','
            << csv::fixed(r.isl_delay_ms, 2) << '\n';
    }
}

void write_case_study_csv(std::ostream& out, const std::vector<CaseStudyColumn>& columns) {
    std::vector<std::string> header{"delay"};
    for (const auto& c : columns) {
        header.push_back(c.label + " (ms)");
    }
    out << csv::join(header) << '\n';

    auto row = [&](const std::string& name, auto value) {
        std::vector<std::string> cells{name};
        for (const auto& c : columns) {
            cells.push_back(value(c));
        }
        out << csv::join(cells) << '\n';
    };
    auto ms = [](double v) { return csv::fixed(v, 2); };

    row("satellites", [](const CaseStudyColumn& c) { return std::to_string(c.satellites); });
    row("transmission", [&](const CaseStudyColumn& c) { return ms(c.breakdown.transmission_ms); });
    row("propagation (up+down+ISL)", [&](const CaseStudyColumn& c) { return ms(c.breakdown.propagation_ms()); });
    row("switching and processing", [&](const CaseStudyColumn& c) { return ms(c.breakdown.switching_processing_ms); });
    row("queuing points", [](const CaseStudyColumn& c) { return std::to_string(c.breakdown.queuing_points); });
    row("buffering min", [&](const CaseStudyColumn& c) { return ms(c.breakdown.buffering_ms_min); });
    row("buffering max", [&](const CaseStudyColumn& c) { return ms(c.breakdown.buffering_ms_max); });
    row("total min", [&](const CaseStudyColumn& c) { return ms(compose_delay(c.breakdown).min_total_ms); });
    row("total max", [&](const CaseStudyColumn& c) { return ms(compose_delay(c.breakdown).max_total_ms); });
}

}  // namespace satdelay::delay
