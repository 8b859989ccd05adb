// End-to-end delay composition for satellite-ATM connections.
//
// A connection's one-way delay is the sum of transmission, uplink,
// inter-satellite, downlink, switching/processing and buffering delays.
// All times here are milliseconds.
#pragma once

#include "satdelay/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace satdelay::delay {

/// Bits carried by one ATM cell on the wire.
inline constexpr int kCellBits = 53 * 8;

struct DelayBreakdown {
    double transmission_ms = 0.0;
    double uplink_ms = 0.0;
    double downlink_ms = 0.0;
    double isl_total_ms = 0.0;
    double switching_processing_ms = 0.0;
    double buffering_ms_min = 0.0;
    double buffering_ms_max = 0.0;
    int queuing_points = 0;

    double propagation_ms() const { return uplink_ms + isl_total_ms + downlink_ms; }

    /// Throws InvalidArgument on negative components or min > max.
    void validate() const;
};

struct DelayRange {
    double min_total_ms = 0.0;
    double max_total_ms = 0.0;
};

DelayRange compose_delay(const DelayBreakdown& breakdown);

/// Buffering from 0 up to `queuing_points` full buffers of `per_point_ms`.
DelayBreakdown with_queuing(DelayBreakdown base, int queuing_points, double per_point_ms);

double transmission_delay_ms(double packet_size_bytes, double data_rate_bps);

/// Upper bound on queuing delay for a buffer of ATM cells drained at a rate.
double buffering_delay_bound_ms(double buffer_size_cells, double drain_rate_bps);

struct GeoIslEntry {
    int n_satellites = 0;
    double isl_distance_km = 0.0;
    double isl_delay_ms = 0.0;
};

/// Chord between neighbours of N evenly spaced equatorial GEO satellites.
GeoIslEntry geo_isl_entry(int n_satellites, const geometry::EarthModel& earth = {});
std::vector<GeoIslEntry> geo_isl_table(int n_min, int n_max, const geometry::EarthModel& earth = {});

/// Ground terminal to a GEO satellite above the equator at the given longitude.
double geo_slant_delay_ms(const geometry::GroundTerminal& terminal,
                          double sub_satellite_longitude_deg,
                          const geometry::EarthModel& earth = {});

/// One column of the New York to Paris comparison.
struct CaseStudyColumn {
    std::string label;
    int satellites = 0;
    DelayBreakdown breakdown;
};

/// The three published columns (GEO, 6x11 LEO, 12x24 LEO). Transmission and
/// switching are negligible and carried as explicit zeros; each queuing
/// point buffers about half an RTT, i.e. one one-way propagation delay.
std::vector<CaseStudyColumn> published_case_study();

void write_geo_table_csv(std::ostream& out, const std::vector<GeoIslEntry>& rows);
void write_case_study_csv(std::ostream& out, const std::vector<CaseStudyColumn>& columns);

}  // namespace satdelay::delay
