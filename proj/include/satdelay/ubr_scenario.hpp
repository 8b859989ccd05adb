// Scenario description for TCP over an ATM UBR bottleneck.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace satdelay::ubr {

/// Simulation time in integer nanoseconds.
using Nanos = std::int64_t;

inline constexpr Nanos kNanosPerMs = 1'000'000;
inline constexpr Nanos kNanosPerSecond = 1'000'000'000;

inline constexpr int kCellBytes = 53;
inline constexpr int kCellPayloadBytes = 48;
/// TCP (20) + IP (20) + LLC (8) + AAL5 trailer (8).
inline constexpr int kFrameOverheadBytes = 56;

struct SegmentOverhead {
    int cells = 0;
    int wire_bytes = 0;
    double goodput_fraction = 0.0;
};

/// ATM-layer footprint of one full-sized TCP segment.
SegmentOverhead segment_overhead(int mss_bytes);

enum class LatencyClass { SingleLeo, MultiLeo, Geo };

std::string to_string(LatencyClass c);
/// Accepts "single-LEO", "multi-LEO", "GEO" (case-insensitive).
LatencyClass parse_latency_class(const std::string& text);

/// The published buffer sizes, in cells, for each latency class.
std::vector<int> buffer_presets(LatencyClass c);

struct SelectiveDropParams {
    bool enabled = true;
    double r_fraction = 0.9;
    double z_threshold = 0.8;
};

struct UbrScenario {
    int n_sources = 1;
    double satellite_one_way_ms = 5.0;
    double access_link_ms = 5.0;
    double link_rate_bps = 155.52e6;
    double pcr_bps = 149.7e6;
    long long buffer_size_cells = 12000;
    int mss_bytes = 9180;
    long long receiver_window_bytes = 600000;
    double timer_granularity_ms = 100.0;
    SelectiveDropParams drop_policy;
    double duration_s = 60.0;
    /// Deliveries before this instant are excluded from throughput.
    double warmup_s = 0.0;
    /// Source start times are drawn uniformly from [0, start_spread_ms).
    double start_spread_ms = 10.0;
    std::uint64_t seed = 1;

    double rtt_propagation_ms() const { return 2.0 * (2.0 * access_link_ms + satellite_one_way_ms); }

    /// Throws ConfigurationError naming the offending field.
    void validate() const;
};

/// 5 / 50 / 275 ms satellite latency with the matching receiver window.
UbrScenario preset_scenario(LatencyClass c, int n_sources, long long buffer_size_cells);

}  // namespace satdelay::ubr
