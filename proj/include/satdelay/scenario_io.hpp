// Text formats for scenarios, results and parameter sweeps.
#pragma once

#include "satdelay/ubr_scenario.hpp"
#include "satdelay/ubr_sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace satdelay::ubr {

/// Flat `key = value` lines; '#' starts a comment. Keys mirror the
/// UbrScenario fields, with the drop policy flattened to
/// `selective_drop`, `r_fraction` and `z_threshold`. An optional leading
/// `preset = <latency class>` line seeds the latency and window defaults.
/// Unknown or repeated keys are rejected.
UbrScenario read_scenario(std::istream& in);
void write_scenario(std::ostream& out, const UbrScenario& scenario);

/// Per-VC rows followed by one summary section.
void write_result_csv(std::ostream& out, const SimResult& result);

struct SweepPoint {
    LatencyClass latency = LatencyClass::SingleLeo;
    int n_sources = 1;
    long long buffer_cells = 0;
};

struct SweepRow {
    SweepPoint point;
    double efficiency = 0.0;
    double fairness = 0.0;
};

/// Runs every point, `threads` at a time; rows come back in input order.
/// `base` supplies everything but latency, sources and buffer size.
std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const UbrScenario& base,
                                unsigned threads);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace satdelay::ubr
