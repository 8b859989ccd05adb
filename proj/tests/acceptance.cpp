// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include "satdelay/csv.hpp"
#include "satdelay/delay_model.hpp"
#include "satdelay/geometry.hpp"
#include "satdelay/presets.hpp"
#include "satdelay/routing.hpp"
#include "satdelay/scenario_io.hpp"
#include "satdelay/ubr_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace satdelay;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("AC%-2d %s  %s | %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void ac1() {
    // Published GEO ring: N, distance (km), delay (ms).
    const std::vector<std::tuple<int, double, double>> table = {
        {3, 73030, 243}, {4, 59629, 199}, {5, 49567, 165}, {6, 42164, 141}, {7, 36589, 122},
        {8, 32271, 108}, {9, 28842, 96},  {10, 26059, 87}, {11, 23758, 79}, {12, 21826, 73},
    };
    std::ostringstream out;
    delay::write_geo_table_csv(out, delay::geo_isl_table(3, 12));
    std::istringstream in(out.str());
    const auto rows = csv::read_all(in);
    bool ok = rows.size() == table.size() + 1;
    double worst_km = 0.0, worst_ms = 0.0;
    for (std::size_t k = 0; ok && k < table.size(); ++k) {
        const auto& [n, km, ms] = table[k];
        const auto& row = rows[k + 1];
        ok = ok && csv::parse_int(row[0]) == n;
        worst_km = std::max(worst_km, std::abs(csv::parse_double(row[1]) - km));
        worst_ms = std::max(worst_ms, std::abs(csv::parse_double(row[2]) - ms));
    }
    ok = ok && worst_km <= 2.0 && worst_ms <= 1.0;
    report(1, ok, "GEO ring table N=3..12", fmt("max |dkm|=%.2f (tol 2), max |dms|=%.3f (tol 1)", worst_km, worst_ms));
}

void ac2() {
    const auto c = geometry::build_constellation(presets::leo_6x11());
    const double hop_ms = geometry::distance(c.position({1, 1}), c.position({1, 2})) / 299792.458 * 1000.0;
    const double oracle = 2.0 * (6378.0 + 780.0) * std::sin(std::numbers::pi / 11.0) / 299792.458 * 1000.0;
    const bool ok = std::abs(hop_ms - 13.44) <= 0.02 && std::abs(hop_ms - oracle) < 1e-9;
    report(2, ok, "6x11 in-plane hop delay", fmt("%.4f ms (oracle %.4f, target 13.44 +/- 0.02)", hop_ms, oracle));
}

void ac3() {
    const auto c = geometry::build_constellation(presets::leo_6x11());
    const auto& cities = routing::bundled_cities();
    const auto r = routing::compute_route(c, routing::find_city(cities, "Los Angeles"),
                                          routing::find_city(cities, "London"));
    const int n = r.satellites_in_path();
    const bool ok = n >= 6 && n <= 8 && std::abs(r.total_delay_ms - 83.45) <= 0.10 * 83.45 &&
                    r.uplink_delay_ms < 9.0 && r.downlink_delay_ms < 9.0;
    report(3, ok, "LA -> London on 6x11",
           fmt("%d satellites (want 6..8), total %.2f ms (want 75.11..91.80), up %.2f ms, down %.2f ms (each < 9)",
               n, r.total_delay_ms, r.uplink_delay_ms, r.downlink_delay_ms));
}

void ac4() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = geometry::build_constellation(presets::leo_6x11());
    const auto& cities = routing::bundled_cities();
    const auto m = routing::city_matrix(c, cities, 1);
    const double elapsed = seconds_since(t0);
    auto idx = [&](const std::string& name) {
        const auto& t = routing::find_city(cities, name);
        return static_cast<std::size_t>(&t - cities.data());
    };
    auto count = [&](std::size_t a, std::size_t b) { return m.satellites_in_path[std::max(a, b)][std::min(a, b)]; };
    const std::size_t ny = idx("New York"), chi = idx("Chicago"), tor = idx("Toronto"), syd = idx("Sydney");
    const double d_ny = m.total_delay_ms[ny][ny], d_chi = m.total_delay_ms[chi][chi], d_syd = m.total_delay_ms[syd][syd];
    auto within = [](double v, double target) { return std::abs(v - target) <= 0.4 * target; };
    const bool ok = count(ny, chi) == 1 && count(ny, tor) == 1 && within(d_ny, 11) && within(d_chi, 6) &&
                    within(d_syd, 7) && elapsed < 1.0;
    report(4, ok, "6x11 city matrix spot checks",
           fmt("NY-Chicago %d, NY-Toronto %d satellites; diagonal NY %.2f, Chicago %.2f, Sydney %.2f ms "
               "(targets 11/6/7 +/- 40%%); %.3f s",
               count(ny, chi), count(ny, tor), d_ny, d_chi, d_syd, elapsed));
}

void ac5() {
    const auto o = ubr::segment_overhead(9180);
    const bool ok = o.cells == 193 && o.wire_bytes == 10229 && std::abs(o.goodput_fraction - 0.8975) <= 1e-4;
    report(5, ok, "segment overhead for MSS 9180",
           fmt("%d cells, %d bytes, goodput %.5f", o.cells, o.wire_bytes, o.goodput_fraction));
}

void ac6() {
    const double us = delay::transmission_delay_ms(9180, 155.52e6) * 1000.0;
    report(6, std::abs(us - 472.2) <= 0.5, "transmission delay 9180 B @ 155.52 Mb/s", fmt("%.3f us", us));
}

void ac7() {
    const auto cols = delay::published_case_study();
    const double want[3][2] = {{250, 500}, {60, 420}, {77, 924}};
    bool ok = cols.size() == 3;
    std::string detail;
    for (std::size_t k = 0; ok && k < 3; ++k) {
        const auto r = delay::compose_delay(cols[k].breakdown);
        ok = ok && r.min_total_ms == want[k][0] && r.max_total_ms == want[k][1];
        detail += fmt("%s(%.2f, %.2f) ", cols[k].label.c_str(), r.min_total_ms, r.max_total_ms);
    }
    report(7, ok, "case-study composition", detail);
}

void ac8() {
    ubr::UbrScenario s = ubr::preset_scenario(ubr::LatencyClass::Geo, 1, 400000);
    s.duration_s = 60.0;
    const auto full = ubr::run_scenario(s);
    s.warmup_s = 10.0;
    const auto steady = ubr::run_scenario(s);
    const double mbps = steady.per_vc_throughput_bps[0] / 1e6;
    const bool ok = std::abs(mbps - 122.0) <= 0.05 * 122.0 && steady.drops_frames == 0;
    report(8, ok, "GEO single source, window limited",
           fmt("steady %.2f Mb/s over [10 s, 60 s] (target 122 +/- 5%%), whole-run %.2f Mb/s, drops %lld",
               mbps, full.per_vc_throughput_bps[0] / 1e6, static_cast<long long>(steady.drops_frames)));
}

/// Efficiency and fairness for every point, computed once and shared.
std::map<std::pair<int, long long>, ubr::SweepRow> single_leo_grid() {
    std::vector<ubr::SweepPoint> points;
    for (int n : {15, 50, 100}) {
        for (long long b : {375LL, 6000LL, 12000LL}) {
            if (n == 100 && b == 6000) continue;
            points.push_back({ubr::LatencyClass::SingleLeo, n, b});
        }
    }
    ubr::UbrScenario base;
    base.duration_s = 60.0;
    std::map<std::pair<int, long long>, ubr::SweepRow> out;
    for (const auto& row : ubr::run_sweep(points, base, workers())) {
        out[{row.point.n_sources, row.point.buffer_cells}] = row;
    }
    return out;
}

void ac9_to_11() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = single_leo_grid();
    const double elapsed = seconds_since(t0);

    bool ok9 = true;
    std::string d9;
    for (int n : {15, 50}) {
        for (long long b : {6000LL, 12000LL}) {
            const double e = grid.at({n, b}).efficiency;
            ok9 = ok9 && e >= 0.90;
            d9 += fmt("N=%d/%lld:%.4f ", n, b, e);
        }
    }
    report(9, ok9, "single-LEO large-buffer efficiency >= 0.90", d9 + fmt("(grid %.1f s)", elapsed));

    const double e50 = grid.at({50, 375}).efficiency;
    bool ok10 = e50 < 0.5;
    std::string d10 = fmt("N=50@375: %.4f; ", e50);
    for (int n : {15, 50, 100}) {
        const double small = grid.at({n, 375}).efficiency, large = grid.at({n, 12000}).efficiency;
        ok10 = ok10 && small < large;
        d10 += fmt("N=%d %.4f<%.4f ", n, small, large);
    }
    report(10, ok10, "single-LEO small-buffer collapse", d10);

    const double f = grid.at({15, 12000}).fairness;
    report(11, f >= 0.90, "single-LEO fairness N=15, 12000 cells", fmt("%.4f", f));
}

void ac12() {
    std::vector<ubr::UbrScenario> cases;
    cases.push_back(ubr::preset_scenario(ubr::LatencyClass::SingleLeo, 50, 375));
    cases.push_back(ubr::preset_scenario(ubr::LatencyClass::MultiLeo, 15, 3125));
    cases.push_back(ubr::preset_scenario(ubr::LatencyClass::Geo, 5, 25000));
    bool ok = true;
    std::string detail;
    for (auto& s : cases) {
        s.duration_s = 60.0;
        s.seed = 7;
        std::ostringstream a, b;
        ubr::write_result_csv(a, ubr::run_scenario(s));
        ubr::write_result_csv(b, ubr::run_scenario(s));
        ok = ok && a.str() == b.str();
        detail += fmt("%.0f ms N=%d: %zu bytes %s; ", s.satellite_one_way_ms, s.n_sources, a.str().size(),
                      a.str() == b.str() ? "identical" : "DIFFER");
    }
    report(12, ok, "same seed, byte-identical result CSV", detail);
}

class PropertyObserver : public ubr::SimObserver {
public:
    explicit PropertyObserver(int n) : next_(n, 0) {}
    void on_queue(ubr::Nanos, const ubr::BottleneckQueue& q) override {
        if (q.total_occupancy_cells() > q.capacity_cells()) ++capacity;
        for (const auto& c : q.counters()) {
            if (c.arrived_cells != c.departed_cells + c.dropped_cells + c.occupancy_cells) ++conservation;
        }
    }
    void on_app_delivery(ubr::Nanos, std::uint32_t vc, ubr::SeqNo first, ubr::SeqNo last) override {
        if (first != next_[vc] || last <= first) ++order;
        next_[vc] = last;
    }
    long conservation = 0, capacity = 0, order = 0;

private:
    std::vector<ubr::SeqNo> next_;
};

void ac13() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(13);

    // Nearest satellite against brute force.
    long nearest_bad = 0;
    {
        const auto c = geometry::build_constellation(presets::leo_12x24());
        std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
        for (int i = 0; i < 1000; ++i) {
            const auto p = geometry::ground_to_eci({"p", lat(rng), lon(rng)});
            geometry::SatelliteId best{};
            double best_d = 1e300;
            for (const auto id : c.ids()) {
                const double d = geometry::distance(c.position(id), p);
                if (d < best_d) {
                    best_d = d;
                    best = id;
                }
            }
            nearest_bad += geometry::nearest_satellite(c, p) == best ? 0 : 1;
        }
    }

    // Orbital radius conservation.
    long radius_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const geometry::ConstellationConfig cfg{1 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 30),
                                                200.0 + static_cast<double>(rng() % 1800),
                                                1.0 + static_cast<double>(rng() % 90)};
        const auto c = geometry::build_constellation(cfg);
        for (const auto id : c.ids()) {
            radius_bad += std::abs(c.position(id).norm() - c.orbital_radius_km()) <= 1e-6 ? 0 : 1;
        }
    }

    // Simulator invariants.
    long conservation = 0, capacity = 0, order = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const auto cls = static_cast<ubr::LatencyClass>(rng() % 3);
        const auto presets = ubr::buffer_presets(cls);
        ubr::UbrScenario s = ubr::preset_scenario(cls, 1 + static_cast<int>(rng() % 40), presets[rng() % presets.size()]);
        s.duration_s = 5.0;
        s.drop_policy.enabled = rng() % 2 == 0;
        s.seed = rng();
        PropertyObserver obs(s.n_sources);
        ubr::run_scenario(s, &obs);
        conservation += obs.conservation;
        capacity += obs.capacity;
        order += obs.order;
    }

    const double elapsed = seconds_since(t0);
    const bool ok = nearest_bad == 0 && radius_bad == 0 && conservation == 0 && capacity == 0 && order == 0 &&
                    elapsed < 60.0;
    report(13, ok, "property suites",
           fmt("nearest mismatches %ld/1000, radius violations %ld, conservation %ld, capacity %ld, "
               "ordering %ld; %.1f s",
               nearest_bad, radius_bad, conservation, capacity, order, elapsed));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> checks = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9_to_11, ac12, ac13};
    for (const auto& check : checks) {
        try {
            check();
        } catch (const std::exception& e) {
            std::printf("error: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures;
}
