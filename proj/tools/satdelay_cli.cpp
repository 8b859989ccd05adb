// satdelay: satellite-ATM delay modelling and UBR buffer simulation.
#include "satdelay/delay_model.hpp"
#include "satdelay/error.hpp"
#include "satdelay/geometry.hpp"
#include "satdelay/presets.hpp"
#include "satdelay/render.hpp"
#include "satdelay/routing.hpp"
#include "satdelay/scenario_io.hpp"
#include "satdelay/ubr_sim.hpp"
#include "satdelay/csv.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <thread>

using namespace satdelay;

namespace {

struct ConstellationOptions {
    std::string preset = "6x11";
    std::optional<int> planes;
    std::optional<int> sats;
    std::optional<double> altitude_km;
    std::optional<double> inclination_deg;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--preset", preset, "Constellation preset (6x11, 12x24)");
        cmd->add_option("--planes", planes, "Number of orbit planes (overrides preset)");
        cmd->add_option("--sats", sats, "Satellites per plane (overrides preset)");
        cmd->add_option("--altitude", altitude_km, "Altitude in km (overrides preset)");
        cmd->add_option("--inclination", inclination_deg, "Inclination in degrees (overrides preset)");
    }

    geometry::Constellation build() const {
        auto cfg = presets::constellation_by_name(preset);
        if (!cfg) {
            throw InvalidArgument("unknown constellation preset '" + preset + "'");
        }
        if (planes) cfg->number_of_orbit_planes = *planes;
        if (sats) cfg->number_of_sats_per_plane = *sats;
        if (altitude_km) cfg->altitude_km = *altitude_km;
        if (inclination_deg) cfg->inclination_deg = *inclination_deg;
        return geometry::build_constellation(*cfg);
    }
};

std::vector<geometry::GroundTerminal> load_cities(const std::string& path) {
    if (path.empty()) {
        return routing::bundled_cities();
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigurationError("cannot open city file '" + path + "'");
    }
    return routing::read_cities_csv(in);
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigurationError("cannot open '" + path + "' for writing");
    }
    write(out);
}

void write_constellation_csv(std::ostream& out, const geometry::Constellation& c) {
    out << "plane,index,x_km,y_km,z_km\n";
    for (const auto id : c.ids()) {
        const auto& p = c.position(id);
        out << id.plane_index << ',' << id.in_plane_index << ',' << csv::fixed(p.x_km, 6) << ','
            << csv::fixed(p.y_km, 6) << ',' << csv::fixed(p.z_km, 6) << '\n';
    }
}

std::vector<delay::CaseStudyColumn> modelled_case_study() {
    const auto& cities = routing::bundled_cities();
    const auto& ny = routing::find_city(cities, "New York");
    const auto& paris = routing::find_city(cities, "Paris");

    std::vector<delay::CaseStudyColumn> cols;
    const double mid_lon = (ny.longitude_deg + paris.longitude_deg) / 2.0;
    delay::DelayBreakdown geo;
    geo.uplink_ms = delay::geo_slant_delay_ms(ny, mid_lon);
    geo.downlink_ms = delay::geo_slant_delay_ms(paris, mid_lon);
    cols.push_back({"GEO", 1, delay::with_queuing(geo, 1, geo.propagation_ms())});

    for (const auto& name : presets::constellation_names()) {
        const auto c = geometry::build_constellation(*presets::constellation_by_name(name));
        const auto r = routing::compute_route(c, ny, paris);
        delay::DelayBreakdown b;
        b.uplink_ms = r.uplink_delay_ms;
        b.downlink_ms = r.downlink_delay_ms;
        b.isl_total_ms = r.isl_total_ms();
        cols.push_back({name + " LEO", r.satellites_in_path(),
                        delay::with_queuing(b, r.satellites_in_path() + 1, b.propagation_ms())});
    }
    return cols;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite-ATM end-to-end delay model and TCP/UBR buffer simulator", "satdelay"};
    app.require_subcommand(1);
    std::string stage = "arguments";

    // constellation
    auto* cmd_const = app.add_subcommand("constellation", "Build a constellation and export positions as CSV");
    ConstellationOptions const_opts;
    std::string const_out;
    const_opts.add_to(cmd_const);
    cmd_const->add_option("-o,--output", const_out, "Output CSV (default stdout)");

    // render
    auto* cmd_render = app.add_subcommand("render", "Orthographic SVG of a constellation and optional route");
    ConstellationOptions render_opts;
    render::RenderView view;
    std::vector<std::string> render_route;
    std::string render_out;
    std::string render_cities;
    render_opts.add_to(cmd_render);
    cmd_render->add_option("--route", render_route, "Source and destination city")->expected(2);
    cmd_render->add_option("--cities", render_cities, "City CSV (name,lat_deg,lon_deg)");
    cmd_render->add_option("--azimuth", view.view_azimuth_deg, "View azimuth, degrees");
    cmd_render->add_option("--elevation", view.view_elevation_deg, "View elevation, degrees");
    cmd_render->add_option("--width", view.image_width_px, "Image width, px");
    cmd_render->add_option("--height", view.image_height_px, "Image height, px");
    cmd_render->add_option("-o,--output", render_out, "Output SVG (default stdout)");

    // route
    auto* cmd_route = app.add_subcommand("route", "Greedy route between two cities");
    ConstellationOptions route_opts;
    std::string route_src, route_dst, route_cities;
    route_opts.add_to(cmd_route);
    cmd_route->add_option("source", route_src, "Source city")->required();
    cmd_route->add_option("destination", route_dst, "Destination city")->required();
    cmd_route->add_option("--cities", route_cities, "City CSV (name,lat_deg,lon_deg)");

    // matrix
    auto* cmd_matrix = app.add_subcommand("matrix", "City-to-city delay and hop-count matrices");
    ConstellationOptions matrix_opts;
    std::string matrix_cities, matrix_delays, matrix_counts;
    unsigned matrix_threads = std::max(1u, std::thread::hardware_concurrency());
    matrix_opts.add_to(cmd_matrix);
    cmd_matrix->add_option("--cities", matrix_cities, "City CSV (name,lat_deg,lon_deg)");
    cmd_matrix->add_option("--delays", matrix_delays, "Delay matrix CSV (default stdout)");
    cmd_matrix->add_option("--counts", matrix_counts, "Satellite-count matrix CSV (default stdout)");
    cmd_matrix->add_option("--threads", matrix_threads, "Worker threads");

    // geo-table
    auto* cmd_geo = app.add_subcommand("geo-table", "GEO inter-satellite distances and delays");
    int geo_min = 3, geo_max = 12;
    cmd_geo->add_option("--min", geo_min, "Smallest ring size");
    cmd_geo->add_option("--max", geo_max, "Largest ring size");

    // case-study
    auto* cmd_case = app.add_subcommand("case-study", "New York to Paris delay composition");
    bool case_from_model = false;
    cmd_case->add_flag("--from-model", case_from_model,
                       "Derive propagation and hop counts from the bundled models instead of the published inputs");

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "Run one UBR scenario file");
    std::string sim_file, sim_out;
    cmd_sim->add_option("file", sim_file, "Scenario file (key = value)")->required();
    cmd_sim->add_option("-o,--output", sim_out, "Result CSV (default stdout)");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "Buffer x sources x latency grid");
    std::vector<std::string> sweep_classes{"single-LEO", "multi-LEO", "GEO"};
    std::vector<int> sweep_sources;
    std::vector<long long> sweep_buffers;
    ubr::UbrScenario sweep_base;
    unsigned sweep_threads = std::max(1u, std::thread::hardware_concurrency());
    std::string sweep_out;
    cmd_sweep->add_option("--class", sweep_classes, "Latency classes (single-LEO, multi-LEO, GEO)");
    cmd_sweep->add_option("--sources", sweep_sources,
                          "Source counts (default 15 50 100 for single-LEO, 5 15 50 otherwise)");
    cmd_sweep->add_option("--buffers", sweep_buffers, "Buffer sizes in cells (default: published list per class)");
    cmd_sweep->add_option("--duration", sweep_base.duration_s, "Simulated seconds per run");
    cmd_sweep->add_option("--warmup", sweep_base.warmup_s, "Seconds excluded from throughput");
    cmd_sweep->add_option("--seed", sweep_base.seed, "Random seed");
    cmd_sweep->add_flag("!--no-selective-drop", sweep_base.drop_policy.enabled, "Plain tail drop at the bottleneck");
    cmd_sweep->add_option("--threads", sweep_threads, "Concurrent scenarios");
    cmd_sweep->add_option("-o,--output", sweep_out, "Sweep CSV (default stdout)");

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*cmd_const) {
            stage = "constellation";
            const auto c = const_opts.build();
            emit(const_out, [&](std::ostream& o) { write_constellation_csv(o, c); });
        } else if (*cmd_render) {
            stage = "render";
            const auto c = render_opts.build();
            const auto cities = load_cities(render_cities);
            std::optional<routing::RoutePath> route;
            if (render_route.size() == 2) {
                stage = "routing";
                route = routing::compute_route(c, routing::find_city(cities, render_route[0]),
                                               routing::find_city(cities, render_route[1]));
                stage = "render";
            }
            const std::string svg = render::render_orthographic(c, route, view);
            emit(render_out, [&](std::ostream& o) { o << svg; });
        } else if (*cmd_route) {
            stage = "routing";
            const auto c = route_opts.build();
            const auto cities = load_cities(route_cities);
            const auto r = routing::compute_route(c, routing::find_city(cities, route_src),
                                                  routing::find_city(cities, route_dst));
            routing::write_route_report(std::cout, r);
        } else if (*cmd_matrix) {
            stage = "matrix";
            const auto c = matrix_opts.build();
            const auto m = routing::city_matrix(c, load_cities(matrix_cities), matrix_threads);
            emit(matrix_delays, [&](std::ostream& o) { routing::write_delay_matrix_csv(o, m); });
            if (matrix_delays.empty() && matrix_counts.empty()) {
                std::cout << '\n';
            }
            emit(matrix_counts, [&](std::ostream& o) { routing::write_count_matrix_csv(o, m); });
        } else if (*cmd_geo) {
            stage = "geo-table";
            delay::write_geo_table_csv(std::cout, delay::geo_isl_table(geo_min, geo_max));
        } else if (*cmd_case) {
            stage = "case-study";
            delay::write_case_study_csv(std::cout, case_from_model ? modelled_case_study()
                                                                   : delay::published_case_study());
        } else if (*cmd_sim) {
            stage = "scenario";
            std::ifstream in(sim_file);
            if (!in) {
                throw ConfigurationError("cannot open scenario file '" + sim_file + "'");
            }
            const auto scenario = ubr::read_scenario(in);
            stage = "simulation";
            const auto result = ubr::run_scenario(scenario);
            emit(sim_out, [&](std::ostream& o) { ubr::write_result_csv(o, result); });
        } else if (*cmd_sweep) {
            stage = "sweep";
            std::vector<ubr::SweepPoint> points;
            for (const auto& name : sweep_classes) {
                const auto cls = ubr::parse_latency_class(name);
                std::vector<int> sources = sweep_sources;
                if (sources.empty()) {
                    sources = cls == ubr::LatencyClass::SingleLeo ? std::vector<int>{15, 50, 100}
                                                                  : std::vector<int>{5, 15, 50};
                }
                std::vector<long long> buffers = sweep_buffers;
                if (buffers.empty()) {
                    for (int b : ubr::buffer_presets(cls)) buffers.push_back(b);
                }
                for (int n : sources) {
                    for (long long b : buffers) {
                        points.push_back({cls, n, b});
                    }
                }
            }
            const auto rows = ubr::run_sweep(points, sweep_base, sweep_threads);
            emit(sweep_out, [&](std::ostream& o) { ubr::write_sweep_csv(o, rows); });
        }
    } catch (const Error& e) {
        std::cerr << "satdelay: " << stage << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "satdelay: " << stage << ": unexpected failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
