#include "satdelay/scenario_io.hpp"

#include "satdelay/csv.hpp"
#include "satdelay/error.hpp"

#include <atomic>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace satdelay::ubr {
namespace {

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigurationError("scenario key '" + key + "': expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(UbrScenario&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    auto num = [](double UbrScenario::*field) {
        return Setter([field](UbrScenario& s, const std::string& v) { s.*field = csv::parse_double(v); });
    };
    static const std::map<std::string, Setter> table = {
        {"n_sources", [](UbrScenario& s, const std::string& v) { s.n_sources = static_cast<int>(csv::parse_int(v)); }},
        {"satellite_one_way_ms", num(&UbrScenario::satellite_one_way_ms)},
        {"access_link_ms", num(&UbrScenario::access_link_ms)},
        {"link_rate_bps", num(&UbrScenario::link_rate_bps)},
        {"pcr_bps", num(&UbrScenario::pcr_bps)},
        {"buffer_size_cells", [](UbrScenario& s, const std::string& v) { s.buffer_size_cells = csv::parse_int(v); }},
        {"mss_bytes", [](UbrScenario& s, const std::string& v) { s.mss_bytes = static_cast<int>(csv::parse_int(v)); }},
        {"receiver_window_bytes", [](UbrScenario& s, const std::string& v) { s.receiver_window_bytes = csv::parse_int(v); }},
        {"timer_granularity_ms", num(&UbrScenario::timer_granularity_ms)},
        {"selective_drop", [](UbrScenario& s, const std::string& v) { s.drop_policy.enabled = parse_bool("selective_drop", v); }},
        {"r_fraction", [](UbrScenario& s, const std::string& v) { s.drop_policy.r_fraction = csv::parse_double(v); }},
        {"z_threshold", [](UbrScenario& s, const std::string& v) { s.drop_policy.z_threshold = csv::parse_double(v); }},
        {"duration_s", num(&UbrScenario::duration_s)},
        {"warmup_s", num(&UbrScenario::warmup_s)},
        {"start_spread_ms", num(&UbrScenario::start_spread_ms)},
        {"seed", [](UbrScenario& s, const std::string& v) {
             const long long seed = csv::parse_int(v);
             if (seed < 0) throw ConfigurationError("seed must be non-negative");
             s.seed = static_cast<std::uint64_t>(seed);
         }},
    };
    return table;
}

}  // namespace

UbrScenario read_scenario(std::istream& in) {
    UbrScenario s;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    bool any_field = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string trimmed = csv::trim(line);
        if (trimmed.empty() || trimmed == "\r") {
            continue;
        }
        const auto eq = trimmed.find('=');
        const std::string where = "scenario line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) {
            throw ConfigurationError(where + "expected key = value");
        }
        const std::string key = csv::trim(trimmed.substr(0, eq));
        std::string value = csv::trim(trimmed.substr(eq + 1));
        if (!value.empty() && value.back() == '\r') {
            value.pop_back();
        }
        if (!seen.insert(key).second) {
            throw ConfigurationError(where + "duplicate key '" + key + "'");
        }
        try {
            if (key == "preset") {
                if (any_field) {
                    throw ConfigurationError("'preset' must precede other keys");
                }
                const UbrScenario p = preset_scenario(parse_latency_class(value), s.n_sources, s.buffer_size_cells);
                s.satellite_one_way_ms = p.satellite_one_way_ms;
                s.receiver_window_bytes = p.receiver_window_bytes;
                continue;
            }
            const auto it = setters().find(key);
            if (it == setters().end()) {
                throw ConfigurationError("unknown key '" + key + "'");
            }
            it->second(s, value);
            any_field = true;
        } catch (const Error& e) {
            throw ConfigurationError(where + e.what());
        }
    }
    s.validate();
    return s;
}

void write_scenario(std::ostream& out, const UbrScenario& s) {
    out << "n_sources = " << s.n_sources << '\n'
        << "satellite_one_way_ms = " << csv::fixed(s.satellite_one_way_ms, 6) << '\n'
        << "access_link_ms = " << csv::fixed(s.access_link_ms, 6) << '\n'
        << "link_rate_bps = " << csv::fixed(s.link_rate_bps, 0) << '\n'
        << "pcr_bps = " << csv::fixed(s.pcr_bps, 0) << '\n'
        << "buffer_size_cells = " << s.buffer_size_cells << '\n'
        << "mss_bytes = " << s.mss_bytes << '\n'
        << "receiver_window_bytes = " << s.receiver_window_bytes << '\n'
        << "timer_granularity_ms = " << csv::fixed(s.timer_granularity_ms, 6) << '\n'
        << "selective_drop = " << (s.drop_policy.enabled ? "true" : "false") << '\n'
        << "r_fraction = " << csv::fixed(s.drop_policy.r_fraction, 6) << '\n'
        << "z_threshold = " << csv::fixed(s.drop_policy.z_threshold, 6) << '\n'
        << "duration_s = " << csv::fixed(s.duration_s, 6) << '\n'
        << "warmup_s = " << csv::fixed(s.warmup_s, 6) << '\n'
        << "start_spread_ms = " << csv::fixed(s.start_spread_ms, 6) << '\n'
        << "seed = " << s.seed << '\n';
}

void write_result_csv(std::ostream& out, const SimResult& r) {
    out << "vc_id,delivered_bytes,throughput_bps\n";
    for (std::size_t i = 0; i < r.per_vc_delivered_bytes.size(); ++i) {
        out << (i + 1) << ',' << r.per_vc_delivered_bytes[i] << ','
            << csv::fixed(r.per_vc_throughput_bps[i], 3) << '\n';
    }
    out << "efficiency,fairness,drops_frames,retransmissions,timeouts\n";
    out << csv::fixed(r.efficiency, 6) << ',' << csv::fixed(r.fairness, 6) << ',' << r.drops_frames
        << ',' << r.retransmissions << ',' << r.timeouts << '\n';
}

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const UbrScenario& base,
                                unsigned threads) {
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t k = cursor++; k < points.size(); k = cursor++) {
            try {
                const auto& p = points[k];
                UbrScenario s = preset_scenario(p.latency, p.n_sources, p.buffer_cells);
                s.access_link_ms = base.access_link_ms;
                s.link_rate_bps = base.link_rate_bps;
                s.pcr_bps = base.pcr_bps;
                s.mss_bytes = base.mss_bytes;
                s.timer_granularity_ms = base.timer_granularity_ms;
                s.drop_policy = base.drop_policy;
                s.duration_s = base.duration_s;
                s.warmup_s = base.warmup_s;
                s.start_spread_ms = base.start_spread_ms;
                s.seed = base.seed;
                const SimResult r = run_scenario(s);
                rows[k] = {p, r.efficiency, r.fairness};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, points.size()))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "buffer_cells,n_sources,latency_class,efficiency,fairness\n";
    for (const auto& r : rows) {
        out << r.point.buffer_cells << ',' << r.point.n_sources << ',' << to_string(r.point.latency) << ','
            << csv::fixed(r.efficiency, 6) << ',' << csv::fixed(r.fairness, 6) << '\n';
    }
}

}  // namespace satdelay::ubr
