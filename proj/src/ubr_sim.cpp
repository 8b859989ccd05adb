#include "satdelay/ubr_sim.hpp"

#include "satdelay/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace satdelay::ubr {

SegmentOverhead segment_overhead(int mss_bytes) {
    if (mss_bytes <= 0) {
        throw InvalidArgument("MSS must be positive");
    }
    const int frame = mss_bytes + kFrameOverheadBytes;
    const int cells = (frame + kCellPayloadBytes - 1) / kCellPayloadBytes;
    const int wire = cells * kCellBytes;
    return {cells, wire, static_cast<double>(mss_bytes) / wire};
}

std::string to_string(LatencyClass c) {
    switch (c) {
        case LatencyClass::SingleLeo:
            return "single-LEO";
        case LatencyClass::MultiLeo:
            return "multi-LEO";
        case LatencyClass::Geo:
            return "GEO";
    }
    return "unknown";
}

LatencyClass parse_latency_class(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "single-leo") {
        return LatencyClass::SingleLeo;
    }
    if (t == "multi-leo") {
        return LatencyClass::MultiLeo;
    }
    if (t == "geo") {
        return LatencyClass::Geo;
    }
    throw InvalidArgument("unknown latency class '" + text + "' (single-LEO, multi-LEO, GEO)");
}

std::vector<int> buffer_presets(LatencyClass c) {
    switch (c) {
        case LatencyClass::SingleLeo:
            return {375, 750, 1500, 3000, 6000, 12000, 24000, 36000};
        case LatencyClass::MultiLeo:
            return {780, 1560, 3125, 6250, 12500, 25000, 50000, 100000};
        case LatencyClass::Geo:
            return {3125, 6250, 12500, 25000, 50000, 100000, 200000, 400000};
    }
    throw InvalidArgument("unknown latency class");
}

UbrScenario preset_scenario(LatencyClass c, int n_sources, long long buffer_size_cells) {
    UbrScenario s;
    s.n_sources = n_sources;
    s.buffer_size_cells = buffer_size_cells;
    switch (c) {
        case LatencyClass::SingleLeo:
            s.satellite_one_way_ms = 5.0;
            s.receiver_window_bytes = 600000;
            break;
        case LatencyClass::MultiLeo:
            s.satellite_one_way_ms = 50.0;
            s.receiver_window_bytes = 2500000;
            break;
        case LatencyClass::Geo:
            s.satellite_one_way_ms = 275.0;
            s.receiver_window_bytes = 8704000;
            break;
    }
    return s;
}

namespace {

bool is_whole_rate(double bps) { return bps > 0.0 && bps < 1e15 && std::floor(bps) == bps; }

Nanos ms_to_nanos(double ms) { return static_cast<Nanos>(std::llround(ms * kNanosPerMs)); }

}  // namespace

void UbrScenario::validate() const {
    auto fail = [](const std::string& what) { throw ConfigurationError("scenario: " + what); };
    if (n_sources < 1) fail("n_sources must be >= 1");
    if (!(satellite_one_way_ms >= 0.0)) fail("satellite_one_way_ms must be >= 0");
    if (!(access_link_ms >= 0.0)) fail("access_link_ms must be >= 0");
    if (!is_whole_rate(link_rate_bps)) fail("link_rate_bps must be a positive whole number");
    if (!is_whole_rate(pcr_bps)) fail("pcr_bps must be a positive whole number");
    if (buffer_size_cells < 0) fail("buffer_size_cells must be >= 0");
    if (mss_bytes < 1) fail("mss_bytes must be >= 1");
    if (receiver_window_bytes < mss_bytes) fail("receiver_window_bytes must be >= mss_bytes");
    if (!(timer_granularity_ms > 0.0)) fail("timer_granularity_ms must be > 0");
    if (!(drop_policy.r_fraction > 0.0 && drop_policy.r_fraction <= 1.0)) fail("r_fraction must lie in (0, 1]");
    if (!(drop_policy.z_threshold > 0.0)) fail("z_threshold must be > 0");
    if (!(duration_s > 0.0)) fail("duration_s must be > 0");
    if (!(warmup_s >= 0.0 && warmup_s < duration_s)) fail("warmup_s must lie in [0, duration_s)");
    if (!(start_spread_ms >= 0.0)) fail("start_spread_ms must be >= 0");
}

double max_tcp_throughput_bps(const UbrScenario& scenario) {
    return scenario.pcr_bps * segment_overhead(scenario.mss_bytes).goodput_fraction;
}

double efficiency(const std::vector<double>& per_vc_throughput_bps, double x_max_bps) {
    if (!(x_max_bps > 0.0)) {
        throw InvalidArgument("x_max must be positive");
    }
    return std::accumulate(per_vc_throughput_bps.begin(), per_vc_throughput_bps.end(), 0.0) / x_max_bps;
}

double fairness(const std::vector<double>& x, const std::vector<double>& expected) {
    if (x.empty() || x.size() != expected.size()) {
        throw InvalidArgument("fairness needs matching, non-empty throughput and expectation lists");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            throw InvalidArgument("expected throughput must be positive");
        }
        const double r = x[i] / expected[i];
        sum += r;
        sum_sq += r * r;
    }
    if (sum_sq == 0.0) {
        return 0.0;
    }
    return sum * sum / (static_cast<double>(x.size()) * sum_sq);
}

double fairness_equal_share(const std::vector<double>& x, double x_max_bps) {
    if (x.empty()) {
        throw InvalidArgument("fairness needs at least one VC");
    }
    return fairness(x, std::vector<double>(x.size(), x_max_bps / static_cast<double>(x.size())));
}

namespace {

enum class EventKind : std::uint8_t {
    SourceStart,
    BottleneckArrival,
    QueueService,
    ReceiverArrival,
    AckArrival,
    RetransmitTimer,
};

struct Event {
    Nanos time = 0;
    std::uint64_t order = 0;
    EventKind kind = EventKind::SourceStart;
    std::uint32_t vc = 0;
    /// Segment number, timer generation or service token depending on kind.
    std::uint64_t value = 0;
    Ack ack;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
};

/// Time-ordered queue; equal times pop in insertion order.
class EventQueue {
public:
    void push(Event e) {
        e.order = next_order_++;
        heap_.push(std::move(e));
    }
    bool empty() const { return heap_.empty(); }
    const Event& top() const { return heap_.top(); }
    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

private:
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_order_ = 0;
};

class Simulation {
public:
    Simulation(const UbrScenario& s, SimObserver* observer)
        : s_(s),
          observer_(observer),
          overhead_(segment_overhead(s.mss_bytes)),
          access_(ms_to_nanos(s.access_link_ms)),
          satellite_(ms_to_nanos(s.satellite_one_way_ms)),
          end_(static_cast<Nanos>(std::llround(s.duration_s * kNanosPerSecond))),
          warmup_end_(static_cast<Nanos>(std::llround(s.warmup_s * kNanosPerSecond))),
          queue_(s.buffer_size_cells, s.n_sources, static_cast<std::int64_t>(s.pcr_bps), s.drop_policy) {
        TcpConfig tcp;
        tcp.mss_bytes = s.mss_bytes;
        tcp.receiver_window_bytes = s.receiver_window_bytes;
        tcp.tick = ms_to_nanos(s.timer_granularity_ms);
        for (int i = 0; i < s.n_sources; ++i) {
            senders_.emplace_back(tcp);
            receivers_.emplace_back();
            nic_clocks_.emplace_back(static_cast<std::int64_t>(s.link_rate_bps),
                                     static_cast<std::int64_t>(overhead_.wire_bytes) * 8);
        }
        nic_free_.assign(s.n_sources, 0);
        delivered_in_window_.assign(s.n_sources, 0);
        timer_scheduled_.assign(s.n_sources, ~std::uint64_t{0});

        std::mt19937_64 rng(s.seed);
        const auto spread = static_cast<std::uint64_t>(ms_to_nanos(s.start_spread_ms));
        for (int i = 0; i < s.n_sources; ++i) {
            const std::uint64_t draw = rng();
            const Nanos offset = spread == 0 ? 0 : static_cast<Nanos>(draw % spread);
            push(offset, EventKind::SourceStart, static_cast<std::uint32_t>(i), 0);
        }
    }

    SimResult run() {
        std::uint64_t events = 0;
        while (!events_.empty() && events_.top().time <= end_) {
            Event e = events_.pop();
            ++events;
            dispatch(e);
        }

        SimResult r;
        r.events = events;
        const double window_s = static_cast<double>(end_ - warmup_end_) / kNanosPerSecond;
        for (int i = 0; i < s_.n_sources; ++i) {
            const std::int64_t bytes = delivered_in_window_[i] * s_.mss_bytes;
            r.per_vc_delivered_bytes.push_back(bytes);
            r.per_vc_throughput_bps.push_back(static_cast<double>(bytes) * 8.0 / window_s);
            r.retransmissions += static_cast<std::int64_t>(senders_[i].retransmissions());
            r.timeouts += static_cast<std::int64_t>(senders_[i].timeouts());
            r.fast_retransmits += static_cast<std::int64_t>(senders_[i].fast_retransmits());
            r.drops_frames += queue_.vc(static_cast<std::uint32_t>(i)).dropped_frames;
        }
        r.segments_sent = segments_sent_;
        r.x_max_bps = max_tcp_throughput_bps(s_);
        r.efficiency = efficiency(r.per_vc_throughput_bps, r.x_max_bps);
        r.fairness = fairness_equal_share(r.per_vc_throughput_bps, r.x_max_bps);
        return r;
    }

private:
    void push(Nanos t, EventKind kind, std::uint32_t vc, std::uint64_t value, const Ack& ack = {}) {
        Event e;
        e.time = t;
        e.kind = kind;
        e.vc = vc;
        e.value = value;
        e.ack = ack;
        events_.push(std::move(e));
    }

    void dispatch(const Event& e) {
        switch (e.kind) {
            case EventKind::SourceStart:
                transmit(e.time, e.vc, senders_[e.vc].start(e.time));
                break;
            case EventKind::BottleneckArrival: {
                departed_.clear();
                queue_.offer(e.time, e.vc, e.value, static_cast<std::uint32_t>(overhead_.cells), departed_);
                after_queue_change(e.time);
                break;
            }
            case EventKind::QueueService:
                if (e.value == service_token_) {
                    departed_.clear();
                    queue_.advance(e.time, departed_);
                    after_queue_change(e.time);
                }
                break;
            case EventKind::ReceiverArrival: {
                auto& rx = receivers_[e.vc];
                const SeqNo before = rx.delivered();
                const Ack ack = rx.on_segment(e.value);
                const SeqNo after = rx.delivered();
                if (after > before) {
                    if (e.time > warmup_end_) {
                        delivered_in_window_[e.vc] += static_cast<std::int64_t>(after - before);
                    }
                    if (observer_) observer_->on_app_delivery(e.time, e.vc, before, after);
                }
                push(e.time + ack_delay(), EventKind::AckArrival, e.vc, 0, ack);
                break;
            }
            case EventKind::AckArrival:
                transmit(e.time, e.vc, senders_[e.vc].on_ack(e.time, e.ack));
                break;
            case EventKind::RetransmitTimer: {
                auto& tx = senders_[e.vc];
                if (tx.timer_armed() && tx.timer_generation() == e.value) {
                    if (observer_) observer_->on_timeout(e.time, e.vc, tx);
                    transmit(e.time, e.vc, tx.on_timeout(e.time));
                }
                break;
            }
        }
    }

    Nanos ack_delay() const { return access_ + satellite_ + access_; }

    void transmit(Nanos now, std::uint32_t vc, const std::vector<Transmission>& sends) {
        for (const auto& t : sends) {
            const Nanos start = std::max(now, nic_free_[vc]);
            nic_free_[vc] = start + nic_clocks_[vc].next();
            ++segments_sent_;
            if (observer_) observer_->on_send(now, vc, t);
            push(nic_free_[vc] + access_, EventKind::BottleneckArrival, vc, t.seq);
        }
        auto& tx = senders_[vc];
        if (tx.timer_armed() && timer_scheduled_[vc] != tx.timer_generation()) {
            timer_scheduled_[vc] = tx.timer_generation();
            push(tx.timer_deadline(), EventKind::RetransmitTimer, vc, tx.timer_generation());
        }
    }

    void after_queue_change(Nanos now) {
        for (const auto& d : departed_) {
            push(d.completed_at + satellite_ + access_, EventKind::ReceiverArrival, d.frame.vc, d.frame.seq);
        }
        if (observer_) observer_->on_queue(now, queue_);
        if (const auto done = queue_.head_completion()) {
            if (*done != scheduled_service_) {
                scheduled_service_ = *done;
                push(*done, EventKind::QueueService, 0, ++service_token_);
            }
        }
    }

    const UbrScenario& s_;
    SimObserver* observer_;
    SegmentOverhead overhead_;
    Nanos access_;
    Nanos satellite_;
    Nanos end_;
    Nanos warmup_end_;

    EventQueue events_;
    BottleneckQueue queue_;
    std::vector<SackSender> senders_;
    std::vector<SackReceiver> receivers_;
    std::vector<RateClock> nic_clocks_;
    std::vector<Nanos> nic_free_;
    std::vector<std::int64_t> delivered_in_window_;
    std::vector<std::uint64_t> timer_scheduled_;
    std::vector<Departure> departed_;
    std::uint64_t service_token_ = 0;
    Nanos scheduled_service_ = -1;
    std::int64_t segments_sent_ = 0;
};

}  // namespace

SimResult run_scenario(const UbrScenario& scenario, SimObserver* observer) {
    scenario.validate();
    Simulation sim(scenario, observer);
    return sim.run();
}

}  // namespace satdelay::ubr
