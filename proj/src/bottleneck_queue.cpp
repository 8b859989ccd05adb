#include "satdelay/bottleneck_queue.hpp"

#include "satdelay/error.hpp"

namespace satdelay::ubr {

RateClock::RateClock(std::int64_t rate_bps, std::int64_t bits_per_unit)
    : rate_bps_(rate_bps), scaled_bits_(bits_per_unit * kNanosPerSecond) {
    if (rate_bps <= 0 || bits_per_unit <= 0) {
        throw InvalidArgument("rate clock needs a positive rate and unit size");
    }
}

Nanos RateClock::next() {
    carry_ += scaled_bits_;
    const Nanos dt = carry_ / rate_bps_;
    carry_ %= rate_bps_;
    return dt;
}

Nanos RateClock::peek(std::int64_t units) const {
    // Sum of floors telescopes because carry_ < rate_bps_.
    return (carry_ + units * scaled_bits_) / rate_bps_;
}

Nanos RateClock::advance(std::int64_t units) {
    carry_ += units * scaled_bits_;
    const Nanos dt = carry_ / rate_bps_;
    carry_ %= rate_bps_;
    return dt;
}

BottleneckQueue::BottleneckQueue(std::int64_t capacity_cells, int n_vcs, std::int64_t pcr_bps,
                                 SelectiveDropParams policy)
    : capacity_(capacity_cells),
      policy_(policy),
      cell_clock_(pcr_bps, kCellBytes * 8),
      counters_(static_cast<std::size_t>(n_vcs)) {
    if (capacity_cells < 0 || n_vcs < 1) {
        throw InvalidArgument("queue needs non-negative capacity and at least one VC");
    }
}

Admission BottleneckQueue::decide(std::uint32_t vc, std::int64_t frame_cells) const {
    if (total_occupancy_ + frame_cells > capacity_) {
        return Admission::DropCapacity;
    }
    if (policy_.enabled && total_occupancy_ > policy_.r_fraction * static_cast<double>(capacity_) &&
        active_vcs_ > 0) {
        const double load = static_cast<double>(counters_.at(vc).occupancy_cells) * active_vcs_ /
                            static_cast<double>(total_occupancy_);
        if (load > policy_.z_threshold) {
            return Admission::DropSelective;
        }
    }
    return Admission::Accept;
}

Admission BottleneckQueue::offer(Nanos now, std::uint32_t vc, std::uint64_t seq,
                                 std::uint32_t cells, std::vector<Departure>& departed) {
    advance(now, departed);
    auto& c = counters_.at(vc);
    c.arrived_cells += cells;
    const Admission verdict = decide(vc, cells);
    if (verdict != Admission::Accept) {
        c.dropped_cells += cells;
        ++c.dropped_frames;
        return verdict;
    }
    if (frames_.empty()) {
        head_done_ = now + cell_clock_.advance(cells);
    }
    frames_.push_back({vc, seq, cells});
    if (c.occupancy_cells == 0 && cells > 0) {
        ++active_vcs_;
    }
    c.occupancy_cells += cells;
    total_occupancy_ += cells;
    return verdict;
}

void BottleneckQueue::complete_head(std::vector<Departure>& departed) {
    const QueuedFrame head = frames_.front();
    frames_.pop_front();
    auto& c = counters_[head.vc];
    c.occupancy_cells -= head.cells;
    c.departed_cells += head.cells;
    ++c.delivered_frames;
    total_occupancy_ -= head.cells;
    if (c.occupancy_cells == 0) {
        --active_vcs_;
    }
    const Nanos done = head_done_;
    departed.push_back({head, done});
    if (!frames_.empty()) {
        // The next frame's first cell follows back to back.
        head_done_ = done + cell_clock_.advance(frames_.front().cells);
    }
}

void BottleneckQueue::advance(Nanos now, std::vector<Departure>& departed) {
    while (!frames_.empty() && head_done_ <= now) {
        complete_head(departed);
    }
}

std::optional<Nanos> BottleneckQueue::head_completion() const {
    if (frames_.empty()) {
        return std::nullopt;
    }
    return head_done_;
}

}  // namespace satdelay::ubr
