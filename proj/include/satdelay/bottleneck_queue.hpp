// Earth-station bottleneck: a FIFO of AAL5 frames, each transmitted as
// contiguous cells at the peak cell rate. Occupancy is counted in cells and
// changes at frame boundaries: a frame's cells enter on admission and leave
// when its last cell has been sent. Admission is whole-frame, decided by
// selective drop.
#pragma once

#include "satdelay/ubr_scenario.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace satdelay::ubr {

/// Exact integer-nanosecond service times for fixed-size units on a link.
/// The fractional remainder is carried so long runs keep the exact rate.
class RateClock {
public:
    RateClock(std::int64_t rate_bps, std::int64_t bits_per_unit);

    /// Duration of the next unit; advances the carry.
    Nanos next();
    /// Total duration of the next `units` units without advancing.
    Nanos peek(std::int64_t units) const;
    /// Total duration of the next `units` units; advances the carry.
    Nanos advance(std::int64_t units);

private:
    std::int64_t rate_bps_;
    std::int64_t scaled_bits_;
    std::int64_t carry_ = 0;
};

enum class Admission { Accept, DropCapacity, DropSelective };

struct QueuedFrame {
    std::uint32_t vc = 0;
    std::uint64_t seq = 0;
    std::uint32_t cells = 0;
};

struct Departure {
    QueuedFrame frame;
    Nanos completed_at = 0;
};

struct VcCounters {
    std::int64_t occupancy_cells = 0;
    std::int64_t arrived_cells = 0;
    std::int64_t departed_cells = 0;
    std::int64_t dropped_cells = 0;
    std::int64_t delivered_frames = 0;
    std::int64_t dropped_frames = 0;
};

class BottleneckQueue {
public:
    BottleneckQueue(std::int64_t capacity_cells, int n_vcs, std::int64_t pcr_bps,
                    SelectiveDropParams policy);

    /// The admission rule evaluated against the current occupancy.
    Admission decide(std::uint32_t vc, std::int64_t frame_cells) const;

    /// Drains up to `now`, then admits or drops the whole frame.
    Admission offer(Nanos now, std::uint32_t vc, std::uint64_t seq, std::uint32_t cells,
                    std::vector<Departure>& departed);

    /// Completes every frame whose last cell is sent at or before `now`.
    void advance(Nanos now, std::vector<Departure>& departed);

    /// Completion instant of the frame at the head, if any.
    std::optional<Nanos> head_completion() const;

    std::int64_t capacity_cells() const { return capacity_; }
    std::int64_t total_occupancy_cells() const { return total_occupancy_; }
    int active_vcs() const { return active_vcs_; }
    const VcCounters& vc(std::uint32_t vc) const { return counters_.at(vc); }
    const std::vector<VcCounters>& counters() const { return counters_; }
    std::size_t frames_queued() const { return frames_.size(); }
    const SelectiveDropParams& policy() const { return policy_; }

private:
    void complete_head(std::vector<Departure>& departed);

    std::int64_t capacity_;
    SelectiveDropParams policy_;
    RateClock cell_clock_;
    std::deque<QueuedFrame> frames_;
    std::vector<VcCounters> counters_;
    std::int64_t total_occupancy_ = 0;
    int active_vcs_ = 0;
    /// Completion time of the head frame; valid when non-empty.
    Nanos head_done_ = 0;
};

}  // namespace satdelay::ubr
