#include "satdelay/tcp_sack.hpp"

#include "satdelay/error.hpp"

#include <algorithm>
#include <cmath>

namespace satdelay::ubr {

SackSender::SackSender(TcpConfig config) : config_(config) {
    if (config_.mss_bytes <= 0 || config_.receiver_window_bytes < config_.mss_bytes ||
        config_.tick <= 0 || config_.rto_floor_ticks < 1 ||
        config_.rto_ceiling_ticks < config_.rto_floor_ticks || config_.dupack_threshold < 1) {
        throw InvalidArgument("invalid TCP configuration");
    }
    state_.cwnd_bytes = config_.mss_bytes;
    state_.ssthresh_bytes = config_.receiver_window_bytes;
    state_.rto_ticks = std::clamp(config_.initial_rto_ticks, config_.rto_floor_ticks,
                                  config_.rto_ceiling_ticks);
}

std::uint8_t& SackSender::flags(SeqNo seq) { return scoreboard_[seq - state_.send_unacked]; }

std::uint8_t SackSender::flags_at(SeqNo seq) const {
    return scoreboard_[seq - state_.send_unacked];
}

bool SackSender::is_sacked(SeqNo seq) const {
    if (seq < state_.send_unacked || seq >= state_.send_max) {
        return false;
    }
    return (flags_at(seq) & kSacked) != 0;
}

long long SackSender::window_segments() const {
    const long long wnd = std::min(state_.cwnd_bytes, config_.receiver_window_bytes);
    return std::max<long long>(1, wnd / config_.mss_bytes);
}

int SackSender::current_rto_ticks() const {
    const long long backed = static_cast<long long>(state_.rto_ticks) * state_.backoff;
    return static_cast<int>(std::min<long long>(backed, config_.rto_ceiling_ticks));
}

long long SackSender::flight_bytes() const {
    return static_cast<long long>(state_.send_max - state_.send_unacked) * config_.mss_bytes;
}

void SackSender::arm_timer(Nanos now) {
    timer_armed_ = true;
    timer_deadline_ = now + static_cast<Nanos>(current_rto_ticks()) * config_.tick;
    ++timer_generation_;
}

void SackSender::cancel_timer() {
    if (timer_armed_) {
        timer_armed_ = false;
        ++timer_generation_;
    }
}

void SackSender::update_rto() {
    const double raw = std::ceil(state_.srtt_ticks + 4.0 * state_.rttvar_ticks);
    state_.rto_ticks = static_cast<int>(std::clamp(raw, static_cast<double>(config_.rto_floor_ticks),
                                                   static_cast<double>(config_.rto_ceiling_ticks)));
}

void SackSender::take_rtt_sample(Nanos now) {
    const double m = static_cast<double>(now / config_.tick - timed_tick_);
    if (!state_.have_rtt_sample) {
        state_.srtt_ticks = m;
        state_.rttvar_ticks = m / 2.0;
        state_.have_rtt_sample = true;
    } else {
        const double err = m - state_.srtt_ticks;
        state_.srtt_ticks += err / 8.0;
        state_.rttvar_ticks += (std::abs(err) - state_.rttvar_ticks) / 4.0;
    }
    timing_ = false;
    state_.backoff = 1;
    update_rto();
}

Transmission SackSender::emit(Nanos now, SeqNo seq) {
    Transmission t{seq, seq < state_.send_max};
    if (t.retransmission) {
        ++retransmissions_;
        flags(seq) |= kRetransmitted;
        // Karn: an ambiguous sample is worse than none.
        if (timing_ && seq <= timed_seq_) {
            timing_ = false;
        }
    } else {
        ++state_.send_max;
        scoreboard_.push_back(0);
        if (!timing_) {
            timing_ = true;
            timed_seq_ = seq;
            timed_tick_ = now / config_.tick;
        }
    }
    if (!timer_armed_) {
        arm_timer(now);
    }
    return t;
}

SeqNo SackSender::lost_boundary() const {
    // A hole is lost once dupack_threshold segments above it are SACKed.
    int seen = 0;
    for (SeqNo s = state_.send_max; s > state_.send_unacked; --s) {
        if (flags_at(s - 1) & kSacked) {
            if (++seen == config_.dupack_threshold) {
                return s - 1;
            }
        }
    }
    return state_.send_unacked;
}

long long SackSender::pipe(SeqNo lost_below) const {
    long long p = 0;
    for (SeqNo s = state_.send_unacked; s < state_.send_next; ++s) {
        const std::uint8_t f = flags_at(s);
        if (!(f & kSacked) && s >= lost_below) {
            ++p;
        }
        if (f & kRetransmitted) {
            ++p;
        }
    }
    return p;
}

bool SackSender::next_lost_segment(SeqNo lost_below, SeqNo& out) const {
    const SeqNo end = std::min(lost_below, state_.send_next);
    for (SeqNo s = state_.send_unacked; s < end; ++s) {
        if (!(flags_at(s) & (kSacked | kRetransmitted))) {
            out = s;
            return true;
        }
    }
    return false;
}

void SackSender::send_available(Nanos now, std::vector<Transmission>& out) {
    const SeqNo rwnd_limit =
        state_.send_unacked + static_cast<SeqNo>(config_.receiver_window_bytes / config_.mss_bytes);
    if (state_.in_recovery) {
        const SeqNo lost_below = lost_boundary();
        long long in_pipe = pipe(lost_below);
        const long long cwnd_segments = std::max<long long>(1, state_.cwnd_bytes / config_.mss_bytes);
        while (in_pipe < cwnd_segments) {
            SeqNo hole = 0;
            if (next_lost_segment(lost_below, hole)) {
                out.push_back(emit(now, hole));
            } else if (state_.send_next < rwnd_limit) {
                out.push_back(emit(now, state_.send_next++));
            } else {
                break;
            }
            ++in_pipe;
        }
        return;
    }
    const SeqNo limit = state_.send_unacked + static_cast<SeqNo>(window_segments());
    while (state_.send_next < limit) {
        const SeqNo seq = state_.send_next++;
        if (seq < state_.send_max && (flags_at(seq) & kSacked)) {
            continue;
        }
        out.push_back(emit(now, seq));
    }
}

std::vector<Transmission> SackSender::start(Nanos now) {
    std::vector<Transmission> out;
    send_available(now, out);
    return out;
}

void SackSender::mark_sacked(const Ack& ack) {
    for (int i = 0; i < ack.n_blocks; ++i) {
        const SeqNo lo = std::max(ack.blocks[i].start, state_.send_unacked);
        const SeqNo hi = std::min(ack.blocks[i].end, state_.send_max);
        for (SeqNo s = lo; s < hi; ++s) {
            flags(s) |= kSacked;
        }
    }
}

void SackSender::advance_to(SeqNo ack) {
    while (state_.send_unacked < ack) {
        scoreboard_.pop_front();
        ++state_.send_unacked;
    }
    state_.send_next = std::max(state_.send_next, state_.send_unacked);
}

std::vector<Transmission> SackSender::on_ack(Nanos now, const Ack& ack) {
    std::vector<Transmission> out;
    if (ack.cumulative > state_.send_max) {
        throw InvalidArgument("ACK for data never sent");
    }
    mark_sacked(ack);

    if (ack.cumulative > state_.send_unacked) {
        if (timing_ && ack.cumulative > timed_seq_) {
            take_rtt_sample(now);
        }
        advance_to(ack.cumulative);
        state_.dupack_count = 0;
        last_advance_ = now;
        if (state_.in_recovery) {
            if (state_.send_unacked > state_.recovery_point) {
                state_.in_recovery = false;
                for (auto& f : scoreboard_) {
                    f &= static_cast<std::uint8_t>(~kRetransmitted);
                }
            }
        } else {
            const long long mss = config_.mss_bytes;
            if (state_.cwnd_bytes < state_.ssthresh_bytes) {
                state_.cwnd_bytes += mss;
            } else {
                state_.cwnd_bytes += std::max<long long>(1, mss * mss / state_.cwnd_bytes);
            }
            state_.cwnd_bytes = std::min(state_.cwnd_bytes, config_.receiver_window_bytes);
        }
        if (state_.send_unacked == state_.send_max) {
            cancel_timer();
        } else {
            arm_timer(now);
        }
    } else if (state_.send_max > state_.send_unacked) {
        ++state_.dupack_count;
        if (!state_.in_recovery && state_.dupack_count >= config_.dupack_threshold &&
            state_.send_unacked >= recover_guard_) {
            ++fast_retransmits_;
            state_.ssthresh_bytes = std::max(flight_bytes() / 2, 2LL * config_.mss_bytes);
            state_.cwnd_bytes = state_.ssthresh_bytes;
            state_.in_recovery = true;
            state_.recovery_point = state_.send_max - 1;
            recover_guard_ = state_.send_max;
            for (auto& f : scoreboard_) {
                f &= static_cast<std::uint8_t>(~kRetransmitted);
            }
            if (!(flags(state_.send_unacked) & kSacked)) {
                out.push_back(emit(now, state_.send_unacked));
            }
        }
    }
    send_available(now, out);
    return out;
}

std::vector<Transmission> SackSender::on_timeout(Nanos now) {
    ++timeouts_;
    timer_armed_ = false;
    ++timer_generation_;
    state_.ssthresh_bytes = std::max(flight_bytes() / 2, 2LL * config_.mss_bytes);
    state_.cwnd_bytes = config_.mss_bytes;
    state_.backoff = std::min(state_.backoff * 2, config_.rto_ceiling_ticks);
    state_.in_recovery = false;
    state_.dupack_count = 0;
    state_.send_next = state_.send_unacked;
    recover_guard_ = state_.send_max;
    timing_ = false;
    std::fill(scoreboard_.begin(), scoreboard_.end(), std::uint8_t{0});

    std::vector<Transmission> out;
    send_available(now, out);
    return out;
}

Ack SackReceiver::on_segment(SeqNo seq) {
    ++clock_;
    SeqNo latest_block = 0;
    bool have_latest = false;

    if (seq == rcv_next_) {
        ++rcv_next_;
        auto first = blocks_.begin();
        if (first != blocks_.end() && first->first == rcv_next_) {
            rcv_next_ = first->second.end;
            blocks_.erase(first);
        }
    } else if (seq > rcv_next_) {
        auto next = blocks_.upper_bound(seq);
        auto prev = next == blocks_.begin() ? blocks_.end() : std::prev(next);
        if (prev != blocks_.end() && seq < prev->second.end) {
            latest_block = prev->first;  // duplicate inside a known block
        } else {
            SeqNo start = seq;
            SeqNo end = seq + 1;
            if (prev != blocks_.end() && prev->second.end == seq) {
                start = prev->first;
                blocks_.erase(prev);
            }
            if (next != blocks_.end() && next->first == end) {
                end = next->second.end;
                blocks_.erase(next);
            }
            blocks_[start] = Block{end, clock_};
            latest_block = start;
        }
        blocks_[latest_block].touched = clock_;
        have_latest = true;
    }

    Ack ack;
    ack.cumulative = rcv_next_;
    std::vector<std::pair<std::uint64_t, SeqNo>> order;
    order.reserve(blocks_.size());
    for (const auto& [start, b] : blocks_) {
        if (!(have_latest && start == latest_block)) {
            order.emplace_back(b.touched, start);
        }
    }
    std::sort(order.begin(), order.end(), std::greater<>());
    if (have_latest) {
        ack.blocks[ack.n_blocks++] = {latest_block, blocks_.at(latest_block).end};
    }
    for (const auto& [touched, start] : order) {
        if (ack.n_blocks == kMaxSackBlocks) {
            break;
        }
        ack.blocks[ack.n_blocks++] = {start, blocks_.at(start).end};
    }
    return ack;
}

}  // namespace satdelay::ubr
