// Persistent SACK TCP endpoints driven by a discrete-event simulator.
//
// Sequence numbers count whole MSS-sized segments. The sender follows the
// conservative SACK loss-recovery pipe algorithm, with Jacobson RTT
// estimation at coarse timer-tick granularity and Karn's rule.
#pragma once

#include "satdelay/ubr_scenario.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

namespace satdelay::ubr {

using SeqNo = std::uint64_t;

/// Half-open range [start, end) of received segments.
struct SackBlock {
    SeqNo start = 0;
    SeqNo end = 0;
};

inline constexpr int kMaxSackBlocks = 3;

struct Ack {
    SeqNo cumulative = 0;  ///< next segment expected
    std::array<SackBlock, kMaxSackBlocks> blocks{};
    int n_blocks = 0;
};

struct Transmission {
    SeqNo seq = 0;
    bool retransmission = false;
};

struct TcpConfig {
    int mss_bytes = 9180;
    long long receiver_window_bytes = 600000;
    Nanos tick = 100 * kNanosPerMs;
    int rto_floor_ticks = 2;
    int rto_ceiling_ticks = 640;
    int initial_rto_ticks = 30;
    int dupack_threshold = 3;
};

struct TcpConnectionState {
    long long cwnd_bytes = 0;
    long long ssthresh_bytes = 0;
    SeqNo send_next = 0;
    SeqNo send_unacked = 0;
    /// Highest segment ever sent, plus one.
    SeqNo send_max = 0;
    double srtt_ticks = 0.0;
    double rttvar_ticks = 0.0;
    bool have_rtt_sample = false;
    int rto_ticks = 0;
    int backoff = 1;
    int dupack_count = 0;
    bool in_recovery = false;
    SeqNo recovery_point = 0;
};

class SackSender {
public:
    explicit SackSender(TcpConfig config);

    /// Opens the connection at `now`; returns the initial flight.
    std::vector<Transmission> start(Nanos now);
    std::vector<Transmission> on_ack(Nanos now, const Ack& ack);
    std::vector<Transmission> on_timeout(Nanos now);

    const TcpConnectionState& state() const { return state_; }
    const TcpConfig& config() const { return config_; }

    bool timer_armed() const { return timer_armed_; }
    Nanos timer_deadline() const { return timer_deadline_; }
    /// Bumped on every arm or cancel; stale timer events compare against it.
    std::uint64_t timer_generation() const { return timer_generation_; }

    /// Effective retransmission timeout including backoff, ticks.
    int current_rto_ticks() const;
    /// Instant of the most recent ACK that advanced send_unacked, or -1.
    Nanos last_advance() const { return last_advance_; }

    bool is_sacked(SeqNo seq) const;
    long long window_segments() const;

    std::uint64_t retransmissions() const { return retransmissions_; }
    std::uint64_t timeouts() const { return timeouts_; }
    std::uint64_t fast_retransmits() const { return fast_retransmits_; }

private:
    enum Flag : std::uint8_t { kSacked = 1, kRetransmitted = 2 };

    std::uint8_t& flags(SeqNo seq);
    std::uint8_t flags_at(SeqNo seq) const;
    void mark_sacked(const Ack& ack);
    void advance_to(SeqNo ack);
    void take_rtt_sample(Nanos now);
    void arm_timer(Nanos now);
    void cancel_timer();
    void update_rto();
    long long flight_bytes() const;
    SeqNo lost_boundary() const;
    long long pipe(SeqNo lost_below) const;
    bool next_lost_segment(SeqNo lost_below, SeqNo& out) const;
    Transmission emit(Nanos now, SeqNo seq);
    void send_available(Nanos now, std::vector<Transmission>& out);

    TcpConfig config_;
    TcpConnectionState state_;
    /// Flags for segments in [send_unacked, send_max).
    std::deque<std::uint8_t> scoreboard_;

    bool timing_ = false;
    SeqNo timed_seq_ = 0;
    std::int64_t timed_tick_ = 0;

    bool timer_armed_ = false;
    Nanos timer_deadline_ = 0;
    std::uint64_t timer_generation_ = 0;
    Nanos last_advance_ = -1;
    /// Fast recovery may start only once send_unacked reaches this point.
    SeqNo recover_guard_ = 0;

    std::uint64_t retransmissions_ = 0;
    std::uint64_t timeouts_ = 0;
    std::uint64_t fast_retransmits_ = 0;
};

/// Receiver that ACKs every segment immediately, reporting up to three SACK
/// blocks with the most recently changed block first.
class SackReceiver {
public:
    Ack on_segment(SeqNo seq);

    /// Segments delivered in order to the application so far.
    SeqNo delivered() const { return rcv_next_; }
    std::size_t out_of_order_blocks() const { return blocks_.size(); }

private:
    struct Block {
        SeqNo end;
        std::uint64_t touched;
    };

    SeqNo rcv_next_ = 0;
    std::map<SeqNo, Block> blocks_;
    std::uint64_t clock_ = 0;
};

}  // namespace satdelay::ubr
