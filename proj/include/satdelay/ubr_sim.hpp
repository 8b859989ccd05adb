// Discrete-event simulation of N persistent SACK TCP sources sharing an
// earth-station UBR bottleneck:
//
//   source --access--> [bottleneck queue @ PCR] --satellite--> switch
//          --access--> destination
//
// Data flows one way; ACKs return over an uncongested path with the same
// propagation delay. Runs are deterministic for a given scenario and seed.
#pragma once

#include "satdelay/bottleneck_queue.hpp"
#include "satdelay/tcp_sack.hpp"
#include "satdelay/ubr_scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace satdelay::ubr {

struct SimResult {
    std::vector<std::int64_t> per_vc_delivered_bytes;
    std::vector<double> per_vc_throughput_bps;
    double x_max_bps = 0.0;
    double efficiency = 0.0;
    double fairness = 0.0;
    std::int64_t drops_frames = 0;
    std::int64_t retransmissions = 0;
    std::int64_t timeouts = 0;
    std::int64_t fast_retransmits = 0;
    std::int64_t segments_sent = 0;
    std::uint64_t events = 0;
};

/// Hooks for instrumentation; every callback runs inside the event loop.
class SimObserver {
public:
    virtual ~SimObserver() = default;
    /// After every queue arrival or service step.
    virtual void on_queue(Nanos /*now*/, const BottleneckQueue& /*queue*/) {}
    /// Segments [first, last) handed in order to the application of `vc`.
    virtual void on_app_delivery(Nanos /*now*/, std::uint32_t /*vc*/, SeqNo /*first*/,
                                 SeqNo /*last*/) {}
    /// Segment handed to the source's access link.
    virtual void on_send(Nanos /*now*/, std::uint32_t /*vc*/, const Transmission& /*t*/) {}
    /// Called just before the sender reacts to a retransmission timeout.
    virtual void on_timeout(Nanos /*now*/, std::uint32_t /*vc*/, const SackSender& /*sender*/) {}
};

/// Maximum TCP throughput on the bottleneck: PCR times the goodput fraction.
double max_tcp_throughput_bps(const UbrScenario& scenario);

/// Sum of throughputs over the attainable maximum.
double efficiency(const std::vector<double>& per_vc_throughput_bps, double x_max_bps);

/// Jain's index over throughputs normalised by their expected shares.
double fairness(const std::vector<double>& per_vc_throughput_bps,
                const std::vector<double>& expected_bps);

/// Fairness with the symmetric expectation x_max / N for every VC.
double fairness_equal_share(const std::vector<double>& per_vc_throughput_bps, double x_max_bps);

SimResult run_scenario(const UbrScenario& scenario, SimObserver* observer = nullptr);

}  // namespace satdelay::ubr
