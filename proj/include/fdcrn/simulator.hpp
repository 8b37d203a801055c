#pragma once

// Discrete-event simulation of one licensed channel shared by a primary-user
// (PU) flow and a secondary-user (SU) flow.
//
// Both flows are Poisson session arrivals; each session is N packets sent
// back to back. PUs have preemptive priority and queue FIFO; a PU session
// whose wait exceeds the delay bound D is dropped as a whole.
//
// Sensing:
//   - Whenever the SU is about to start a burst while a PU is transmitting or
//     waiting, it runs one detection trial. On a miss it transmits anyway: a
//     PU in service is lost, waiting PUs keep waiting.
//   - Half duplex: nothing else. A burst is opaque, so a PU arriving mid-burst
//     waits for its end.
//   - Full duplex: each PU arriving mid-burst gets one detection trial. A hit
//     makes the SU yield at once and requeue its unsent packets; a miss loses
//     the PU session.

#include <cstdint>
#include <queue>
#include <string_view>
#include <vector>

#include "fdcrn/lossmodel.hpp"

namespace fdcrn::sim {

enum class DuplexMode { HalfDuplex, FullDuplexPerfect, FullDuplexImperfect };

std::string_view to_string(DuplexMode mode);
/// Accepts "half", "full", "full-imperfect". Throws std::invalid_argument otherwise.
DuplexMode parse_mode(std::string_view name);
inline bool is_full_duplex(DuplexMode mode) { return mode != DuplexMode::HalfDuplex; }

struct DuplexScenario {
  DuplexMode mode = DuplexMode::HalfDuplex;
  double p_md = 0.0;

  void validate() const;
};

struct SimResult {
  std::uint64_t pu_packets_offered = 0;
  std::uint64_t pu_packets_lost = 0;
  std::uint64_t pu_packets_delivered = 0;
  std::uint64_t su_packets_sent = 0;
  std::uint64_t pu_sessions_missed = 0;     // lost to a missed detection
  std::uint64_t pu_sessions_timed_out = 0;  // lost to the delay bound
  double pu_loss_rate = 0.0;
  double su_channel_share = 0.0;
  int replication_count = 0;
  double ci_halfwidth_95 = 0.0;
};

enum class EventKind : std::uint8_t {
  PuArrival = 0,
  SenseOutcome = 1,
  BurstEnd = 2,
  SuArrival = 3,
};

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::PuArrival;
  std::uint64_t sequence = 0;  // insertion order, assigned by the queue
  std::uint64_t token = 0;     // identifies the service period the event refers to
  double payload = 0.0;
};

/// Time-ordered event list. Ties are broken by kind (PuArrival first, then
/// SenseOutcome, BurstEnd, SuArrival) and then by insertion order.
class EventQueue {
 public:
  /// Throws std::logic_error for negative or past timestamps.
  void push(double time, EventKind kind, std::uint64_t token = 0, double payload = 0.0);
  /// Removes and returns the earliest event. Precondition: !empty().
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
  double now_ = 0.0;
};

/// splitmix64 finalizer; used to derive decorrelated seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed of replication `index` under `base_seed`.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

SimResult run_replication(const lossmodel::TrafficConfig& traffic, const DuplexScenario& scenario,
                          std::uint64_t seed);

/// Runs independent replications (concurrently when threads != 1) and
/// reduces them in index order. threads = 0 uses the hardware concurrency.
SimResult run_experiment(const lossmodel::TrafficConfig& traffic, const DuplexScenario& scenario,
                         int replications, std::uint64_t base_seed, unsigned threads = 0);

/// Aggregate of already-computed replications (mean loss, 95% half-width).
SimResult aggregate(const std::vector<SimResult>& runs);

}  // namespace fdcrn::sim
