#include "fdcrn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace fdcrn::sim {

std::string_view to_string(DuplexMode mode) {
  switch (mode) {
    case DuplexMode::HalfDuplex:
      return "half";
    case DuplexMode::FullDuplexPerfect:
      return "full";
    case DuplexMode::FullDuplexImperfect:
      return "full-imperfect";
  }
  return "unknown";
}

DuplexMode parse_mode(std::string_view name) {
  if (name == "half") return DuplexMode::HalfDuplex;
  if (name == "full") return DuplexMode::FullDuplexPerfect;
  if (name == "full-imperfect") return DuplexMode::FullDuplexImperfect;
  throw std::invalid_argument("unknown duplex mode '" + std::string(name) +
                              "' (expected half, full, full-imperfect)");
}

void DuplexScenario::validate() const {
  if (!(p_md >= 0.0 && p_md <= 1.0)) {
    throw std::invalid_argument("DuplexScenario: p_md must lie in [0, 1]");
  }
}

bool EventQueue::Later::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.kind != b.kind) return a.kind > b.kind;
  return a.sequence > b.sequence;
}

void EventQueue::push(double time, EventKind kind, std::uint64_t token, double payload) {
  if (!(time >= 0.0) || time < now_) {
    throw std::logic_error("EventQueue: event scheduled in the past");
  }
  heap_.push(Event{time, kind, next_sequence_++, token, payload});
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  if (e.time < now_) throw std::logic_error("EventQueue: time went backwards");
  now_ = e.time;
  return e;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return mix_seed(base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

namespace {

enum class Channel { Idle, Pu, Su, Sensing };

// Why a SenseOutcome was scheduled.
enum class SenseReason : int { MidBurst = 0, OverActivePu = 1, OverWaitingPu = 2 };

class Replication {
 public:
  Replication(const lossmodel::TrafficConfig& traffic, const DuplexScenario& scenario,
              std::uint64_t seed)
      : traffic_(traffic),
        scenario_(scenario),
        pu_rng_(mix_seed(seed ^ 0x5055ULL)),
        su_rng_(mix_seed(seed ^ 0x5355ULL)),
        sense_rng_(mix_seed(seed ^ 0x53454eULL)),
        pu_gap_(traffic.lambda_p > 0.0 ? traffic.lambda_p : 1.0),
        su_gap_(traffic.lambda_s > 0.0 ? traffic.lambda_s : 1.0),
        missed_(scenario.p_md) {}

  SimResult run() {
    if (traffic_.lambda_p > 0.0) {
      schedule_arrival(EventKind::PuArrival, 0.0);
    } else {
      pu_arrivals_done_ = true;
    }
    if (traffic_.lambda_s > 0.0) schedule_arrival(EventKind::SuArrival, 0.0);
    while (!events_.empty() && !finished()) {
      const Event e = events_.pop();
      switch (e.kind) {
        case EventKind::PuArrival:
          on_pu_arrival(e.time);
          break;
        case EventKind::SuArrival:
          on_su_arrival(e.time);
          break;
        case EventKind::BurstEnd:
          on_burst_end(e);
          break;
        case EventKind::SenseOutcome:
          on_sense(e);
          break;
      }
    }
    return result();
  }

 private:
  void schedule_arrival(EventKind kind, double now) {
    const double t = now + (kind == EventKind::PuArrival ? pu_gap_(pu_rng_) : su_gap_(su_rng_));
    if (t < traffic_.horizon_s) {
      events_.push(t, kind);
    } else if (kind == EventKind::PuArrival) {
      pu_arrivals_done_ = true;
    }
  }

  bool finished() const {
    return pu_arrivals_done_ && channel_ != Channel::Pu && pu_queue_.empty() &&
           channel_ != Channel::Sensing && pending_mid_burst_ == 0;
  }

  bool su_has_work() const { return su_backlog_ > 0 || su_partial_ > 0; }

  void on_pu_arrival(double t) {
    ++pu_sessions_;
    schedule_arrival(EventKind::PuArrival, t);
    switch (channel_) {
      case Channel::Idle:
        start_pu(t);
        break;
      case Channel::Pu:
      case Channel::Sensing:
        pu_queue_.push_back(t);
        break;
      case Channel::Su:
        pu_queue_.push_back(t);
        if (is_full_duplex(scenario_.mode)) {
          ++pending_mid_burst_;
          events_.push(t, EventKind::SenseOutcome, token_, encode(SenseReason::MidBurst, t));
        }
        break;
    }
  }

  void on_su_arrival(double t) {
    schedule_arrival(EventKind::SuArrival, t);
    const bool was_idle = !su_has_work();
    ++su_backlog_;
    if (channel_ == Channel::Idle) {
      start_su(t);
    } else if (channel_ == Channel::Pu && was_idle) {
      // The SU wants the channel while a PU is on it.
      channel_ = Channel::Sensing;
      events_.push(t, EventKind::SenseOutcome, token_, encode(SenseReason::OverActivePu, t));
    }
  }

  void on_burst_end(const Event& e) {
    if (e.token != token_) return;  // cancelled by preemption or collision
    const double t = e.time;
    if (channel_ == Channel::Pu) {
      ++pu_delivered_;
      channel_ = Channel::Idle;
      dispatch(t);
    } else if (channel_ == Channel::Su) {
      su_packets_sent_ += static_cast<std::uint64_t>(su_burst_packets_);
      su_busy_ += t - su_burst_start_;
      channel_ = Channel::Idle;
      if (su_has_work() && !pu_queue_.empty()) {
        channel_ = Channel::Sensing;
        events_.push(t, EventKind::SenseOutcome, ++token_, encode(SenseReason::OverWaitingPu, t));
      } else {
        dispatch(t);
      }
    }
  }

  void on_sense(const Event& e) {
    const double t = e.time;
    const SenseReason reason = decode_reason(e.payload);
    const bool miss = missed_(sense_rng_);

    if (reason == SenseReason::MidBurst) {
      --pending_mid_burst_;
      const double arrival = e.time;
      const auto it = std::find(pu_queue_.rbegin(), pu_queue_.rend(), arrival);
      if (channel_ != Channel::Su || e.token != token_ || it == pu_queue_.rend()) return;
      if (miss) {
        pu_queue_.erase(std::next(it).base());
        ++pu_missed_;
        return;
      }
      preempt_su(t);
      dispatch(t);
      return;
    }

    if (reason == SenseReason::OverActivePu) {
      if (miss) {
        // Collision: the PU session on the air is lost.
        ++pu_missed_;
        start_su(t);
      } else {
        channel_ = Channel::Pu;  // the SU waits for the channel to clear
      }
      return;
    }

    // OverWaitingPu: the SU finished a burst and wants to start another.
    if (miss) {
      start_su(t);
    } else {
      channel_ = Channel::Idle;
      dispatch(t);
    }
  }

  // Channel is free: waiting PUs first, then the SU.
  void dispatch(double t) {
    while (!pu_queue_.empty()) {
      const double arrival = pu_queue_.front();
      pu_queue_.pop_front();
      if (t - arrival > traffic_.delay_bound_s) {
        ++pu_timed_out_;
        continue;
      }
      start_pu(t);
      return;
    }
    if (su_has_work()) {
      start_su(t);
    } else {
      channel_ = Channel::Idle;
    }
  }

  void start_pu(double t) {
    channel_ = Channel::Pu;
    events_.push(t + traffic_.burst_duration(), EventKind::BurstEnd, ++token_);
  }

  void start_su(double t) {
    if (su_partial_ > 0) {
      su_burst_packets_ = su_partial_;
      su_partial_ = 0;
    } else {
      --su_backlog_;
      su_burst_packets_ = traffic_.n_packets;
    }
    channel_ = Channel::Su;
    su_burst_start_ = t;
    events_.push(t + su_burst_packets_ * traffic_.packet_duration(), EventKind::BurstEnd,
                 ++token_);
  }

  void preempt_su(double t) {
    const double elapsed = t - su_burst_start_;
    int sent = static_cast<int>(std::floor(elapsed / traffic_.packet_duration() + 1e-9));
    sent = std::clamp(sent, 0, su_burst_packets_);
    su_packets_sent_ += static_cast<std::uint64_t>(sent);
    su_partial_ = su_burst_packets_ - sent;
    su_busy_ += elapsed;
    ++token_;  // cancels the pending BurstEnd
    channel_ = Channel::Idle;
  }

  static double encode(SenseReason reason, double time) {
    // Mid-burst events carry the PU arrival time; others only need the reason.
    return reason == SenseReason::MidBurst ? time : -1.0 - static_cast<int>(reason);
  }

  static SenseReason decode_reason(double payload) {
    if (payload >= 0.0) return SenseReason::MidBurst;
    return static_cast<SenseReason>(static_cast<int>(-payload - 1.0));
  }

  SimResult result() const {
    const auto n = static_cast<std::uint64_t>(traffic_.n_packets);
    SimResult r;
    r.pu_packets_offered = pu_sessions_ * n;
    r.pu_sessions_missed = pu_missed_;
    r.pu_sessions_timed_out = pu_timed_out_;
    r.pu_packets_lost = (pu_missed_ + pu_timed_out_) * n;
    r.pu_packets_delivered = pu_delivered_ * n;
    r.su_packets_sent = su_packets_sent_;
    r.pu_loss_rate = r.pu_packets_offered == 0
                         ? 0.0
                         : static_cast<double>(r.pu_packets_lost) /
                               static_cast<double>(r.pu_packets_offered);
    double busy = su_busy_;
    if (channel_ == Channel::Su) busy += events_.now() - su_burst_start_;
    const double span = std::max(events_.now(), traffic_.horizon_s);
    r.su_channel_share = std::clamp(busy / span, 0.0, 1.0);
    r.replication_count = 1;
    return r;
  }

  const lossmodel::TrafficConfig& traffic_;
  const DuplexScenario& scenario_;
  std::mt19937_64 pu_rng_;
  std::mt19937_64 su_rng_;
  std::mt19937_64 sense_rng_;
  std::exponential_distribution<double> pu_gap_;
  std::exponential_distribution<double> su_gap_;
  std::bernoulli_distribution missed_;

  EventQueue events_;
  Channel channel_ = Channel::Idle;
  std::uint64_t token_ = 0;
  std::deque<double> pu_queue_;  // arrival times of waiting PU sessions
  bool pu_arrivals_done_ = false;
  int pending_mid_burst_ = 0;

  std::uint64_t su_backlog_ = 0;  // whole SU sessions not yet started
  int su_partial_ = 0;            // packets left from a preempted burst
  int su_burst_packets_ = 0;
  double su_burst_start_ = 0.0;
  double su_busy_ = 0.0;

  std::uint64_t pu_sessions_ = 0;
  std::uint64_t pu_delivered_ = 0;
  std::uint64_t pu_missed_ = 0;
  std::uint64_t pu_timed_out_ = 0;
  std::uint64_t su_packets_sent_ = 0;
};

}  // namespace

SimResult run_replication(const lossmodel::TrafficConfig& traffic, const DuplexScenario& scenario,
                          std::uint64_t seed) {
  traffic.validate();
  scenario.validate();
  return Replication(traffic, scenario, seed).run();
}

SimResult aggregate(const std::vector<SimResult>& runs) {
  SimResult out;
  if (runs.empty()) return out;
  double sum = 0.0;
  double share = 0.0;
  for (const SimResult& r : runs) {
    out.pu_packets_offered += r.pu_packets_offered;
    out.pu_packets_lost += r.pu_packets_lost;
    out.pu_packets_delivered += r.pu_packets_delivered;
    out.su_packets_sent += r.su_packets_sent;
    out.pu_sessions_missed += r.pu_sessions_missed;
    out.pu_sessions_timed_out += r.pu_sessions_timed_out;
    sum += r.pu_loss_rate;
    share += r.su_channel_share;
  }
  const auto n = static_cast<double>(runs.size());
  out.pu_loss_rate = sum / n;
  out.su_channel_share = share / n;
  out.replication_count = static_cast<int>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const SimResult& r : runs) {
      const double d = r.pu_loss_rate - out.pu_loss_rate;
      ss += d * d;
    }
    out.ci_halfwidth_95 = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

SimResult run_experiment(const lossmodel::TrafficConfig& traffic, const DuplexScenario& scenario,
                         int replications, std::uint64_t base_seed, unsigned threads) {
  if (replications < 1) throw std::invalid_argument("run_experiment: replications must be >= 1");
  traffic.validate();
  scenario.validate();

  std::vector<SimResult> runs(static_cast<std::size_t>(replications));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(replications));

  const auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < runs.size(); i += threads) {
      runs[i] = run_replication(traffic, scenario, derive_seed(base_seed, i));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return aggregate(runs);
}

}  // namespace fdcrn::sim
