#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "botsim/bot.hpp"
#include "botsim/message.hpp"
#include "botsim/metrics.hpp"
#include "botsim/rng.hpp"
#include "botsim/sensor.hpp"
#include "botsim/trust.hpp"

namespace botsim {

struct ChurnConfig {
  bool enabled = true;
  SimTime mean_online = 6.0 * 3600.0;
  SimTime mean_offline = 18.0 * 3600.0;
};

struct NoiseConfig {
  double p_loss = 0.01;
  double p_corrupt = 0.001;
};

struct CommandSchedule {
  SimTime interval = 24.0 * 3600.0;
  double seed_fraction = 0.01;
};

struct SimConfig {
  std::uint32_t n_bots = 1000;
  std::uint32_t n_sensors = 10;
  SensorStrategy sensor_strategy = SensorStrategy::EchoSameId;
  ProtocolParams protocol;  // includes trust model + enable flag
  SimTime duration = 14.0 * 24.0 * 3600.0;
  SimTime latency = 1.0;
  ChurnConfig churn;
  NoiseConfig noise;
  CommandSchedule schedule;
  std::uint64_t seed = 0;
  std::uint32_t announcement_k = 25;
};

inline void validate(const SimConfig& c) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid config: " + what);
  };
  if (c.n_bots < 2) fail("n_bots must be >= 2");
  if (c.n_sensors > c.n_bots) fail("n_sensors must be <= n_bots");
  if (c.duration <= 0 || c.protocol.mm_cycle <= 0 || c.schedule.interval <= 0 ||
      c.churn.mean_online <= 0 || c.churn.mean_offline <= 0)
    fail("durations must be > 0");
  for (double p : {c.noise.p_loss, c.noise.p_corrupt, c.protocol.bcs_rate,
                   c.schedule.seed_fraction, c.protocol.trust.base_rate,
                   c.protocol.trust.initial_f})
    if (p < 0.0 || p > 1.0) fail("probabilities must be in [0,1]");
  if (c.protocol.nl_low_watermark > c.protocol.nl_capacity)
    fail("nl_low_watermark must be <= nl_capacity");
  if (c.protocol.nl_low_watermark > c.n_bots - 1)
    fail("nl_low_watermark unsatisfiable for this population");
  if (c.protocol.delta_min > c.protocol.delta_max)
    fail("delta_min must be <= delta_max");
  if (c.protocol.trust.min_experiences < 1) fail("min_experiences must be >= 1");
  if (c.protocol.trust.max_evidence_N < 1) fail("max_evidence_N must be >= 1");
}

struct RunResult {
  std::vector<MetricsSample> samples;
  std::vector<BlacklistEvent> events;
  RunSummary summary;
  std::uint32_t n_sensors = 0;
  // Sensor NL entries that survived to the end despite enough recorded
  // experiences to trigger a verdict (diagnostic; 0 in noise-free runs).
  std::uint32_t ripe_sensor_entries = 0;
};

namespace detail {

enum class EventKind : std::uint8_t {
  MMTick,
  Churn,
  Deliver,
  ProbeTimeout,
  Botmaster,
  Sample,
};

struct Event {
  SimTime t = 0.0;
  std::uint64_t seq = 0;  // FIFO tiebreak at equal times
  EventKind kind = EventKind::Sample;
  std::uint32_t node = 0;   // MMTick/Churn/ProbeTimeout owner
  std::uint32_t peer = 0;   // ProbeTimeout peer
  std::uint64_t tag = 0;    // tick seq / probe seq
  Message msg;              // Deliver only
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;
  }
};

class Simulation {
public:
  explicit Simulation(const SimConfig& cfg) : cfg_(cfg) {
    validate(cfg_);
  }

  RunResult run() {
    const auto wall_start = std::chrono::steady_clock::now();
    bootstrap();
    while (!queue_.empty()) {
      Event ev = queue_.top();
      if (ev.t > cfg_.duration) break;
      queue_.pop();
      now_ = ev.t;
      dispatch(ev);
    }
    finalize();
    result_.summary.runtime_wall_clock =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      wall_start)
            .count();
    return std::move(result_);
  }

private:
  SimConfig cfg_;
  std::vector<BotState> bots_;
  std::vector<SensorState> sensors_;
  Rng net_rng_;
  Rng master_rng_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t event_seq_ = 0;
  SimTime now_ = 0.0;
  std::uint64_t global_command_id_ = 0;
  CommandState current_command_;
  std::uint64_t tp_ = 0, fp_ = 0;
  std::vector<std::vector<char>> ever_neighbor_;  // [sensor][bot]
  RunResult result_;

  bool is_sensor(NodeId id) const { return id >= cfg_.n_bots; }
  SensorState& sensor_of(NodeId id) { return sensors_[id - cfg_.n_bots]; }

  void schedule(Event ev) {
    ev.seq = ++event_seq_;
    queue_.push(std::move(ev));
  }

  void schedule_at(SimTime t, EventKind kind, std::uint32_t node = 0,
                   std::uint32_t peer = 0, std::uint64_t tag = 0) {
    Event ev;
    ev.t = t;
    ev.kind = kind;
    ev.node = node;
    ev.peer = peer;
    ev.tag = tag;
    schedule(std::move(ev));
  }

  // Transport: classifies every message as lost, corrupted-delivered, or
  // delivered, exactly once, at send time.
  void send(Message msg) {
    ++result_.summary.messages_sent;
    if (net_rng_.chance(cfg_.noise.p_loss)) {
      ++result_.summary.messages_lost;
      return;
    }
    CommandState* payload = nullptr;
    if (auto* r = std::get_if<HelloReply>(&msg.body); r && r->update)
      payload = &*r->update;
    else if (auto* u = std::get_if<CommandUpdate>(&msg.body))
      payload = &u->command;
    if (payload && net_rng_.chance(cfg_.noise.p_corrupt)) {
      corrupt_payload(*payload);
      ++result_.summary.messages_corrupted;
    } else {
      ++result_.summary.messages_delivered;
    }
    Event ev;
    ev.t = now_ + cfg_.latency;
    ev.kind = EventKind::Deliver;
    ev.msg = std::move(msg);
    schedule(std::move(ev));
  }

  void send_all(std::vector<Message> msgs) {
    for (auto& m : msgs) send(std::move(m));
  }

  void bootstrap() {
    master_rng_.reseed(stream_seed(cfg_.seed, 0xB007));
    net_rng_.reseed(stream_seed(cfg_.seed, 0x7E7));

    bots_.resize(cfg_.n_bots);
    for (std::uint32_t i = 0; i < cfg_.n_bots; ++i) {
      auto& b = bots_[i];
      b.id = i;
      b.rng.reseed(stream_seed(cfg_.seed, i + 1));
      b.command = make_command(0);
    }
    sensors_.resize(cfg_.n_sensors);
    for (std::uint32_t i = 0; i < cfg_.n_sensors; ++i) {
      auto& s = sensors_[i];
      s.id = cfg_.n_bots + i;
      s.strategy = cfg_.sensor_strategy;
      s.rng.reseed(stream_seed(cfg_.seed, 0x5E50000ULL + i));
    }
    ever_neighbor_.assign(cfg_.n_sensors,
                          std::vector<char>(cfg_.n_bots, 0));
    current_command_ = make_command(0);

    // Random overlay at watermark degree.
    for (auto& b : bots_) {
      while (b.nl.size() < cfg_.protocol.nl_low_watermark) {
        const NodeId peer =
            static_cast<NodeId>(master_rng_.below(cfg_.n_bots));
        if (peer == b.id || b.find_neighbor(peer)) continue;
        b.nl.push_back(NeighborEntry{peer, 0.0, {}, std::nullopt, false});
      }
    }

    // Stationary churn state plus first transition.
    const double p_online =
        cfg_.churn.enabled
            ? cfg_.churn.mean_online /
                  (cfg_.churn.mean_online + cfg_.churn.mean_offline)
            : 1.0;
    for (auto& b : bots_) {
      b.online = !cfg_.churn.enabled || b.rng.chance(p_online);
      if (cfg_.churn.enabled) {
        const double mean =
            b.online ? cfg_.churn.mean_online : cfg_.churn.mean_offline;
        schedule_at(b.rng.exponential(mean), EventKind::Churn, b.id);
      }
      if (b.online) {
        b.tick_seq = 1;
        schedule_at(b.rng.uniform() * cfg_.protocol.mm_cycle, EventKind::MMTick,
                    b.id, 0, b.tick_seq);
      }
    }

    // Sensors announce themselves to the online population.
    std::vector<NodeId> online_ids;
    for (const auto& b : bots_)
      if (b.online) online_ids.push_back(b.id);
    for (auto& s : sensors_)
      send_all(sensor_join(s, online_ids, cfg_.announcement_k, 0.0));

    for (SimTime t = cfg_.schedule.interval; t <= cfg_.duration;
         t += cfg_.schedule.interval)
      schedule_at(t, EventKind::Botmaster);

    SimTime t = 0.0;
    for (; t <= cfg_.duration; t += cfg_.protocol.mm_cycle)
      schedule_at(t, EventKind::Sample);
    if (t - cfg_.protocol.mm_cycle < cfg_.duration)
      schedule_at(cfg_.duration, EventKind::Sample);
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::MMTick: on_tick(ev); break;
      case EventKind::Churn: on_churn(ev); break;
      case EventKind::Deliver: on_deliver(ev.msg); break;
      case EventKind::ProbeTimeout: on_probe_timeout(ev); break;
      case EventKind::Botmaster: on_botmaster(); break;
      case EventKind::Sample: on_sample(); break;
    }
  }

  void on_tick(const Event& ev) {
    auto& b = bots_[ev.node];
    if (b.tick_seq != ev.tag) return;  // superseded by a rejoin
    if (!b.online) return;             // rejoin reschedules
    send_all(mm_cycle_tick(b, now_, cfg_.protocol));
    schedule_at(now_ + cfg_.protocol.mm_cycle, EventKind::MMTick, b.id, 0,
                b.tick_seq);
  }

  void on_churn(const Event& ev) {
    auto& b = bots_[ev.node];
    if (b.online) {
      go_offline(b);
      schedule_at(now_ + b.rng.exponential(cfg_.churn.mean_offline),
                  EventKind::Churn, b.id);
    } else {
      go_online(b, now_);
      ++b.tick_seq;  // immediate membership round on rejoin
      schedule_at(now_, EventKind::MMTick, b.id, 0, b.tick_seq);
      schedule_at(now_ + b.rng.exponential(cfg_.churn.mean_online),
                  EventKind::Churn, b.id);
    }
  }

  void on_probe_timeout(const Event& ev) {
    auto& b = bots_[ev.node];
    if (auto event = handle_probe_timeout(b, ev.peer, ev.tag, now_,
                                          cfg_.protocol))
      record_blacklist(*event);
  }

  void on_botmaster() {
    ++global_command_id_;
    current_command_ = make_command(global_command_id_);
    // Direct state injection into a fixed-size uniform sample of bots.
    std::uint32_t k = static_cast<std::uint32_t>(
        std::llround(cfg_.schedule.seed_fraction * cfg_.n_bots));
    if (k < 1) k = 1;
    if (k > cfg_.n_bots) k = cfg_.n_bots;
    std::vector<NodeId> pool(cfg_.n_bots);
    for (std::uint32_t i = 0; i < cfg_.n_bots; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto j = i + master_rng_.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      bots_[pool[i]].command = current_command_;
    }
  }

  void record_blacklist(BlacklistEvent ev) {
    ev.target_is_sensor = is_sensor(ev.target);
    if (ev.target_is_sensor)
      ++tp_;
    else
      ++fp_;
    result_.events.push_back(ev);
  }

  void on_deliver(const Message& msg) {
    if (is_sensor(msg.receiver)) {
      deliver_to_sensor(msg);
      return;
    }
    auto& b = bots_[msg.receiver];
    if (!b.online) return;
    if (b.blacklisted(msg.sender)) return;
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, Hello>) {
            if (auto reply = handle_hello(b, msg.sender, body, now_, cfg_.protocol))
              send(std::move(*reply));
          } else if constexpr (std::is_same_v<T, HelloReply>) {
            auto res =
                handle_hello_reply(b, msg.sender, body, now_, cfg_.protocol);
            if (res.event) record_blacklist(*res.event);
            if (res.followup) {
              if (res.bcs_sent)
                schedule_at(now_ + cfg_.protocol.response_timeout,
                            EventKind::ProbeTimeout, b.id, msg.sender,
                            b.probe_seq);
              send(std::move(*res.followup));
            }
          } else if constexpr (std::is_same_v<T, NLRequest>) {
            send(handle_nl_request(b, msg.sender, now_, cfg_.protocol));
          } else if constexpr (std::is_same_v<T, NLReply>) {
            handle_nl_reply(b, msg.sender, body, now_, cfg_.protocol);
          } else if constexpr (std::is_same_v<T, CommandUpdate>) {
            handle_command_update(b, body.command);
          }
        },
        msg.body);
  }

  void deliver_to_sensor(const Message& msg) {
    auto& s = sensor_of(msg.receiver);
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, Hello>) {
            if (auto reply = sensor_handle_hello(s, msg.sender, body, now_))
              send(std::move(*reply));
          } else if constexpr (std::is_same_v<T, HelloReply>) {
            sensor_handle_reply(s, msg.sender, body, now_);
          } else if constexpr (std::is_same_v<T, NLRequest>) {
            send(sensor_handle_nl_request(s, msg.sender, now_,
                                          cfg_.protocol.nl_reply_max));
          } else if constexpr (std::is_same_v<T, NLReply>) {
            s.observe(msg.sender, now_);
          } else if constexpr (std::is_same_v<T, CommandUpdate>) {
            s.observe(msg.sender, now_);
            s.observe_id(body.command.command_id);
          }
        },
        msg.body);
  }

  void on_sample() {
    MetricsSample s;
    s.time = now_;
    s.per_sensor_in_degree.assign(cfg_.n_sensors, 0);
    std::uint32_t online = 0, isolated = 0, covered = 0;
    for (const auto& b : bots_) {
      if (b.online) {
        ++online;
        if (b.nl.empty()) ++isolated;
        if (b.command.command_id == global_command_id_) ++covered;
      }
      for (const auto& e : b.nl) {
        if (is_sensor(e.peer)) {
          const auto idx = e.peer - cfg_.n_bots;
          ++s.per_sensor_in_degree[idx];
          ever_neighbor_[idx][b.id] = 1;
        }
      }
    }
    std::uint64_t total = 0;
    for (auto d : s.per_sensor_in_degree) total += d;
    s.mean_sensor_in_degree =
        cfg_.n_sensors ? static_cast<double>(total) / cfg_.n_sensors : 0.0;
    s.blacklist_tp = tp_;
    s.blacklist_fp = fp_;
    s.online_bots = online;
    s.isolated_bots = isolated;
    s.newest_command_coverage =
        online ? static_cast<double>(covered) / online : 1.0;
    result_.samples.push_back(std::move(s));
  }

  void finalize() {
    result_.n_sensors = cfg_.n_sensors;
    for (const auto& b : bots_)
      for (const auto& e : b.nl)
        if (is_sensor(e.peer) &&
            e.evidence.total() >= cfg_.protocol.trust.min_experiences)
          ++result_.ripe_sensor_entries;
    auto& sum = result_.summary;
    sum.final_mean_sensor_in_degree =
        result_.samples.empty() ? 0.0
                                : result_.samples.back().mean_sensor_in_degree;
    sum.total_blacklist_events = result_.events.size();
    if (tp_ + fp_ > 0)
      sum.precision = static_cast<double>(tp_) / (tp_ + fp_);
    // Recall: blacklisted (bot, sensor) pairs over pairs that ever held the
    // sensor as a neighbor.
    for (const auto& ev : result_.events)
      if (ev.target_is_sensor)
        ever_neighbor_[ev.target - cfg_.n_bots][ev.observer] = 1;
    std::uint64_t ever = 0;
    for (const auto& row : ever_neighbor_)
      for (char c : row) ever += c;
    if (ever > 0) sum.recall = static_cast<double>(tp_) / ever;
  }
};

}  // namespace detail

// Deterministic function of the config: identical configs (including the
// seed) produce identical samples and events.
inline RunResult run(const SimConfig& config) {
  detail::Simulation sim(config);
  return sim.run();
}

}  // namespace botsim
