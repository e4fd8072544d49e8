#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "botsim/bot.hpp"
#include "botsim/message.hpp"

namespace botsim {

enum class SensorStrategy { EchoSameId, Silent, CorruptPayload };

inline const char* strategy_name(SensorStrategy s) {
  switch (s) {
    case SensorStrategy::EchoSameId: return "echo";
    case SensorStrategy::Silent: return "silent";
    case SensorStrategy::CorruptPayload: return "corrupt";
  }
  return "?";
}

// Monitoring node. Always online, never initiates contact after the join
// announcements, and never ships a usable command update.
struct SensorState {
  NodeId id = 0;
  SensorStrategy strategy = SensorStrategy::EchoSameId;
  std::unordered_map<NodeId, SimTime> observed_peers;  // peer -> first seen
  std::vector<NodeId> observed_order;                  // stable iteration
  std::uint64_t observed_max_id = 0;
  Rng rng;

  void observe(NodeId peer, SimTime now) {
    if (observed_peers.emplace(peer, now).second) observed_order.push_back(peer);
  }
  void observe_id(std::uint64_t command_id) {
    observed_max_id = std::max(observed_max_id, command_id);
  }
};

// Strategy responses to a hello. A hello that claims less than the newest
// id the sensor has seen is owed an update the sensor must not provide.
inline std::optional<Message> sensor_handle_hello(SensorState& sensor,
                                                 NodeId sender,
                                                 const Hello& hello,
                                                 SimTime now) {
  sensor.observe(sender, now);
  sensor.observe_id(hello.claimed_command_id);
  switch (sensor.strategy) {
    case SensorStrategy::EchoSameId:
      return make_msg(sensor.id, sender, now,
                      HelloReply{hello.claimed_command_id, std::nullopt});
    case SensorStrategy::Silent:
      if (hello.claimed_command_id >= sensor.observed_max_id)
        return make_msg(sensor.id, sender, now,
                        HelloReply{hello.claimed_command_id, std::nullopt});
      return std::nullopt;
    case SensorStrategy::CorruptPayload: {
      HelloReply reply{sensor.observed_max_id, std::nullopt};
      if (hello.claimed_command_id < sensor.observed_max_id) {
        CommandState fake = make_command(sensor.observed_max_id);
        corrupt_payload(fake);  // checksum left stale on purpose
        reply.update = fake;
      }
      return make_msg(sensor.id, sender, now, std::move(reply));
    }
  }
  return std::nullopt;
}

// Sensors cooperate with peer exchange but only ever return ids they have
// actually observed.
inline Message sensor_handle_nl_request(SensorState& sensor, NodeId sender,
                                        SimTime now, std::uint32_t reply_max) {
  sensor.observe(sender, now);
  NLReply reply;
  std::vector<std::uint32_t> idx;
  for (std::uint32_t i = 0; i < sensor.observed_order.size(); ++i)
    if (sensor.observed_order[i] != sender) idx.push_back(i);
  while (!idx.empty() && reply.peers.size() < reply_max) {
    const auto k = sensor.rng.below(idx.size());
    reply.peers.push_back(sensor.observed_order[idx[k]]);
    idx[k] = idx.back();
    idx.pop_back();
  }
  return make_msg(sensor.id, sender, now, std::move(reply));
}

inline void sensor_handle_reply(SensorState& sensor, NodeId sender,
                                const HelloReply& reply, SimTime now) {
  sensor.observe(sender, now);
  sensor.observe_id(reply.command_id);
  if (reply.update) sensor.observe_id(reply.update->command_id);
}

// Hello announcements to k distinct population members; receivers with NL
// room adopt the sensor, which is what gives it its initial in-degree.
inline std::vector<Message> sensor_join(SensorState& sensor,
                                        const std::vector<NodeId>& population,
                                        std::uint32_t k, SimTime now) {
  std::vector<Message> out;
  if (population.empty() || k == 0) return out;
  std::vector<NodeId> pool = population;
  while (!pool.empty() && out.size() < k) {
    const auto i = sensor.rng.below(pool.size());
    out.push_back(make_msg(sensor.id, pool[i], now,
                           Hello{sensor.observed_max_id}));
    pool[i] = pool.back();
    pool.pop_back();
  }
  return out;
}

}  // namespace botsim
