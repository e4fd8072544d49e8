#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "botsim/message.hpp"
#include "botsim/rng.hpp"
#include "botsim/trust.hpp"

namespace botsim {

struct ProtocolParams {
  SimTime mm_cycle = 40.0 * 60.0;
  SimTime inactivity_timeout = 3.0 * 40.0 * 60.0;
  SimTime response_timeout = 60.0;
  std::uint32_t nl_capacity = 50;
  std::uint32_t nl_low_watermark = 35;
  std::uint32_t nl_reply_max = 10;
  double bcs_rate = 0.25;
  std::uint64_t delta_min = 5;
  std::uint64_t delta_max = 20;
  bool trust_enabled = true;
  trust::TrustParams trust;

  // Neighbors heard from within this window count as responsive.
  SimTime responsive_window() const { return 1.5 * mm_cycle; }
};

// Outstanding BCS probe. Wire-wise the probe was a plain Hello; only this
// local record marks it as a probe.
struct PendingProbe {
  SimTime sent_at = 0.0;
  std::uint64_t claimed_id = 0;
  std::uint64_t real_id_at_send = 0;
  bool is_bcs = true;
  std::uint64_t seq = 0;  // matches the scheduled timeout event
};

struct NeighborEntry {
  NodeId peer = 0;
  SimTime last_seen = 0.0;
  trust::EvidenceRecord evidence;
  std::optional<PendingProbe> pending_probe;
  bool bcs_queued = false;  // probe follows the next hello reply this cycle
};

struct BlacklistEvent {
  NodeId observer = 0;
  NodeId target = 0;
  SimTime time = 0.0;
  double score = 0.0;
  bool target_is_sensor = false;  // filled in by the engine (ground truth)
};

struct BotState {
  NodeId id = 0;
  std::vector<NeighborEntry> nl;
  std::unordered_set<NodeId> blacklist;
  CommandState command;
  bool online = true;
  bool isolated = false;
  Rng rng;
  std::uint64_t probe_seq = 0;
  std::uint64_t tick_seq = 0;

  NeighborEntry* find_neighbor(NodeId peer) {
    for (auto& e : nl)
      if (e.peer == peer) return &e;
    return nullptr;
  }
  bool blacklisted(NodeId peer) const { return blacklist.count(peer) > 0; }
};

inline bool neighbor_responsive(const NeighborEntry& e, SimTime now,
                                const ProtocolParams& p) {
  return now - e.last_seen <= p.responsive_window();
}

// Adds `peer` to the NL when there is room and it is not self, a
// duplicate, or blacklisted.
inline bool adopt_neighbor(BotState& bot, NodeId peer, SimTime now,
                           const ProtocolParams& p) {
  if (peer == bot.id || bot.blacklisted(peer)) return false;
  if (bot.nl.size() >= p.nl_capacity) return false;
  if (bot.find_neighbor(peer)) return false;
  bot.nl.push_back(NeighborEntry{peer, now, {}, std::nullopt, false});
  return true;
}

inline std::uint64_t draw_delta(Rng& rng, const ProtocolParams& p) {
  return rng.between(p.delta_min, p.delta_max);
}

// Lowered command id advertised in a BCS probe.
inline std::uint64_t make_bcs_claim(std::uint64_t real_id, std::uint64_t delta) {
  return real_id > delta ? real_id - delta : 0;
}

inline Message make_msg(NodeId from, NodeId to, SimTime now, MessageBody body) {
  return Message{from, to, now, std::move(body)};
}

// Drops neighbors unresponsive past the inactivity timeout and, when the
// NL falls below the watermark, asks one responsive neighbor for peers.
inline std::vector<Message> replace_inactive_neighbors(BotState& bot, SimTime now,
                                                       const ProtocolParams& p) {
  std::vector<Message> out;
  if (!bot.online) return out;
  std::erase_if(bot.nl, [&](const NeighborEntry& e) {
    return now - e.last_seen >= p.inactivity_timeout;
  });
  if (bot.nl.size() < p.nl_low_watermark) {
    std::vector<std::uint32_t> responsive;
    for (std::uint32_t i = 0; i < bot.nl.size(); ++i)
      if (neighbor_responsive(bot.nl[i], now, p)) responsive.push_back(i);
    if (!responsive.empty()) {
      const auto& target = bot.nl[responsive[bot.rng.below(responsive.size())]];
      out.push_back(make_msg(bot.id, target.peer, now, NLRequest{}));
    }
  }
  return out;
}

// One membership-management round: evict stale entries, hello every
// remaining neighbor, and pick the subset to BCS-probe once their reply
// confirms them alive. Probing needs a real command to leak, so it stays
// off until the first botmaster instruction arrives.
inline std::vector<Message> mm_cycle_tick(BotState& bot, SimTime now,
                                          const ProtocolParams& p) {
  std::vector<Message> out;
  if (!bot.online) return out;
  out = replace_inactive_neighbors(bot, now, p);
  bot.isolated = bot.nl.empty();
  for (auto& e : bot.nl) {
    e.bcs_queued = false;  // last cycle's selection expires
    out.push_back(make_msg(bot.id, e.peer, now, Hello{bot.command.command_id}));
    if (p.trust_enabled && bot.command.command_id > 0 && !e.pending_probe &&
        bot.rng.chance(p.bcs_rate)) {
      e.bcs_queued = true;
    }
  }
  return out;
}

// Adopts a newer, checksum-valid instruction set.
inline bool handle_command_update(BotState& bot, const CommandState& upd) {
  if (!bot.online) return false;
  if (upd.command_id <= bot.command.command_id) return false;
  if (!checksum_valid(upd)) return false;
  bot.command = upd;
  return true;
}

inline std::optional<Message> handle_hello(BotState& bot, NodeId sender,
                                           const Hello& hello, SimTime now,
                                           const ProtocolParams& p) {
  if (!bot.online || bot.blacklisted(sender)) return std::nullopt;
  if (auto* e = bot.find_neighbor(sender))
    e->last_seen = now;
  else
    adopt_neighbor(bot, sender, now, p);
  HelloReply reply{bot.command.command_id, std::nullopt};
  if (bot.command.command_id > hello.claimed_command_id)
    reply.update = bot.command;
  return make_msg(bot.id, sender, now, std::move(reply));
}

// Classification of the evidence gathered by one BCS probe. Positive only
// for a reply carrying a current command id plus a checksum-valid update.
inline trust::Outcome classify_bcs_response(const PendingProbe& probe,
                                            const HelloReply* reply,
                                            std::uint64_t real_id_at_send) {
  (void)probe;
  if (!reply) return trust::Outcome::Negative;
  if (reply->command_id < real_id_at_send) return trust::Outcome::Negative;
  if (!reply->update) return trust::Outcome::Negative;
  if (!checksum_valid(*reply->update)) return trust::Outcome::Negative;
  return trust::Outcome::Positive;
}

// Records the experience and blacklists the peer once the configured
// trust model says so.
inline std::optional<BlacklistEvent> apply_bcs_outcome(BotState& bot, NodeId peer,
                                                       trust::Outcome outcome,
                                                       SimTime now,
                                                       const ProtocolParams& p) {
  auto* e = bot.find_neighbor(peer);
  if (!e) return std::nullopt;
  e->evidence = trust::record_experience(e->evidence, outcome);
  const auto verdict = trust::is_untrusted(e->evidence, p.trust);
  if (!verdict.untrusted) return std::nullopt;
  std::erase_if(bot.nl, [peer](const NeighborEntry& n) { return n.peer == peer; });
  bot.blacklist.insert(peer);
  return BlacklistEvent{bot.id, peer, now, verdict.score, false};
}

struct HelloReplyResult {
  std::optional<Message> followup;  // BCS probe or command push
  std::optional<BlacklistEvent> event;
  bool bcs_sent = false;
};

inline HelloReplyResult handle_hello_reply(BotState& bot, NodeId sender,
                                           const HelloReply& reply, SimTime now,
                                           const ProtocolParams& p) {
  HelloReplyResult res;
  if (!bot.online || bot.blacklisted(sender)) return res;
  auto* e = bot.find_neighbor(sender);
  if (!e) return res;
  e->last_seen = now;

  if (e->pending_probe) {
    // This reply answers an outstanding BCS probe.
    const auto probe = *e->pending_probe;
    e->pending_probe.reset();
    const auto outcome = classify_bcs_response(probe, &reply, probe.real_id_at_send);
    res.event = apply_bcs_outcome(bot, sender, outcome, now, p);
    return res;
  }

  if (reply.update) handle_command_update(bot, *reply.update);
  if (reply.command_id > bot.command.command_id) {
    // Still behind (the attached update was missing or unusable); skip the
    // probe and wait for the next cycle to catch up.
    e->bcs_queued = false;
    return res;
  }
  if (reply.command_id < bot.command.command_id) {
    // The peer is behind, so push the instruction set directly. NLs are
    // asymmetric: an update attached to our next hello reply would be
    // dropped whenever the peer does not track us back.
    res.followup = make_msg(bot.id, sender, now, CommandUpdate{bot.command});
    return res;
  }

  if (e->bcs_queued) {
    e->bcs_queued = false;
    // Probe only a peer that advertises exactly our command id: anyone
    // behind is still catching up and cannot pass, anyone we just heard
    // is alive right now.
    if (reply.command_id == bot.command.command_id &&
        bot.command.command_id > 0 && !e->pending_probe) {
      const std::uint64_t claim =
          make_bcs_claim(bot.command.command_id, draw_delta(bot.rng, p));
      e->pending_probe = PendingProbe{now, claim, bot.command.command_id, true,
                                      ++bot.probe_seq};
      res.followup = make_msg(bot.id, sender, now, Hello{claim});
      res.bcs_sent = true;
    }
  }
  return res;
}

// No reply arrived within the response timeout.
inline std::optional<BlacklistEvent> handle_probe_timeout(BotState& bot,
                                                          NodeId peer,
                                                          std::uint64_t seq,
                                                          SimTime now,
                                                          const ProtocolParams& p) {
  if (!bot.online) return std::nullopt;
  auto* e = bot.find_neighbor(peer);
  if (!e || !e->pending_probe || e->pending_probe->seq != seq) return std::nullopt;
  const auto probe = *e->pending_probe;
  e->pending_probe.reset();
  const auto outcome = classify_bcs_response(probe, nullptr, probe.real_id_at_send);
  return apply_bcs_outcome(bot, peer, outcome, now, p);
}

inline Message handle_nl_request(BotState& bot, NodeId sender, SimTime now,
                                 const ProtocolParams& p) {
  if (auto* e = bot.find_neighbor(sender)) e->last_seen = now;
  NLReply reply;
  std::vector<std::uint32_t> responsive;
  for (std::uint32_t i = 0; i < bot.nl.size(); ++i)
    if (bot.nl[i].peer != sender && neighbor_responsive(bot.nl[i], now, p))
      responsive.push_back(i);
  // Sample without replacement up to the reply cap.
  while (!responsive.empty() && reply.peers.size() < p.nl_reply_max) {
    const auto k = bot.rng.below(responsive.size());
    reply.peers.push_back(bot.nl[responsive[k]].peer);
    responsive[k] = responsive.back();
    responsive.pop_back();
  }
  return make_msg(bot.id, sender, now, std::move(reply));
}

inline void handle_nl_reply(BotState& bot, NodeId sender, const NLReply& reply,
                            SimTime now, const ProtocolParams& p) {
  if (auto* e = bot.find_neighbor(sender)) e->last_seen = now;
  for (NodeId peer : reply.peers) adopt_neighbor(bot, peer, now, p);
}

// Going offline abandons every in-flight engagement without recording an
// experience; the NL, evidence, and blacklist survive for the next session.
inline void go_offline(BotState& bot) {
  bot.online = false;
  for (auto& e : bot.nl) {
    e.pending_probe.reset();
    e.bcs_queued = false;
  }
}

inline void go_online(BotState& bot, SimTime now) {
  bot.online = true;
  // Stale entries get a fresh chance; unresponsive ones age out again.
  for (auto& e : bot.nl) e.last_seen = now;
}

}  // namespace botsim
