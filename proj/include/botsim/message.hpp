#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "botsim/rng.hpp"

namespace botsim {

using NodeId = std::uint32_t;
using SimTime = double;  // seconds of simulated time

// Botmaster instruction set. The payload is an opaque blob; the checksum
// stands in for Sality's signature validation.
struct CommandState {
  std::uint64_t command_id = 0;
  std::array<std::uint8_t, 16> payload{};
  std::uint32_t checksum = 0;

  bool operator==(const CommandState&) const = default;
};

inline std::uint32_t fnv1a(const std::uint8_t* data, std::size_t len) {
  std::uint32_t h = 2166136261u;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 16777619u;
  }
  return h;
}

inline bool checksum_valid(const CommandState& cs) {
  return fnv1a(cs.payload.data(), cs.payload.size()) == cs.checksum;
}

// Deterministic payload for a given command id.
inline CommandState make_command(std::uint64_t id) {
  CommandState cs;
  cs.command_id = id;
  std::uint64_t sm = id * 0x9e3779b97f4a7c15ULL + 0xabcdef12u;
  for (std::size_t i = 0; i < cs.payload.size(); i += 8) {
    std::uint64_t w = splitmix64(sm);
    for (std::size_t j = 0; j < 8 && i + j < cs.payload.size(); ++j)
      cs.payload[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
  }
  cs.checksum = fnv1a(cs.payload.data(), cs.payload.size());
  return cs;
}

// Flips one payload byte so the checksum no longer matches.
inline void corrupt_payload(CommandState& cs) { cs.payload[0] ^= 0xff; }

struct Hello {
  std::uint64_t claimed_command_id = 0;
};

struct HelloReply {
  std::uint64_t command_id = 0;
  std::optional<CommandState> update;
};

struct NLRequest {};

struct NLReply {
  std::vector<NodeId> peers;
};

struct CommandUpdate {
  CommandState command;
};

using MessageBody =
    std::variant<Hello, HelloReply, NLRequest, NLReply, CommandUpdate>;

struct Message {
  NodeId sender = 0;
  NodeId receiver = 0;
  SimTime sent_at = 0.0;
  MessageBody body;
};

// --- wire format -----------------------------------------------------------
// Length-prefixed little-endian layout: tag byte, sender, receiver,
// sent-at (milliseconds, u64), then the body fields. A BCS probe carries no
// marker of any kind: it serializes exactly like a plain Hello.

namespace wire {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_command(std::vector<std::uint8_t>& out, const CommandState& cs) {
  put_u64(out, cs.command_id);
  put_u32(out, static_cast<std::uint32_t>(cs.payload.size()));
  out.insert(out.end(), cs.payload.begin(), cs.payload.end());
  put_u32(out, cs.checksum);
}

}  // namespace wire

inline std::vector<std::uint8_t> serialize(const Message& msg) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(msg.body.index()));
  wire::put_u32(out, msg.sender);
  wire::put_u32(out, msg.receiver);
  wire::put_u64(out, static_cast<std::uint64_t>(msg.sent_at * 1000.0));
  std::visit(
      [&out](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Hello>) {
          wire::put_u64(out, b.claimed_command_id);
        } else if constexpr (std::is_same_v<T, HelloReply>) {
          wire::put_u64(out, b.command_id);
          out.push_back(b.update ? 1 : 0);
          if (b.update) wire::put_command(out, *b.update);
        } else if constexpr (std::is_same_v<T, NLRequest>) {
          // no body
        } else if constexpr (std::is_same_v<T, NLReply>) {
          wire::put_u32(out, static_cast<std::uint32_t>(b.peers.size()));
          for (NodeId p : b.peers) wire::put_u32(out, p);
        } else if constexpr (std::is_same_v<T, CommandUpdate>) {
          wire::put_command(out, b.command);
        }
      },
      msg.body);
  return out;
}

}  // namespace botsim
