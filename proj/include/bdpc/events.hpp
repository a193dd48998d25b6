#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdpc/core.hpp"

namespace bdpc {

enum class EventType : std::uint8_t {
  PacketGenerated,
  PacketHop,
  PacketAtRoot,
  QueueDrop,
  RetryDrop,
  DioSent,
  DioReceived,
  SharedCollision,
  Joined,
  ParentChanged,
  DelayToRootUpdated,
  SixpComplete,
  SixpFailed,
  SixpBusy,
  SixpNoFreeCells,
  CellInstalled,
  CellRemoved,
  MsfDecision,
  BdpcDecision,
};

const char* eventTypeName(EventType t);

struct Event {
  EventType type;
  Asn asn;
  NodeId node;
  std::string details;
};

class EventLog {
 public:
  void record(EventType type, Asn asn, NodeId node, std::string details) {
    events_.push_back({type, asn, node, std::move(details)});
  }
  const std::vector<Event>& events() const { return events_; }
  std::size_t count(EventType type) const {
    std::size_t n = 0;
    for (const Event& e : events_) {
      if (e.type == type) ++n;
    }
    return n;
  }
  void writeCsv(const std::string& path) const;

 private:
  std::vector<Event> events_;
};

}  // namespace bdpc
