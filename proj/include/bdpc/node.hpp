#pragma once

#include <cstdint>

#include "bdpc/core.hpp"
#include "bdpc/energy.hpp"
#include "bdpc/frame.hpp"
#include "bdpc/rpl.hpp"
#include "bdpc/schedule.hpp"
#include "bdpc/sf.hpp"
#include "bdpc/sixp.hpp"

namespace bdpc {

struct TrafficState {
  bool active = false;
  Asn nextEmitAsn = 0;
  std::uint32_t nextSequence = 0;
};

// Conservation counters, data frames only.
struct FlowCounters {
  std::uint64_t generated = 0;
  std::uint64_t received = 0;   // data frames delivered to this node
  std::uint64_t sentOut = 0;    // data frames acked away from this node
  std::uint64_t droppedQueue = 0;
  std::uint64_t droppedRetry = 0;
  std::uint64_t sunk = 0;       // data frames terminating here (root)
};

struct Node {
  NodeId id = kNoNode;
  NodeRole role = NodeRole::Intermediate;
  bool joined = false;
  Asn joinAsn = 0;

  ScheduleMatrix schedule;
  TxQueue queue;
  RplState rpl;
  SixpState sixp;
  SfState sf;
  EnergyMeter energy;
  TrafficState traffic;
  FlowCounters flow;

  std::uint32_t sharedBackoff = 0;  // minimal-cell occurrences to sit out

  bool isRoot() const { return role == NodeRole::Root; }
};

}  // namespace bdpc
