#pragma once

#include <cstdint>
#include <map>

#include "bdpc/core.hpp"

namespace bdpc {

struct Network;
struct Node;

struct NeighborRecord {
  std::uint32_t rank = 0;
  std::int64_t delayToRootSlots = 0;
  bool delayKnown = false;
  Asn lastHeardAsn = 0;
};

struct RplState {
  std::uint32_t rank = 0;
  NodeId parent = kNoNode;
  std::uint32_t parentRank = 0;
  std::int64_t delayToRootSlots = 0;
  bool delayKnown = false;
  std::map<NodeId, NeighborRecord> neighbors;
  Asn nextDioAsn = 0;
  bool dioScheduled = false;
};

// Queue (or refresh in place) this node's periodic DIO broadcast.
void emitDio(Network& net, Node& node);

// Neighbor-table update, timing inheritance from the preferred parent, and
// parent re-selection on every received DIO.
void processDio(Network& net, Node& node, const DioMessage& dio, Asn receiveAsn);

// Pure selection rule: best candidate by (rank, id) with switch hysteresis.
// Returns the parent the node should have after evaluation.
NodeId chooseParent(const Node& node, std::uint32_t rankHysteresis);

// Next scheduled emission, one period after the previous one with seeded
// +-jitter. Called at join and after each emission.
Asn scheduleNextDio(Network& net, Node& node, Asn fromAsn);

}  // namespace bdpc
