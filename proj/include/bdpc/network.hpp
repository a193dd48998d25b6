#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bdpc/core.hpp"
#include "bdpc/events.hpp"
#include "bdpc/metrics.hpp"
#include "bdpc/node.hpp"
#include "bdpc/topology.hpp"

namespace bdpc {

// Whole simulated network plus the single per-run random stream. The slot
// engine is the only writer of node state; everything else is called from it.
struct Network {
  SimConfig config;
  Topology topology;
  std::vector<Node> nodes;
  std::mt19937_64 rng;
  EventLog log;
  MetricsSink metrics;
  Asn asn = 0;
  std::uint64_t nextTransactionId = 1;

  explicit Network(const SimConfig& cfg, std::uint64_t seed);

  Node& node(NodeId id) { return nodes[id]; }
  const Node& node(NodeId id) const { return nodes[id]; }
  Asn slotframeIndex() const { return asn / config.slotframeLength; }

  double linkPdr(NodeId a, NodeId b) const { return topology.link(a, b).pdr; }
  bool bernoulliPdr(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  }
};

// Advance the network by exactly one slot.
void runSlot(Network& net);

// Advance to the end of the current slotframe.
void runSlotframe(Network& net);

// Enqueue helpers with drop accounting.
bool enqueueData(Network& net, Node& node, const DataPacket& packet);
bool enqueueControl(Network& net, Node& node, Frame frame);

// Mark run-end leftovers in queues for PDR trimming.
void flagStuckPackets(Network& net);

}  // namespace bdpc
