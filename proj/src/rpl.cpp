#include <cmath>

#include "bdpc/network.hpp"
#include "bdpc/rpl.hpp"
#include "bdpc/sf.hpp"

namespace bdpc {

namespace {

Asn drawFirstEmitGap(Network& net) {
  std::normal_distribution<double> gap(net.config.packetPeriodS,
                                       net.config.packetPeriodStdS);
  double seconds = gap(net.rng);
  auto slots = static_cast<std::int64_t>(std::llround(seconds / net.config.slotDurationS));
  return static_cast<Asn>(std::max<std::int64_t>(1, slots));
}

}  // namespace

Asn scheduleNextDio(Network& net, Node& node, Asn fromAsn) {
  std::int64_t jitter = 0;
  if (net.config.dioJitterSlots > 0) {
    std::uniform_int_distribution<std::int64_t> d(
        -static_cast<std::int64_t>(net.config.dioJitterSlots),
        static_cast<std::int64_t>(net.config.dioJitterSlots));
    jitter = d(net.rng);
  }
  auto next = static_cast<std::int64_t>(fromAsn) +
              static_cast<std::int64_t>(net.config.dioPeriodSlots) + jitter;
  node.rpl.nextDioAsn = static_cast<Asn>(std::max<std::int64_t>(1, next));
  node.rpl.dioScheduled = true;
  return node.rpl.nextDioAsn;
}

void emitDio(Network& net, Node& node) {
  DioMessage dio;
  dio.sender = node.id;
  dio.rank = node.rpl.rank;
  dio.delayToRootSlots = node.rpl.delayToRootSlots;
  dio.delayKnown = node.rpl.delayKnown;
  dio.creationAsn = net.asn;

  // At most one advertisement waits in the queue; a newer one replaces it.
  bool superseded = false;
  for (Frame& f : node.queue.frames()) {
    if (f.kind == FrameKind::Dio) {
      f.payload = dio;
      f.retryCount = 0;
      superseded = true;
      break;
    }
  }
  if (!superseded) {
    Frame f;
    f.kind = FrameKind::Dio;
    f.dst = kBroadcastId;
    f.payload = dio;
    enqueueControl(net, node, std::move(f));
  }
  scheduleNextDio(net, node, net.asn);
}

NodeId chooseParent(const Node& node, std::uint32_t rankHysteresis) {
  NodeId bestId = kNoNode;
  std::uint32_t bestRank = 0;
  for (const auto& [id, rec] : node.rpl.neighbors) {
    if (node.joined && rec.rank >= node.rpl.rank) continue;
    if (bestId == kNoNode || rec.rank < bestRank ||
        (rec.rank == bestRank && id < bestId)) {
      bestId = id;
      bestRank = rec.rank;
    }
  }
  if (bestId == kNoNode) return node.rpl.parent;
  if (node.rpl.parent == kNoNode) return bestId;
  if (bestId == node.rpl.parent) return node.rpl.parent;
  auto current = node.rpl.neighbors.find(node.rpl.parent);
  std::uint32_t currentRank =
      current != node.rpl.neighbors.end() ? current->second.rank : node.rpl.parentRank;
  if (currentRank >= bestRank && currentRank - bestRank >= rankHysteresis) {
    return bestId;
  }
  return node.rpl.parent;
}

void processDio(Network& net, Node& node, const DioMessage& dio, Asn receiveAsn) {
  NeighborRecord& rec = node.rpl.neighbors[dio.sender];
  rec.rank = dio.rank;
  rec.delayToRootSlots = dio.delayToRootSlots;
  rec.delayKnown = dio.delayKnown;
  rec.lastHeardAsn = receiveAsn;

  if (node.isRoot()) return;

  // Timing state updates from the current preferred parent, before any
  // re-selection below takes effect.
  if (dio.sender == node.rpl.parent) {
    node.rpl.parentRank = dio.rank;
    node.rpl.rank = dio.rank + net.config.rankIncrease;
    if (dio.delayKnown) {
      Asn age = receiveAsn - dio.creationAsn;
      node.rpl.delayToRootSlots = dio.delayToRootSlots + static_cast<std::uint32_t>(age);
      node.rpl.delayKnown = true;
      net.log.record(EventType::DelayToRootUpdated, receiveAsn, node.id,
                     "slots=" + std::to_string(node.rpl.delayToRootSlots));
      net.metrics.recordDelayToRoot(net.topology.groupOf(node.id),
                                    node.rpl.delayToRootSlots);
    }
  }

  NodeId best = chooseParent(node, net.config.rankHysteresis);
  if (best == kNoNode || best == node.rpl.parent) return;

  NodeId oldParent = node.rpl.parent;
  node.rpl.parent = best;
  node.rpl.parentRank = node.rpl.neighbors[best].rank;
  node.rpl.rank = node.rpl.parentRank + net.config.rankIncrease;

  if (!node.joined) {
    node.joined = true;
    node.joinAsn = receiveAsn;
    scheduleNextDio(net, node, receiveAsn);
    node.traffic.active = true;
    node.traffic.nextEmitAsn = receiveAsn + drawFirstEmitGap(net);
    net.log.record(EventType::Joined, receiveAsn, node.id,
                   "parent=" + std::to_string(best));
  }
  net.log.record(EventType::ParentChanged, receiveAsn, node.id,
                 "old=" + std::to_string(oldParent) +
                     ";new=" + std::to_string(best) +
                     ";rank=" + std::to_string(node.rpl.rank));
  onParentSwitch(net, node, oldParent, best);
}

}  // namespace bdpc
