#include <algorithm>
#include <cassert>
#include <cmath>

#include "bdpc/network.hpp"
#include "bdpc/rpl.hpp"
#include "bdpc/sf.hpp"
#include "bdpc/sixp.hpp"

namespace bdpc {

namespace {

struct Delivery {
  NodeId receiver = kNoNode;
  NodeId sender = kNoNode;
  Frame frame;
};

Asn drawPacketGapSlots(Network& net) {
  std::normal_distribution<double> gap(net.config.packetPeriodS,
                                       net.config.packetPeriodStdS);
  double seconds = gap(net.rng);
  auto slots = static_cast<std::int64_t>(std::llround(seconds / net.config.slotDurationS));
  return static_cast<Asn>(std::max<std::int64_t>(1, slots));
}

bool sharedEligible(const Node& node, const Frame& f) {
  if (f.kind == FrameKind::Dio) return true;
  if (f.kind == FrameKind::Sixp) {
    // Control unicast rides the shared slot only when no dedicated path exists.
    return node.schedule.countNegotiatedWith(f.dst, kCellTx) == 0;
  }
  return false;  // data never contends on the minimal cell
}

bool dedicatedEligible(const Node& node, NodeId peer, const Frame& f) {
  if (f.kind == FrameKind::Sixp) return f.dst == peer;
  if (f.kind == FrameKind::Data) return peer == node.rpl.parent;
  return false;
}

void dropFrame(Network& net, Node& node, Frame&& f, EventType why) {
  net.log.record(why, net.asn, node.id,
                 f.kind == FrameKind::Data
                     ? "kind=data;src=" + std::to_string(f.data().source) +
                           ";seq=" + std::to_string(f.data().sequence)
                     : (f.kind == FrameKind::Dio ? "kind=dio" : "kind=sixp"));
  if (f.kind == FrameKind::Data) {
    if (why == EventType::RetryDrop) {
      ++node.flow.droppedRetry;
    } else {
      ++node.flow.droppedQueue;
    }
  } else if (f.kind == FrameKind::Sixp) {
    if (f.sixp().type == SixpMsgType::Response) {
      sixpOnResponseDropped(net, node, f);
    } else {
      sixpOnRequestDropped(net, node, f);
    }
  }
}

void handleDataArrival(Network& net, Node& node, NodeId sender, const DataPacket& pkt) {
  ++node.flow.received;
  bdpcRecordArrival(net, node, sender, pkt.deadlineAsn, net.asn);
  bdpcEvaluate(net, node, sender);
  if (node.isRoot()) {
    ++node.flow.sunk;
    net.metrics.recordRootArrival(pkt.source, pkt.sequence, net.asn);
    net.log.record(EventType::PacketAtRoot, net.asn, node.id,
                   "src=" + std::to_string(pkt.source) +
                       ";seq=" + std::to_string(pkt.sequence));
    return;
  }
  net.log.record(EventType::PacketHop, net.asn, node.id,
                 "src=" + std::to_string(pkt.source) +
                     ";seq=" + std::to_string(pkt.sequence) +
                     ";from=" + std::to_string(sender));
  enqueueData(net, node, pkt);
}

void processDelivery(Network& net, Delivery& d) {
  Node& receiver = net.node(d.receiver);
  switch (d.frame.kind) {
    case FrameKind::Dio:
      net.log.record(EventType::DioReceived, net.asn, d.receiver,
                     "from=" + std::to_string(d.sender));
      processDio(net, receiver, d.frame.dio(), net.asn);
      break;
    case FrameKind::Data:
      handleDataArrival(net, receiver, d.sender, d.frame.data());
      break;
    case FrameKind::Sixp:
      if (d.frame.sixp().type == SixpMsgType::Request) {
        sixpHandleRequest(net, receiver, d.frame);
      } else {
        // Both halves of the handshake commit in this same slot.
        sixpOnResponseDelivered(net, net.node(d.sender), d.frame);
        sixpHandleResponse(net, receiver, d.frame);
      }
      break;
  }
}

// Shared minimal-cell slot: everyone participates, collisions are resolved
// per listening receiver, transmitters back off when another transmitter
// shares one of their listeners.
void minimalCellSlot(Network& net, std::vector<Delivery>& deliveries) {
  std::size_t n = net.nodes.size();
  std::vector<SlotState> state(n, SlotState::IdleListen);

  for (Node& node : net.nodes) {
    if (node.sharedBackoff > 0) --node.sharedBackoff;
  }

  struct Pick {
    NodeId id;
    int index;
  };
  std::vector<Pick> txs;
  std::vector<bool> transmitting(n, false);
  for (Node& node : net.nodes) {
    if (node.sharedBackoff != 0) continue;
    int idx = node.queue.firstEligible(
        [&](const Frame& f) { return sharedEligible(node, f); });
    if (idx >= 0) {
      txs.push_back({node.id, idx});
      transmitting[node.id] = true;
    }
  }

  // Who does each listener hear?
  std::vector<std::vector<NodeId>> heard(n);
  for (const Pick& p : txs) {
    for (NodeId nb : net.topology.neighborsOf(p.id)) {
      if (!transmitting[nb]) heard[nb].push_back(p.id);
    }
  }

  // A transmitter fails when any of its listeners also hears someone else.
  auto conflicted = [&](NodeId t) {
    for (NodeId nb : net.topology.neighborsOf(t)) {
      if (!transmitting[nb] && heard[nb].size() >= 2) return true;
    }
    return false;
  };

  struct RxInfo {
    NodeId sender = kNoNode;
    NodeId frameDst = kNoNode;
    bool any = false;
  };
  std::vector<RxInfo> received(n);

  for (const Pick& p : txs) {
    Node& node = net.node(p.id);
    Frame& frame = node.queue.frames()[static_cast<std::size_t>(p.index)];
    bool unicast = frame.dst != kBroadcastId;
    NodeId frameDst = frame.dst;
    state[p.id] = unicast ? SlotState::TxDataRxAck : SlotState::TxBroadcast;
    bool conflict = conflicted(p.id);

    bool success = false;
    if (!conflict) {
      for (NodeId nb : net.topology.neighborsOf(p.id)) {
        if (!transmitting[nb] && heard[nb].size() == 1 &&
            net.bernoulliPdr(net.linkPdr(p.id, nb))) {
          received[nb] = {p.id, frameDst, true};
        }
      }
      if (unicast) {
        success = !transmitting[frameDst] && received[frameDst].any &&
                  received[frameDst].sender == p.id;
      } else {
        success = true;  // broadcast has no ack; per-listener losses are silent
        net.log.record(EventType::DioSent, net.asn, p.id, "");
      }
    } else {
      net.log.record(EventType::SharedCollision, net.asn, p.id, "");
    }

    if (success) {
      Frame f = node.queue.take(p.index);
      if (f.kind == FrameKind::Data) ++node.flow.sentOut;
      deliveries.push_back({unicast ? frameDst : kBroadcastId, p.id, std::move(f)});
    } else {
      std::uniform_int_distribution<std::uint32_t> backoff(1, 4);
      node.sharedBackoff = backoff(net.rng);
      ++frame.retryCount;
      if (frame.retryCount > net.config.maxRetries) {
        Frame f = node.queue.take(p.index);
        dropFrame(net, node, std::move(f), EventType::RetryDrop);
      }
    }
  }

  // Fan broadcast deliveries out per hearing receiver, in receiver order;
  // unicasts overheard by third parties stay discarded.
  std::vector<Delivery> fanned;
  for (Delivery& d : deliveries) {
    if (d.receiver != kBroadcastId) {
      fanned.push_back(std::move(d));
      continue;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (received[r].any && received[r].sender == d.sender) {
        fanned.push_back({static_cast<NodeId>(r), d.sender, d.frame});
      }
    }
  }
  deliveries = std::move(fanned);

  for (std::size_t r = 0; r < n; ++r) {
    if (transmitting[r]) {
      net.node(r).energy.account(state[r]);
      continue;
    }
    SlotState s = SlotState::IdleListen;
    if (received[r].any) {
      if (received[r].frameDst == r) {
        s = SlotState::RxDataTxAck;
      } else {
        s = SlotState::RxBroadcast;  // broadcast, or overheard unicast
      }
    }
    net.node(r).energy.account(s);
  }
}

void dedicatedSlot(Network& net, std::uint32_t slotOffset,
                   std::vector<Delivery>& deliveries) {
  std::size_t n = net.nodes.size();
  std::vector<SlotState> state(n, SlotState::Sleep);
  for (Node& node : net.nodes) {
    const Cell* cell = node.schedule.cellAtSlot(static_cast<std::uint16_t>(slotOffset));
    if (cell && cell->isRx() && !cell->isShared()) {
      state[node.id] = SlotState::IdleListen;
    }
  }

  for (Node& node : net.nodes) {
    const Cell* cell = node.schedule.cellAtSlot(static_cast<std::uint16_t>(slotOffset));
    if (!cell || cell->isShared() || !cell->isTx()) continue;
    NodeId peer = cell->peer;
    int idx = node.queue.firstEligible(
        [&](const Frame& f) { return dedicatedEligible(node, peer, f); });
    if (peer == node.rpl.parent) {
      msfRecordCellOccurrence(net, node, idx >= 0);
    }
    if (idx < 0) continue;  // empty tx cell sleeps

    state[node.id] = SlotState::TxDataRxAck;
    bool success = net.bernoulliPdr(net.linkPdr(node.id, peer));
    if (success) {
      state[peer] = SlotState::RxDataTxAck;
      Frame f = node.queue.take(idx);
      if (f.kind == FrameKind::Data) ++node.flow.sentOut;
      deliveries.push_back({peer, node.id, std::move(f)});
    } else {
      Frame& frame = node.queue.frames()[static_cast<std::size_t>(idx)];
      ++frame.retryCount;
      if (frame.retryCount > net.config.maxRetries) {
        Frame f = node.queue.take(idx);
        dropFrame(net, node, std::move(f), EventType::RetryDrop);
      }
    }
  }

  for (NodeId r = 0; r < n; ++r) net.node(r).energy.account(state[r]);
}

void generateTrafficSlot(Network& net) {
  for (Node& node : net.nodes) {
    if (node.isRoot() || !node.traffic.active || net.asn != node.traffic.nextEmitAsn) {
      continue;
    }
    DataPacket pkt;
    pkt.source = node.id;
    pkt.destination = kRootId;
    pkt.originAsn = net.asn;
    pkt.deadlineAsn = computeDeadline(net.asn, net.config.maxDelayS, net.config.slotDurationS);
    pkt.payloadBytes = net.config.payloadBytes;
    pkt.sequence = node.traffic.nextSequence++;
    ++node.flow.generated;
    net.metrics.recordGenerated(node.id, net.topology.groupOf(node.id), pkt.sequence,
                                pkt.originAsn, pkt.deadlineAsn);
    net.log.record(EventType::PacketGenerated, net.asn, node.id,
                   "seq=" + std::to_string(pkt.sequence));
    enqueueData(net, node, pkt);
    node.traffic.nextEmitAsn = net.asn + drawPacketGapSlots(net);
  }
}

void dioEmissionSlot(Network& net) {
  for (Node& node : net.nodes) {
    if (node.joined && node.rpl.dioScheduled && net.asn >= node.rpl.nextDioAsn) {
      emitDio(net, node);
    }
  }
}

void slotframeBoundary(Network& net) {
  for (Node& node : net.nodes) sixpHousekeeping(net, node);
  for (Node& node : net.nodes) sfHousekeeping(net, node);

  // Sparse latePaqs emission: only pairs whose counters moved this slotframe.
  for (Node& node : net.nodes) {
    for (auto& [child, dirty] : node.sf.childStatsDirty) {
      if (!dirty) continue;
      dirty = false;
      const ChildStats& s = node.sf.childStats[child];
      net.metrics.recordLateRow({net.asn, node.id, child, s.inTime, s.delayed});
    }
  }

  Asn slotframe = net.slotframeIndex();
  if ((slotframe + 1) % 50 == 0) net.metrics.sampleCellBin();
}

}  // namespace

Network::Network(const SimConfig& cfg, std::uint64_t seed)
    : config(cfg), topology(Topology::build(cfg)), rng(seed) {
  std::size_t n = topology.numNodes();
  nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Node& node = nodes[i];
    node.id = static_cast<NodeId>(i);
    node.role = i == kRootId ? NodeRole::Root : NodeRole::Intermediate;
    node.schedule = ScheduleMatrix(node.id, cfg.slotframeLength, cfg.numChannels);
    node.queue = TxQueue(cfg.txQueueSize, cfg.controlQueueReserve);
  }
  Node& root = nodes[kRootId];
  root.joined = true;
  root.rpl.rank = cfg.rankBase;
  root.rpl.delayToRootSlots = 0;
  root.rpl.delayKnown = true;
  scheduleNextDio(*this, root, 0);
}

bool enqueueData(Network& net, Node& node, const DataPacket& packet) {
  Frame f;
  f.kind = FrameKind::Data;
  f.control = false;
  f.src = node.id;
  f.dst = kRootId;
  f.payload = packet;
  if (node.queue.push(std::move(f)) == EnqueueResult::Ok) return true;
  ++node.flow.droppedQueue;
  net.log.record(EventType::QueueDrop, net.asn, node.id,
                 "src=" + std::to_string(packet.source) +
                     ";seq=" + std::to_string(packet.sequence));
  return false;
}

bool enqueueControl(Network& net, Node& node, Frame frame) {
  frame.control = true;
  frame.src = node.id;
  if (node.queue.push(std::move(frame)) == EnqueueResult::Ok) return true;
  net.log.record(EventType::QueueDrop, net.asn, node.id, "kind=control");
  return false;
}

void runSlot(Network& net) {
  std::uint32_t slotOffset =
      static_cast<std::uint32_t>(net.asn % net.config.slotframeLength);
  std::vector<Delivery> deliveries;
  if (slotOffset == 0) {
    minimalCellSlot(net, deliveries);
  } else {
    dedicatedSlot(net, slotOffset, deliveries);
  }

  std::stable_sort(deliveries.begin(), deliveries.end(),
                   [](const Delivery& a, const Delivery& b) {
                     if (a.receiver != b.receiver) return a.receiver < b.receiver;
                     return a.sender < b.sender;
                   });
  for (Delivery& d : deliveries) processDelivery(net, d);

  generateTrafficSlot(net);
  dioEmissionSlot(net);

  if (slotOffset == net.config.slotframeLength - 1) slotframeBoundary(net);
  ++net.asn;
}

void runSlotframe(Network& net) {
  for (std::uint32_t i = 0; i < net.config.slotframeLength; ++i) runSlot(net);
}

void flagStuckPackets(Network& net) {
  for (Node& node : net.nodes) {
    for (const Frame& f : node.queue.frames()) {
      if (f.kind == FrameKind::Data) {
        net.metrics.markStuck(f.data().source, f.data().sequence);
      }
    }
  }
}

}  // namespace bdpc
