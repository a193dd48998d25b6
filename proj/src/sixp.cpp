#include <cassert>

#include "bdpc/network.hpp"
#include "bdpc/sf.hpp"
#include "bdpc/sixp.hpp"

namespace bdpc {

namespace {

std::uint8_t mirrorOptions(std::uint8_t options) {
  std::uint8_t out = options & kCellShared;
  if (options & kCellTx) out |= kCellRx;
  if (options & kCellRx) out |= kCellTx;
  return out;
}

void purgeQueuedSixpFrames(Node& node, std::uint64_t transactionId) {
  auto& frames = node.queue.frames();
  for (auto it = frames.begin(); it != frames.end();) {
    if (it->kind == FrameKind::Sixp && it->sixp().transactionId == transactionId) {
      it = frames.erase(it);
    } else {
      ++it;
    }
  }
}

void releaseReservations(Node& node, const std::vector<Coord>& cells) {
  for (const Coord& c : cells) node.schedule.release(c);
}

bool sendRequest(Network& net, Node& initiator, const SixpTransaction& txn) {
  Frame f;
  f.kind = FrameKind::Sixp;
  f.dst = txn.peer;
  SixpMessage msg;
  msg.type = SixpMsgType::Request;
  msg.command = txn.command;
  msg.initiatorOptions = txn.options;
  msg.numCells = txn.numCells;
  msg.cellList = txn.cellList;
  msg.seqNum = txn.seqNum;
  msg.timeoutAsn = txn.timeoutAsn;
  msg.transactionId = txn.id;
  f.payload = msg;
  return enqueueControl(net, initiator, std::move(f));
}

bool sendResponse(Network& net, Node& responder, NodeId to, SixpCommand command,
                  SixpStatus status, const std::vector<Coord>& cells,
                  std::uint32_t seqNum, Asn timeoutAsn, std::uint64_t txnId) {
  Frame f;
  f.kind = FrameKind::Sixp;
  f.dst = to;
  SixpMessage msg;
  msg.type = SixpMsgType::Response;
  msg.command = command;
  msg.status = status;
  msg.cellList = cells;
  msg.seqNum = seqNum;
  msg.timeoutAsn = timeoutAsn;
  msg.transactionId = txnId;
  f.payload = msg;
  return enqueueControl(net, responder, std::move(f));
}

}  // namespace

bool sixpBusy(const Node& node, NodeId peer) {
  return node.sixp.transactions.count(peer) != 0;
}

InitiateResult sixpInitiateAdd(Network& net, Node& initiator, NodeId peer,
                               std::uint8_t options, std::uint32_t numCells) {
  if (sixpBusy(initiator, peer)) return InitiateResult::Busy;

  std::vector<Coord> candidates =
      initiator.schedule.candidateCells(net.config.candidateListLength, net.rng);
  if (candidates.size() < numCells) return InitiateResult::NoFreeCells;

  SixpTransaction txn;
  txn.id = net.nextTransactionId++;
  txn.peer = peer;
  txn.command = SixpCommand::Add;
  txn.options = options;
  txn.numCells = numCells;
  txn.cellList = std::move(candidates);
  txn.seqNum = initiator.sixp.seqAsInitiator[peer];
  txn.timeoutAsn = net.asn + static_cast<Asn>(net.config.sixpTimeoutSlotframes) *
                                 net.config.slotframeLength;

  for (const Coord& c : txn.cellList) initiator.schedule.reserve(c);
  if (!sendRequest(net, initiator, txn)) {
    releaseReservations(initiator, txn.cellList);
    return InitiateResult::QueueFull;
  }
  initiator.sixp.transactions[peer] = std::move(txn);
  return InitiateResult::Started;
}

InitiateResult sixpInitiateDelete(Network& net, Node& initiator, NodeId peer,
                                  std::uint8_t options, std::uint32_t numCells) {
  if (sixpBusy(initiator, peer)) return InitiateResult::Busy;

  std::vector<Coord> owned;
  for (const Coord& coord : initiator.schedule.negotiatedWith(peer, options)) {
    if (owned.size() >= numCells) break;
    owned.push_back(coord);
  }
  if (owned.empty()) return InitiateResult::NoSuchCells;

  SixpTransaction txn;
  txn.id = net.nextTransactionId++;
  txn.peer = peer;
  txn.command = SixpCommand::Delete;
  txn.options = options;
  txn.numCells = static_cast<std::uint32_t>(owned.size());
  txn.cellList = std::move(owned);
  txn.seqNum = initiator.sixp.seqAsInitiator[peer];
  txn.timeoutAsn = net.asn + static_cast<Asn>(net.config.sixpTimeoutSlotframes) *
                                 net.config.slotframeLength;

  if (!sendRequest(net, initiator, txn)) return InitiateResult::QueueFull;
  initiator.sixp.transactions[peer] = std::move(txn);
  return InitiateResult::Started;
}

void sixpHandleRequest(Network& net, Node& responder, const Frame& frame) {
  const SixpMessage& msg = frame.sixp();
  NodeId initiator = frame.src;
  if (msg.timeoutAsn <= net.asn) {
    net.log.record(EventType::SixpFailed, net.asn, responder.id,
                   "stale_request;peer=" + std::to_string(initiator));
    return;
  }

  std::uint32_t expected = responder.sixp.seqAsResponder[initiator];
  if (msg.seqNum != expected) {
    responder.sixp.seqAsResponder[initiator] = 0;
    sendResponse(net, responder, initiator, msg.command, SixpStatus::ResetSeq, {},
                 msg.seqNum, msg.timeoutAsn, msg.transactionId);
    return;
  }

  std::vector<Coord> chosen;
  if (msg.command == SixpCommand::Add) {
    for (const Coord& c : msg.cellList) {
      if (chosen.size() >= msg.numCells) break;
      if (!responder.schedule.slotOccupied(c.slotOffset) &&
          !responder.schedule.slotReserved(c.slotOffset)) {
        chosen.push_back(c);
      }
    }
    for (const Coord& c : chosen) responder.schedule.reserve(c);
  } else {
    chosen = msg.cellList;  // delete confirms the proposed cells
  }

  SixpPendingCommit pending;
  pending.initiator = initiator;
  pending.command = msg.command;
  pending.responderOptions = mirrorOptions(msg.initiatorOptions);
  pending.cells = chosen;
  pending.timeoutAsn = msg.timeoutAsn;

  if (!sendResponse(net, responder, initiator, msg.command, SixpStatus::Success,
                    chosen, msg.seqNum, msg.timeoutAsn, msg.transactionId)) {
    if (msg.command == SixpCommand::Add) releaseReservations(responder, chosen);
    return;
  }
  responder.sixp.pending[msg.transactionId] = std::move(pending);
}

// The response reached the initiator; this is the responder's commit point,
// executed in the same slot as the initiator's.
void sixpOnResponseDelivered(Network& net, Node& responder, const Frame& frame) {
  const SixpMessage& msg = frame.sixp();
  auto it = responder.sixp.pending.find(msg.transactionId);
  if (it == responder.sixp.pending.end()) return;
  const SixpPendingCommit& pending = it->second;

  if (msg.status == SixpStatus::Success) {
    for (const Coord& c : pending.cells) {
      if (pending.command == SixpCommand::Add) {
        responder.schedule.release(c);
        InstallResult r = responder.schedule.install(c, pending.responderOptions,
                                                     pending.initiator);
        assert(r == InstallResult::Ok);
        (void)r;
        if (pending.responderOptions & kCellTx) net.metrics.cellInstalled();
        net.log.record(EventType::CellInstalled, net.asn, responder.id,
                       "slot=" + std::to_string(c.slotOffset) +
                           ";ch=" + std::to_string(c.channelOffset) +
                           ";peer=" + std::to_string(pending.initiator));
      } else {
        const Cell* cell = responder.schedule.find(c);
        if (cell != nullptr) {
          bool wasTx = cell->isTx();
          responder.schedule.remove(c);
          if (wasTx) net.metrics.cellRemoved();
          net.log.record(EventType::CellRemoved, net.asn, responder.id,
                         "slot=" + std::to_string(c.slotOffset) +
                             ";ch=" + std::to_string(c.channelOffset) +
                             ";peer=" + std::to_string(pending.initiator));
        }
      }
    }
    ++responder.sixp.seqAsResponder[pending.initiator];
  } else if (pending.command == SixpCommand::Add) {
    releaseReservations(responder, pending.cells);
  }
  responder.sixp.pending.erase(it);
}

// The request frame itself was dropped after exhausting link retries; the
// initiator knows the transaction cannot complete and abandons it rather
// than waiting out the timeout.
void sixpOnRequestDropped(Network& net, Node& initiator, const Frame& frame) {
  const SixpMessage& msg = frame.sixp();
  NodeId peer = frame.dst;
  auto it = initiator.sixp.transactions.find(peer);
  if (it == initiator.sixp.transactions.end() ||
      it->second.id != msg.transactionId) {
    return;
  }
  SixpCommand command = it->second.command;
  std::uint8_t options = it->second.options;
  if (command == SixpCommand::Add) {
    releaseReservations(initiator, it->second.cellList);
  }
  initiator.sixp.transactions.erase(it);
  net.log.record(EventType::SixpFailed, net.asn, initiator.id,
                 "request_dropped;peer=" + std::to_string(peer));
  sfOnTransactionFailed(net, initiator, peer, command, options);
}

void sixpOnResponseDropped(Network& net, Node& responder, const Frame& frame) {
  const SixpMessage& msg = frame.sixp();
  auto it = responder.sixp.pending.find(msg.transactionId);
  if (it == responder.sixp.pending.end()) return;
  NodeId initiator = it->second.initiator;
  if (it->second.command == SixpCommand::Add) {
    releaseReservations(responder, it->second.cells);
  }
  responder.sixp.pending.erase(it);
  net.log.record(EventType::SixpFailed, net.asn, responder.id,
                 "response_dropped;peer=" + std::to_string(initiator));
}

void sixpHandleResponse(Network& net, Node& initiator, const Frame& frame) {
  const SixpMessage& msg = frame.sixp();
  NodeId peer = frame.src;
  auto it = initiator.sixp.transactions.find(peer);
  if (it == initiator.sixp.transactions.end() ||
      it->second.id != msg.transactionId) {
    return;  // stale response, transaction already gone
  }
  SixpTransaction txn = std::move(it->second);
  initiator.sixp.transactions.erase(it);

  if (msg.status == SixpStatus::ResetSeq) {
    initiator.sixp.seqAsInitiator[peer] = 0;
    if (txn.command == SixpCommand::Add) releaseReservations(initiator, txn.cellList);
    net.log.record(EventType::SixpFailed, net.asn, initiator.id,
                   "reset_seq;peer=" + std::to_string(peer));
    sfOnTransactionFailed(net, initiator, peer, txn.command, txn.options);
    return;
  }

  if (txn.command == SixpCommand::Add) {
    releaseReservations(initiator, txn.cellList);
    for (const Coord& c : msg.cellList) {
      InstallResult r = initiator.schedule.install(c, txn.options, peer);
      assert(r == InstallResult::Ok);
      (void)r;
      if (txn.options & kCellTx) net.metrics.cellInstalled();
      net.log.record(EventType::CellInstalled, net.asn, initiator.id,
                     "slot=" + std::to_string(c.slotOffset) +
                         ";ch=" + std::to_string(c.channelOffset) +
                         ";peer=" + std::to_string(peer));
    }
  } else {
    for (const Coord& c : msg.cellList) {
      const Cell* cell = initiator.schedule.find(c);
      if (cell == nullptr) continue;
      bool wasTx = cell->isTx();
      initiator.schedule.remove(c);
      if (wasTx) net.metrics.cellRemoved();
      net.log.record(EventType::CellRemoved, net.asn, initiator.id,
                     "slot=" + std::to_string(c.slotOffset) +
                         ";ch=" + std::to_string(c.channelOffset) +
                         ";peer=" + std::to_string(peer));
    }
  }
  initiator.sixp.seqAsInitiator[peer] = txn.seqNum + 1;
  net.log.record(EventType::SixpComplete, net.asn, initiator.id,
                 std::string(txn.command == SixpCommand::Add ? "add" : "delete") +
                     ";peer=" + std::to_string(peer) +
                     ";cells=" + std::to_string(msg.cellList.size()));
}

void sixpHousekeeping(Network& net, Node& node) {
  // Initiator side: transactions past their deadline are abandoned, their
  // reservations and any still-queued request frames dropped.
  std::vector<NodeId> expired;
  for (const auto& [peer, txn] : node.sixp.transactions) {
    if (txn.timeoutAsn <= net.asn) expired.push_back(peer);
  }
  for (NodeId peer : expired) {
    SixpTransaction& txn = node.sixp.transactions[peer];
    SixpCommand command = txn.command;
    std::uint8_t options = txn.options;
    if (txn.command == SixpCommand::Add) releaseReservations(node, txn.cellList);
    purgeQueuedSixpFrames(node, txn.id);
    net.log.record(EventType::SixpFailed, net.asn, node.id,
                   "timeout;peer=" + std::to_string(peer));
    node.sixp.transactions.erase(peer);
    sfOnTransactionFailed(net, node, peer, command, options);
  }

  // Responder side: uncommitted reservations expire at the same boundary.
  std::vector<std::uint64_t> stale;
  for (const auto& [id, pending] : node.sixp.pending) {
    if (pending.timeoutAsn <= net.asn) stale.push_back(id);
  }
  for (std::uint64_t id : stale) {
    SixpPendingCommit& pending = node.sixp.pending[id];
    if (pending.command == SixpCommand::Add) {
      releaseReservations(node, pending.cells);
    }
    purgeQueuedSixpFrames(node, id);
    net.log.record(EventType::SixpFailed, net.asn, node.id,
                   "timeout_pending;peer=" + std::to_string(pending.initiator));
    node.sixp.pending.erase(id);
  }
}

}  // namespace bdpc
