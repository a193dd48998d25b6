#include <algorithm>
#include <cmath>
#include <vector>

#include "bdpc/network.hpp"
#include "bdpc/sf.hpp"
#include "bdpc/sixp.hpp"

namespace bdpc {

namespace {

std::string actionName(SfAction a) {
  switch (a) {
    case SfAction::AddCell:
      return "add";
    case SfAction::DelCell:
      return "del";
    default:
      return "none";
  }
}

}  // namespace

void bdpcRecordArrival(Network& net, Node& node, NodeId childMac, Asn deadlineAsn,
                       Asn nowAsn) {
  bool delayKnown = node.isRoot() || node.rpl.delayKnown;
  if (!delayKnown) return;  // cannot judge without a path delay estimate
  std::int64_t delayToRoot = node.isRoot() ? 0 : node.rpl.delayToRootSlots;
  std::int64_t timeLeft = computeTimeLeft(deadlineAsn, nowAsn);
  ChildStats& stats = node.sf.childStats[childMac];
  if (timeLeft >= 0 && timeLeft >= delayToRoot) {
    ++stats.inTime;
  } else {
    ++stats.delayed;
  }
  stats.lastArrival = nowAsn;
  node.sf.childStatsDirty[childMac] = true;
}

SfAction bdpcDecide(double lateFraction, double sfMax, double sfMin,
                    std::uint32_t negotiatedRxCells) {
  if (lateFraction >= sfMax) return SfAction::AddCell;
  if (lateFraction <= sfMin && negotiatedRxCells >= 1) return SfAction::DelCell;
  return SfAction::None;
}

void bdpcEvaluate(Network& net, Node& node, NodeId childMac) {
  if (!net.config.bdpcEnabled) return;
  auto it = node.sf.childStats.find(childMac);
  if (it == node.sf.childStats.end() || it->second.total() == 0) return;

  double lateFraction = it->second.lateFraction();
  std::uint32_t rxCells = node.schedule.countNegotiatedWith(childMac, kCellRx);
  SfAction action = bdpcDecide(lateFraction, net.config.sfMax, net.config.sfMin, rxCells);
  if (action == SfAction::None) return;

  net.log.record(EventType::BdpcDecision, net.asn, node.id,
                 actionName(action) + ";child=" + std::to_string(childMac) +
                     ";late=" + std::to_string(lateFraction));
  if (sixpBusy(node, childMac)) {
    net.log.record(EventType::SixpBusy, net.asn, node.id,
                   "child=" + std::to_string(childMac));
    return;  // the next arrival re-triggers the decision
  }

  InitiateResult result;
  if (action == SfAction::AddCell) {
    result = sixpInitiateAdd(net, node, childMac, kCellRx,
                             net.config.preHopAddCellCount);
    if (result == InitiateResult::NoFreeCells) {
      net.log.record(EventType::SixpNoFreeCells, net.asn, node.id,
                     "child=" + std::to_string(childMac));
    }
    if (result != InitiateResult::Started) {
      node.sf.retryAdd.insert(childMac);
    }
  } else {
    result = sixpInitiateDelete(net, node, childMac, kCellRx, 1);
  }
  if (result == InitiateResult::Started && net.config.resetCountersOnAction) {
    it->second = ChildStats{};
  }
}

void sfOnTransactionFailed(Network& net, Node& node, NodeId peer,
                           SixpCommand command, std::uint8_t initiatorOptions) {
  if (!net.config.bdpcEnabled) return;
  if (command != SixpCommand::Add || !(initiatorOptions & kCellRx)) return;
  if (node.sf.childStats.count(peer) == 0) return;
  node.sf.retryAdd.insert(peer);
}

SfAction msfDecide(std::uint64_t used, std::uint64_t elapsed, double highLimit,
                   double lowLimit, std::uint32_t negotiatedTxCells) {
  if (elapsed == 0) return SfAction::None;
  double usage = static_cast<double>(used) / static_cast<double>(elapsed);
  if (usage > highLimit) return SfAction::AddCell;
  if (usage < lowLimit && negotiatedTxCells > 1) return SfAction::DelCell;
  return SfAction::None;
}

void msfRecordCellOccurrence(Network& net, Node& node, bool used) {
  MsfLinkCounters& c = node.sf.msf;
  ++c.elapsed;
  if (used) ++c.used;
  if (c.elapsed < net.config.msfWindow) return;

  NodeId parent = node.rpl.parent;
  std::uint32_t txCells = node.schedule.countNegotiatedWith(parent, kCellTx);
  SfAction action =
      msfDecide(c.used, c.elapsed, net.config.msfHighLimit, net.config.msfLowLimit, txCells);
  if (action != SfAction::None) {
    net.log.record(EventType::MsfDecision, net.asn, node.id,
                   actionName(action) + ";parent=" + std::to_string(parent) +
                       ";used=" + std::to_string(c.used) +
                       ";elapsed=" + std::to_string(c.elapsed));
    if (!sixpBusy(node, parent)) {
      if (action == SfAction::AddCell) {
        sixpInitiateAdd(net, node, parent, kCellTx, 1);
      } else {
        sixpInitiateDelete(net, node, parent, kCellTx, 1);
      }
    }
  }
  c = MsfLinkCounters{};
}

void onParentSwitch(Network& net, Node& node, NodeId oldParent, NodeId newParent) {
  node.sf.msf = MsfLinkCounters{};
  node.sf.needInitialCell = true;

  // Eager teardown; anything left over (busy pair, failed transaction) is
  // swept by housekeeping, which deletes toward every non-parent peer.
  if (oldParent != kNoNode && oldParent != newParent) {
    std::uint32_t txCells = node.schedule.countNegotiatedWith(oldParent, kCellTx);
    if (txCells > 0 && !sixpBusy(node, oldParent)) {
      sixpInitiateDelete(net, node, oldParent, kCellTx, txCells);
    }
  }

  if (!sixpBusy(node, newParent) &&
      node.schedule.countNegotiatedWith(newParent, kCellTx) == 0) {
    if (sixpInitiateAdd(net, node, newParent, kCellTx, 1) == InitiateResult::Started) {
      node.sf.needInitialCell = false;
    }
  }
}

void sfHousekeeping(Network& net, Node& node) {
  NodeId parent = node.rpl.parent;

  if (node.joined && parent != kNoNode) {
    // A node with no negotiated path toward its parent bootstraps one as soon
    // as it has (or expects) traffic.
    std::uint32_t txCells = node.schedule.countNegotiatedWith(parent, kCellTx);
    if (txCells > 0) {
      node.sf.needInitialCell = false;
    } else if ((node.sf.needInitialCell || node.queue.dataCount() > 0) &&
               !sixpBusy(node, parent)) {
      if (sixpInitiateAdd(net, node, parent, kCellTx, 1) == InitiateResult::Started) {
        node.sf.needInitialCell = false;
      }
    }
  }

  // A deadline-driven add that failed (lost request, timeout, full queue) is
  // retried every slotframe until one lands, as long as the late fraction
  // still calls for it. Pairs without recent arrivals drop out so a child
  // that re-parented elsewhere stops drawing cells.
  if (net.config.bdpcEnabled && !node.sf.retryAdd.empty()) {
    Asn horizon = static_cast<Asn>(
        std::llround(2.0 * net.config.packetPeriodS / net.config.slotDurationS));
    std::vector<NodeId> flagged(node.sf.retryAdd.begin(), node.sf.retryAdd.end());
    for (NodeId child : flagged) {
      auto it = node.sf.childStats.find(child);
      if (it == node.sf.childStats.end() || it->second.total() == 0 ||
          it->second.lateFraction() < net.config.sfMax ||
          net.asn - it->second.lastArrival > horizon) {
        node.sf.retryAdd.erase(child);
        continue;
      }
      if (sixpBusy(node, child)) continue;
      InitiateResult r = sixpInitiateAdd(net, node, child, kCellRx,
                                         net.config.preHopAddCellCount);
      if (r == InitiateResult::Started) {
        node.sf.retryAdd.erase(child);
        if (net.config.resetCountersOnAction) it->second = ChildStats{};
      }
    }
  }

  // Negotiated TX cells toward anyone but the current parent carry no data;
  // tear them down as the pairs come free.
  std::vector<NodeId> stalePeers;
  for (const auto& [coord, cell] : node.schedule.cells()) {
    if (!cell.isTx() || cell.isShared() || cell.peer == parent) continue;
    if (std::find(stalePeers.begin(), stalePeers.end(), cell.peer) ==
        stalePeers.end()) {
      stalePeers.push_back(cell.peer);
    }
  }
  for (NodeId peer : stalePeers) {
    if (sixpBusy(node, peer)) continue;
    std::uint32_t txCells = node.schedule.countNegotiatedWith(peer, kCellTx);
    if (txCells > 0) {
      sixpInitiateDelete(net, node, peer, kCellTx, txCells);
    }
  }
}

}  // namespace bdpc
