#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "bdpc/core.hpp"
#include "bdpc/frame.hpp"

namespace bdpc {

struct Network;
struct Node;

// Cumulative per-child arrival accounting at a parent.
struct ChildStats {
  std::uint64_t inTime = 0;
  std::uint64_t delayed = 0;
  Asn lastArrival = 0;

  std::uint64_t total() const { return inTime + delayed; }
  double lateFraction() const {
    std::uint64_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(delayed) / static_cast<double>(t);
  }
};

struct MsfLinkCounters {
  std::uint64_t elapsed = 0;
  std::uint64_t used = 0;
};

enum class SfAction { None, AddCell, DelCell };

struct SfState {
  std::map<NodeId, ChildStats> childStats;
  std::map<NodeId, bool> childStatsDirty;  // pairs touched this slotframe
  MsfLinkCounters msf;
  bool needInitialCell = false;
  std::set<NodeId> retryAdd;  // children whose last deadline-driven add failed
};

// Deadline-pressure arrival rule: classify one packet seen at this node
// against the node's current delay-to-root estimate.
void bdpcRecordArrival(Network& net, Node& node, NodeId childMac, Asn deadlineAsn,
                       Asn nowAsn);

// Threshold rule on the cumulative late fraction. Pure and unit-testable.
SfAction bdpcDecide(double lateFraction, double sfMax, double sfMin,
                    std::uint32_t negotiatedRxCells);

// Apply the threshold rule for one child and act on it through 6P.
void bdpcEvaluate(Network& net, Node& node, NodeId child);

// Track one occurrence of a negotiated TX cell toward the parent; evaluates
// the usage window when it fills.
void msfRecordCellOccurrence(Network& net, Node& node, bool used);

// Usage-window decision. Pure and unit-testable.
SfAction msfDecide(std::uint64_t used, std::uint64_t elapsed, double highLimit,
                   double lowLimit, std::uint32_t negotiatedTxCells);

// Cell cleanup toward the old parent plus one initial cell toward the new one.
void onParentSwitch(Network& net, Node& node, NodeId oldParent, NodeId newParent);

// Notification from the transaction layer that an initiated transaction
// failed outright (lost request or response, timeout).
void sfOnTransactionFailed(Network& net, Node& node, NodeId peer,
                           SixpCommand command, std::uint8_t initiatorOptions);

// Slotframe-boundary work: bootstrap cell toward the parent, retry of pending
// deadline-driven adds, teardown of cells left toward former parents.
void sfHousekeeping(Network& net, Node& node);

}  // namespace bdpc
