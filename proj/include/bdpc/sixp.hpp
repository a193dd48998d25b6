#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "bdpc/core.hpp"
#include "bdpc/frame.hpp"
#include "bdpc/schedule.hpp"

namespace bdpc {

struct Network;
struct Node;

enum class InitiateResult { Started, Busy, NoFreeCells, NoSuchCells, QueueFull };

// Initiator-side record of a two-way exchange in flight.
struct SixpTransaction {
  std::uint64_t id = 0;
  NodeId peer = kNoNode;
  SixpCommand command = SixpCommand::Add;
  std::uint8_t options = 0;
  std::uint32_t numCells = 0;
  std::vector<Coord> cellList;  // reserved candidates (add) or cells to remove (delete)
  std::uint32_t seqNum = 0;
  Asn timeoutAsn = 0;
};

// Responder-side half of a transaction, committed when the response is acked.
struct SixpPendingCommit {
  NodeId initiator = kNoNode;
  SixpCommand command = SixpCommand::Add;
  std::uint8_t responderOptions = 0;
  std::vector<Coord> cells;
  Asn timeoutAsn = 0;
};

struct SixpState {
  std::map<NodeId, std::uint32_t> seqAsInitiator;
  std::map<NodeId, std::uint32_t> seqAsResponder;
  std::map<NodeId, SixpTransaction> transactions;      // one in flight per peer
  std::map<std::uint64_t, SixpPendingCommit> pending;  // by transaction id
};

bool sixpBusy(const Node& node, NodeId peer);

// Start a two-way ADD toward peer proposing seeded candidate coordinates.
InitiateResult sixpInitiateAdd(Network& net, Node& initiator, NodeId peer,
                               std::uint8_t options, std::uint32_t numCells);

// Start a two-way DELETE of currently shared negotiated cells.
InitiateResult sixpInitiateDelete(Network& net, Node& initiator, NodeId peer,
                                  std::uint8_t options, std::uint32_t numCells);

// Responder entry point for a delivered request frame.
void sixpHandleRequest(Network& net, Node& responder, const Frame& frame);

// Initiator entry point for a delivered response frame.
void sixpHandleResponse(Network& net, Node& initiator, const Frame& frame);

// Responder commit, invoked in the same slot the response is acked.
void sixpOnResponseDelivered(Network& net, Node& responder, const Frame& frame);

// Responder rollback when its response frame is dropped by the MAC.
void sixpOnResponseDropped(Network& net, Node& responder, const Frame& frame);

// Initiator abort when its request frame is dropped by the MAC.
void sixpOnRequestDropped(Network& net, Node& initiator, const Frame& frame);

// Slotframe-boundary timeouts and purges for both roles.
void sixpHousekeeping(Network& net, Node& node);

}  // namespace bdpc
