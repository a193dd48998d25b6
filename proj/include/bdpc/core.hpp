#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace bdpc {

using Asn = std::uint64_t;       // absolute slot number since network start
using NodeId = std::uint16_t;

constexpr NodeId kBroadcastId = 0xFFFF;
constexpr NodeId kNoNode = 0xFFFE;
constexpr NodeId kRootId = 0;

enum class NodeRole : std::uint8_t { Root, Intermediate };

// Charge per slot in microcoulombs, by radio state.
struct ChargeTable {
  double txDataRxAckUc = 54.5;
  double rxDataTxAckUc = 61.9;
  double idleListenUc = 40.1;
  double txBroadcastUc = 49.5;
  double rxBroadcastUc = 53.1;
  double sleepUc = 0.85;
  double batteryMah = 2821.5;
};

struct SimConfig {
  // timing / matrix
  std::uint32_t slotframeLength = 101;
  std::uint32_t numChannels = 16;
  double slotDurationS = 0.010;

  // traffic
  double maxDelayS = 1.5;
  double packetPeriodS = 30.0;
  double packetPeriodStdS = 0.223;
  std::uint32_t payloadBytes = 90;

  // mac
  std::uint32_t txQueueSize = 10;
  std::uint32_t controlQueueReserve = 2;
  std::uint32_t maxRetries = 5;

  // scheduling functions
  double sfMax = 0.1;
  double sfMin = 0.05;
  bool bdpcEnabled = true;
  std::uint32_t preHopAddCellCount = 1;
  bool resetCountersOnAction = false;
  std::uint32_t msfWindow = 100;
  double msfHighLimit = 0.75;
  double msfLowLimit = 0.25;

  // 6P
  std::uint32_t candidateListLength = 5;
  std::uint32_t sixpTimeoutSlotframes = 50;

  // rpl
  std::uint32_t rankBase = 256;
  std::uint32_t rankIncrease = 256;
  std::uint32_t rankHysteresis = 192;
  std::uint32_t dioPeriodSlots = 7577;
  std::uint32_t dioJitterSlots = 1;

  // topology
  std::uint32_t groups = 5;
  std::uint32_t groupSize = 3;
  double pdrLink = 1.0;
  double rssiLinkDbm = -10.0;

  // run shape
  std::uint32_t numSlotframes = 10000;
  std::uint64_t seed = 1;
  std::uint32_t numSeeds = 10;
  std::uint32_t statsStartSlotframe = 2000;

  ChargeTable charge;

  Asn totalSlots() const {
    return static_cast<Asn>(numSlotframes) * slotframeLength;
  }
  double asnToSeconds(Asn asn) const { return static_cast<double>(asn) * slotDurationS; }
};

// Number of whole slots that fit in the delay budget. The epsilon keeps an
// exact-multiple budget from losing a slot to division rounding.
inline std::int64_t delayBudgetSlots(double maxDelayS, double slotDurationS) {
  return static_cast<std::int64_t>(std::floor(maxDelayS / slotDurationS + 1e-9));
}

// Absolute ASN by which a packet created at originAsn must reach the root.
inline Asn computeDeadline(Asn originAsn, double maxDelayS, double slotDurationS) {
  return originAsn + static_cast<Asn>(delayBudgetSlots(maxDelayS, slotDurationS));
}

// Slots remaining before the deadline; negative once the deadline has passed.
inline std::int64_t computeTimeLeft(Asn deadlineAsn, Asn currentAsn) {
  return static_cast<std::int64_t>(deadlineAsn) - static_cast<std::int64_t>(currentAsn);
}

struct DataPacket {
  NodeId source = kNoNode;
  NodeId destination = kRootId;
  Asn originAsn = 0;
  Asn deadlineAsn = 0;
  std::uint32_t payloadBytes = 0;
  std::uint32_t sequence = 0;
};

struct DioMessage {
  NodeId sender = kNoNode;
  std::uint32_t rank = 0;
  std::int64_t delayToRootSlots = 0;  // sender's own estimate, in slots
  bool delayKnown = false;
  Asn creationAsn = 0;
};

}  // namespace bdpc
