#pragma once

#include <cstdint>

#include "bdpc/core.hpp"

namespace bdpc {

enum class SlotState : std::uint8_t {
  Sleep,
  IdleListen,
  TxDataRxAck,
  RxDataTxAck,
  TxBroadcast,
  RxBroadcast,
};

// Per-node radio-state slot counters; exactly one state accrues per slot.
struct EnergyMeter {
  std::uint64_t sleep = 0;
  std::uint64_t idleListen = 0;
  std::uint64_t txDataRxAck = 0;
  std::uint64_t rxDataTxAck = 0;
  std::uint64_t txBroadcast = 0;
  std::uint64_t rxBroadcast = 0;

  void account(SlotState s) {
    switch (s) {
      case SlotState::Sleep: ++sleep; break;
      case SlotState::IdleListen: ++idleListen; break;
      case SlotState::TxDataRxAck: ++txDataRxAck; break;
      case SlotState::RxDataTxAck: ++rxDataTxAck; break;
      case SlotState::TxBroadcast: ++txBroadcast; break;
      case SlotState::RxBroadcast: ++rxBroadcast; break;
    }
  }

  std::uint64_t totalSlots() const {
    return sleep + idleListen + txDataRxAck + rxDataTxAck + txBroadcast + rxBroadcast;
  }

  double totalChargeUc(const ChargeTable& t) const {
    return static_cast<double>(sleep) * t.sleepUc +
           static_cast<double>(idleListen) * t.idleListenUc +
           static_cast<double>(txDataRxAck) * t.txDataRxAckUc +
           static_cast<double>(rxDataTxAck) * t.rxDataTxAckUc +
           static_cast<double>(txBroadcast) * t.txBroadcastUc +
           static_cast<double>(rxBroadcast) * t.rxBroadcastUc;
  }
};

// Years until the battery is drained at the node's average current.
double lifetimeYears(const EnergyMeter& meter, const ChargeTable& table,
                     double slotDurationS);

}  // namespace bdpc
