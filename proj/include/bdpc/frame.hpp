#pragma once

#include <cstdint>
#include <deque>
#include <variant>
#include <vector>

#include "bdpc/core.hpp"
#include "bdpc/schedule.hpp"

namespace bdpc {

enum class SixpCommand : std::uint8_t { Add, Delete };
enum class SixpMsgType : std::uint8_t { Request, Response };
enum class SixpStatus : std::uint8_t { Success, ResetSeq };

struct SixpMessage {
  SixpMsgType type = SixpMsgType::Request;
  SixpCommand command = SixpCommand::Add;
  std::uint8_t initiatorOptions = 0;  // cell options from the initiator's side
  std::uint32_t numCells = 0;
  std::vector<Coord> cellList;  // candidates (request) or confirmed cells (response)
  std::uint32_t seqNum = 0;
  SixpStatus status = SixpStatus::Success;
  Asn timeoutAsn = 0;
  std::uint64_t transactionId = 0;
};

enum class FrameKind : std::uint8_t { Data, Dio, Sixp };

struct Frame {
  FrameKind kind = FrameKind::Data;
  bool control = false;
  NodeId src = kNoNode;
  NodeId dst = kBroadcastId;
  std::uint32_t retryCount = 0;
  std::variant<DataPacket, DioMessage, SixpMessage> payload;

  const DataPacket& data() const { return std::get<DataPacket>(payload); }
  DataPacket& data() { return std::get<DataPacket>(payload); }
  const DioMessage& dio() const { return std::get<DioMessage>(payload); }
  const SixpMessage& sixp() const { return std::get<SixpMessage>(payload); }
  SixpMessage& sixp() { return std::get<SixpMessage>(payload); }
};

enum class EnqueueResult { Ok, QueueFull };

// Single FIFO with a control class that (a) dequeues ahead of data and (b) may
// use a small reserve above the data capacity.
class TxQueue {
 public:
  TxQueue() = default;
  TxQueue(std::uint32_t dataCapacity, std::uint32_t controlReserve)
      : dataCapacity_(dataCapacity), controlReserve_(controlReserve) {}

  // Data is capped by the data census so queued control traffic cannot shrink
  // data capacity below the reserve; both classes respect the hard total of
  // capacity plus reserve.
  EnqueueResult push(Frame frame) {
    if (frames_.size() >= static_cast<std::size_t>(dataCapacity_ + controlReserve_)) {
      return EnqueueResult::QueueFull;
    }
    if (!frame.control && dataCount() >= dataCapacity_) {
      return EnqueueResult::QueueFull;
    }
    frames_.push_back(std::move(frame));
    return EnqueueResult::Ok;
  }

  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  std::deque<Frame>& frames() { return frames_; }
  const std::deque<Frame>& frames() const { return frames_; }

  std::size_t dataCount() const {
    std::size_t n = 0;
    for (const Frame& f : frames_) {
      if (!f.control) ++n;
    }
    return n;
  }

  // Index of the first frame matching pred among control frames, else among
  // data frames; -1 when none.
  template <typename Pred>
  int firstEligible(Pred pred) const {
    for (int pass = 0; pass < 2; ++pass) {
      bool wantControl = pass == 0;
      for (std::size_t i = 0; i < frames_.size(); ++i) {
        if (frames_[i].control == wantControl && pred(frames_[i])) {
          return static_cast<int>(i);
        }
      }
    }
    return -1;
  }

  Frame take(int index) {
    Frame f = std::move(frames_[static_cast<std::size_t>(index)]);
    frames_.erase(frames_.begin() + index);
    return f;
  }

 private:
  std::uint32_t dataCapacity_ = 10;
  std::uint32_t controlReserve_ = 2;
  std::deque<Frame> frames_;
};

}  // namespace bdpc
