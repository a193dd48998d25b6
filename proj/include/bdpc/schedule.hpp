#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bdpc/core.hpp"

namespace bdpc {

enum CellOptions : std::uint8_t {
  kCellTx = 1u << 0,
  kCellRx = 1u << 1,
  kCellShared = 1u << 2,
};

struct Coord {
  std::uint16_t slotOffset = 0;
  std::uint16_t channelOffset = 0;

  bool operator==(const Coord& o) const {
    return slotOffset == o.slotOffset && channelOffset == o.channelOffset;
  }
  bool operator<(const Coord& o) const {
    if (slotOffset != o.slotOffset) return slotOffset < o.slotOffset;
    return channelOffset < o.channelOffset;
  }
};

struct Cell {
  Coord coord;
  std::uint8_t options = 0;
  NodeId peer = kBroadcastId;  // broadcast for the shared minimal cell

  bool isTx() const { return options & kCellTx; }
  bool isRx() const { return options & kCellRx; }
  bool isShared() const { return options & kCellShared; }
};

enum class InstallResult { Ok, OutOfBounds, CoordinateOccupied, SlotConflict };
enum class RemoveResult { Ok, NotFound, MinimalCellProtected };

// One node's slotframe schedule. At most one cell per slot offset (a radio has a
// single duty per slot), all cells on distinct coordinates, minimal cell pinned
// at (0,0).
class ScheduleMatrix {
 public:
  ScheduleMatrix() = default;
  ScheduleMatrix(NodeId owner, std::uint32_t slotframeLength, std::uint32_t numChannels);

  InstallResult install(Coord coord, std::uint8_t options, NodeId peer);
  RemoveResult remove(Coord coord);

  // The cell active in the given slot, or nullptr when the node sleeps.
  const Cell* activeCellAt(Asn asn) const;
  const Cell* cellAtSlot(std::uint16_t slotOffset) const;

  bool slotOccupied(std::uint16_t slotOffset) const;
  bool hasCell(Coord coord) const;
  const Cell* find(Coord coord) const;

  // Uniformly sampled distinct free coordinates (free slot, any channel),
  // excluding reserved slots. Returns up to count entries.
  std::vector<Coord> candidateCells(std::uint32_t count, std::mt19937_64& rng) const;
  std::size_t freeSlotCount() const;

  void reserve(Coord coord);
  void release(Coord coord);
  bool slotReserved(std::uint16_t slotOffset) const;

  // Negotiated (non-minimal) cells with the given peer matching every bit in mask.
  std::vector<Coord> negotiatedWith(NodeId peer, std::uint8_t mask) const;
  std::size_t countNegotiatedWith(NodeId peer, std::uint8_t mask) const;
  std::size_t negotiatedCellCount() const;

  const std::map<Coord, Cell>& cells() const { return cells_; }
  std::uint32_t slotframeLength() const { return slotframeLength_; }
  std::uint32_t numChannels() const { return numChannels_; }
  NodeId owner() const { return owner_; }

  // Text grid for debugging and golden tests: one row per channel, one column
  // per slot, '.' empty, T/R/S by option.
  std::string dump() const;

  // Stable textual form of the full matrix, for byte-equality assertions.
  std::string serialize() const;

 private:
  NodeId owner_ = kNoNode;
  std::uint32_t slotframeLength_ = 0;
  std::uint32_t numChannels_ = 0;
  std::map<Coord, Cell> cells_;
  std::vector<const Cell*> slotIndex_;  // slotframeLength_ entries
  std::set<std::uint16_t> reservedSlots_;
  std::map<Coord, int> reservedCoords_;

  void reindex();
};

}  // namespace bdpc
