#include "bdpc/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace bdpc {

ScheduleMatrix::ScheduleMatrix(NodeId owner, std::uint32_t slotframeLength,
                               std::uint32_t numChannels)
    : owner_(owner), slotframeLength_(slotframeLength), numChannels_(numChannels) {
  slotIndex_.assign(slotframeLength_, nullptr);
  Cell minimal;
  minimal.coord = {0, 0};
  minimal.options = kCellTx | kCellRx | kCellShared;
  minimal.peer = kBroadcastId;
  cells_[minimal.coord] = minimal;
  reindex();
}

void ScheduleMatrix::reindex() {
  slotIndex_.assign(slotframeLength_, nullptr);
  for (const auto& [coord, cell] : cells_) {
    slotIndex_[coord.slotOffset] = &cell;
  }
}

InstallResult ScheduleMatrix::install(Coord coord, std::uint8_t options, NodeId peer) {
  if (coord.slotOffset >= slotframeLength_ || coord.channelOffset >= numChannels_) {
    return InstallResult::OutOfBounds;
  }
  if (cells_.count(coord)) return InstallResult::CoordinateOccupied;
  if (slotIndex_[coord.slotOffset] != nullptr) return InstallResult::SlotConflict;
  Cell cell;
  cell.coord = coord;
  cell.options = options;
  cell.peer = peer;
  cells_[coord] = cell;
  reindex();
  return InstallResult::Ok;
}

RemoveResult ScheduleMatrix::remove(Coord coord) {
  if (coord.slotOffset == 0 && coord.channelOffset == 0) {
    return RemoveResult::MinimalCellProtected;
  }
  auto it = cells_.find(coord);
  if (it == cells_.end()) return RemoveResult::NotFound;
  cells_.erase(it);
  reindex();
  return RemoveResult::Ok;
}

const Cell* ScheduleMatrix::activeCellAt(Asn asn) const {
  return slotIndex_[asn % slotframeLength_];
}

const Cell* ScheduleMatrix::cellAtSlot(std::uint16_t slotOffset) const {
  return slotOffset < slotframeLength_ ? slotIndex_[slotOffset] : nullptr;
}

bool ScheduleMatrix::slotOccupied(std::uint16_t slotOffset) const {
  return slotOffset < slotframeLength_ && slotIndex_[slotOffset] != nullptr;
}

bool ScheduleMatrix::hasCell(Coord coord) const { return cells_.count(coord) != 0; }

const Cell* ScheduleMatrix::find(Coord coord) const {
  auto it = cells_.find(coord);
  return it == cells_.end() ? nullptr : &it->second;
}

std::size_t ScheduleMatrix::freeSlotCount() const {
  std::size_t used = 0;
  for (const Cell* c : slotIndex_) {
    if (c != nullptr) ++used;
  }
  return slotframeLength_ - used - reservedSlots_.size();
}

std::vector<Coord> ScheduleMatrix::candidateCells(std::uint32_t count,
                                                  std::mt19937_64& rng) const {
  std::vector<std::uint16_t> freeSlots;
  freeSlots.reserve(slotframeLength_);
  for (std::uint16_t s = 0; s < slotframeLength_; ++s) {
    if (slotIndex_[s] == nullptr && !reservedSlots_.count(s)) freeSlots.push_back(s);
  }
  std::vector<Coord> out;
  // Partial Fisher-Yates over the free slots; one coordinate per slot keeps the
  // single-duty rule satisfiable at install time.
  std::uint32_t take = std::min<std::uint32_t>(count, static_cast<std::uint32_t>(freeSlots.size()));
  for (std::uint32_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, freeSlots.size() - 1);
    std::swap(freeSlots[i], freeSlots[pick(rng)]);
    std::uniform_int_distribution<std::uint16_t> chan(0, static_cast<std::uint16_t>(numChannels_ - 1));
    out.push_back({freeSlots[i], chan(rng)});
  }
  return out;
}

void ScheduleMatrix::reserve(Coord coord) {
  reservedCoords_[coord]++;
  reservedSlots_.insert(coord.slotOffset);
}

void ScheduleMatrix::release(Coord coord) {
  auto it = reservedCoords_.find(coord);
  if (it == reservedCoords_.end()) return;
  if (--it->second <= 0) reservedCoords_.erase(it);
  bool slotStillReserved = false;
  for (const auto& [c, n] : reservedCoords_) {
    if (c.slotOffset == coord.slotOffset) {
      slotStillReserved = true;
      break;
    }
  }
  if (!slotStillReserved) reservedSlots_.erase(coord.slotOffset);
}

bool ScheduleMatrix::slotReserved(std::uint16_t slotOffset) const {
  return reservedSlots_.count(slotOffset) != 0;
}

std::vector<Coord> ScheduleMatrix::negotiatedWith(NodeId peer, std::uint8_t mask) const {
  std::vector<Coord> out;
  for (const auto& [coord, cell] : cells_) {
    if (cell.isShared()) continue;
    if (cell.peer == peer && (cell.options & mask) == mask) out.push_back(coord);
  }
  return out;
}

std::size_t ScheduleMatrix::countNegotiatedWith(NodeId peer, std::uint8_t mask) const {
  return negotiatedWith(peer, mask).size();
}

std::size_t ScheduleMatrix::negotiatedCellCount() const {
  return cells_.size() - 1;  // all but the minimal cell
}

std::string ScheduleMatrix::dump() const {
  std::ostringstream os;
  for (std::uint32_t ch = 0; ch < numChannels_; ++ch) {
    for (std::uint32_t s = 0; s < slotframeLength_; ++s) {
      const Cell* cell = slotIndex_[s];
      char mark = '.';
      if (cell && cell->coord.channelOffset == ch) {
        if (cell->isShared()) {
          mark = 'S';
        } else if (cell->isTx()) {
          mark = 'T';
        } else {
          mark = 'R';
        }
      }
      os << mark;
    }
    os << '\n';
  }
  return os.str();
}

std::string ScheduleMatrix::serialize() const {
  std::ostringstream os;
  for (const auto& [coord, cell] : cells_) {
    os << coord.slotOffset << ',' << coord.channelOffset << ','
       << static_cast<int>(cell.options) << ',' << cell.peer << ';';
  }
  return os.str();
}

}  // namespace bdpc
