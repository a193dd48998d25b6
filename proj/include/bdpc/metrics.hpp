#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdpc/core.hpp"

namespace bdpc {

struct PacketRecord {
  NodeId source = kNoNode;
  std::uint32_t group = 0;
  std::uint32_t sequence = 0;
  Asn originAsn = 0;
  Asn deadlineAsn = 0;
  Asn arrivalAsn = 0;
  bool arrived = false;
  bool onTime = false;
  bool stuckInQueue = false;  // still queued somewhere at run end
};

struct LateRow {
  Asn asn = 0;  // slotframe-end asn of the emission
  NodeId node = kNoNode;
  NodeId child = kNoNode;
  std::uint64_t inTime = 0;
  std::uint64_t delayed = 0;
};

struct DelayStats {
  std::uint64_t count = 0;
  double meanS = 0.0;
  double stdS = 0.0;
};

// Per-run collection point for everything the CSV outputs and the
// acceptance checks need.
class MetricsSink {
 public:
  void recordGenerated(NodeId source, std::uint32_t group, std::uint32_t sequence,
                       Asn originAsn, Asn deadlineAsn);
  // Root-side terminal accounting: arrival is on time iff it beats the deadline.
  void recordRootArrival(NodeId source, std::uint32_t sequence, Asn arrivalAsn);
  void markStuck(NodeId source, std::uint32_t sequence);

  void recordLateRow(LateRow row) { lateRows_.push_back(row); }
  void recordDelayToRoot(std::uint32_t group, std::int64_t slots);

  void cellInstalled() { ++txCellCount_; }
  void cellRemoved() { --txCellCount_; }
  void sampleCellBin() { cellSeries_.push_back(txCellCount_); }
  std::int64_t currentTxCells() const { return txCellCount_; }

  const std::vector<PacketRecord>& records() const { return records_; }
  std::vector<PacketRecord>& records() { return records_; }
  const std::vector<LateRow>& lateRows() const { return lateRows_; }
  const std::vector<std::int64_t>& cellSeries() const { return cellSeries_; }
  double meanDelayToRootSlots(std::uint32_t group) const;

  void writePacketsCsv(const std::string& path, double slotDurationS) const;
  void writeLateRowsCsv(const std::string& path) const;
  void writeCellsCsv(const std::string& path) const;

 private:
  std::vector<PacketRecord> records_;
  std::map<std::pair<NodeId, std::uint32_t>, std::size_t> index_;
  std::vector<LateRow> lateRows_;
  std::vector<std::int64_t> cellSeries_;
  std::int64_t txCellCount_ = 0;
  std::map<std::uint32_t, std::pair<double, std::uint64_t>> d2rByGroup_;
};

// End-to-end delivery ratio. Excludes packets that are both still queued at
// run end and were generated inside the final trim window.
double pdrE2e(const std::vector<PacketRecord>& records, Asn trimWindowStartAsn);

// On-time share among packets received at the root, restricted to packets
// generated at or after windowStartAsn.
double onTimeFraction(const std::vector<PacketRecord>& records, Asn windowStartAsn);
double lateAtRoot(const std::vector<PacketRecord>& records, Asn windowStartAsn);

// The threshold model's prediction for the on-time share.
inline double predictedOnTime(double sfMax) { return 1.0 - sfMax; }

DelayStats delayStats(const std::vector<PacketRecord>& records, std::uint32_t group,
                      Asn windowStartAsn, double slotDurationS);

// Empirical CDF of delivered delays evaluated at delayS.
double delayCdfAt(const std::vector<PacketRecord>& records, Asn windowStartAsn,
                  double slotDurationS, double delayS);

}  // namespace bdpc
