#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bdpc/metrics.hpp"

namespace bdpc {

namespace {

FILE* openOrThrow(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw std::runtime_error("cannot open " + path);
  return f;
}

}  // namespace

void MetricsSink::recordGenerated(NodeId source, std::uint32_t group,
                                  std::uint32_t sequence, Asn originAsn,
                                  Asn deadlineAsn) {
  PacketRecord rec;
  rec.source = source;
  rec.group = group;
  rec.sequence = sequence;
  rec.originAsn = originAsn;
  rec.deadlineAsn = deadlineAsn;
  index_[{source, sequence}] = records_.size();
  records_.push_back(rec);
}

void MetricsSink::recordRootArrival(NodeId source, std::uint32_t sequence,
                                    Asn arrivalAsn) {
  auto it = index_.find({source, sequence});
  if (it == index_.end()) return;
  PacketRecord& rec = records_[it->second];
  if (rec.arrived) return;  // duplicates are counted once
  rec.arrived = true;
  rec.arrivalAsn = arrivalAsn;
  rec.onTime = arrivalAsn <= rec.deadlineAsn;
}

void MetricsSink::markStuck(NodeId source, std::uint32_t sequence) {
  auto it = index_.find({source, sequence});
  if (it == index_.end()) return;
  records_[it->second].stuckInQueue = true;
}

void MetricsSink::recordDelayToRoot(std::uint32_t group, std::int64_t slots) {
  auto& [sum, count] = d2rByGroup_[group];
  sum += static_cast<double>(slots);
  ++count;
}

double MetricsSink::meanDelayToRootSlots(std::uint32_t group) const {
  auto it = d2rByGroup_.find(group);
  if (it == d2rByGroup_.end() || it->second.second == 0) return 0.0;
  return it->second.first / static_cast<double>(it->second.second);
}

void MetricsSink::writePacketsCsv(const std::string& path, double slotDurationS) const {
  FILE* f = openOrThrow(path);
  std::fprintf(f, "source,group,sequence,origin_asn,arrival_asn,delay_s,on_time\n");
  for (const PacketRecord& r : records_) {
    if (r.arrived) {
      double delayS = static_cast<double>(r.arrivalAsn - r.originAsn) * slotDurationS;
      std::fprintf(f, "%u,%u,%u,%llu,%llu,%.3f,%d\n", r.source, r.group, r.sequence,
                   static_cast<unsigned long long>(r.originAsn),
                   static_cast<unsigned long long>(r.arrivalAsn), delayS,
                   r.onTime ? 1 : 0);
    } else {
      std::fprintf(f, "%u,%u,%u,%llu,,,\n", r.source, r.group, r.sequence,
                   static_cast<unsigned long long>(r.originAsn));
    }
  }
  std::fclose(f);
}

void MetricsSink::writeLateRowsCsv(const std::string& path) const {
  FILE* f = openOrThrow(path);
  std::fprintf(f, "asn,node,child,in_time,delayed,latepaqs\n");
  for (const LateRow& r : lateRows_) {
    double total = static_cast<double>(r.inTime + r.delayed);
    double late = total > 0.0 ? static_cast<double>(r.delayed) / total : 0.0;
    std::fprintf(f, "%llu,%u,%u,%llu,%llu,%.6f\n",
                 static_cast<unsigned long long>(r.asn), r.node, r.child,
                 static_cast<unsigned long long>(r.inTime),
                 static_cast<unsigned long long>(r.delayed), late);
  }
  std::fclose(f);
}

void MetricsSink::writeCellsCsv(const std::string& path) const {
  FILE* f = openOrThrow(path);
  std::fprintf(f, "bin_index,tx_cell_count\n");
  for (std::size_t i = 0; i < cellSeries_.size(); ++i) {
    std::fprintf(f, "%zu,%lld\n", i, static_cast<long long>(cellSeries_[i]));
  }
  std::fclose(f);
}

double pdrE2e(const std::vector<PacketRecord>& records, Asn trimWindowStartAsn) {
  std::uint64_t considered = 0;
  std::uint64_t delivered = 0;
  for (const PacketRecord& r : records) {
    if (!r.arrived && r.stuckInQueue && r.originAsn >= trimWindowStartAsn) {
      continue;  // still in flight when the run was cut off
    }
    ++considered;
    if (r.arrived) ++delivered;
  }
  if (considered == 0) return 1.0;
  return static_cast<double>(delivered) / static_cast<double>(considered);
}

double onTimeFraction(const std::vector<PacketRecord>& records, Asn windowStartAsn) {
  std::uint64_t arrived = 0;
  std::uint64_t onTime = 0;
  for (const PacketRecord& r : records) {
    if (r.originAsn < windowStartAsn || !r.arrived) continue;
    ++arrived;
    if (r.onTime) ++onTime;
  }
  if (arrived == 0) return 0.0;
  return static_cast<double>(onTime) / static_cast<double>(arrived);
}

double lateAtRoot(const std::vector<PacketRecord>& records, Asn windowStartAsn) {
  std::uint64_t arrived = 0;
  std::uint64_t late = 0;
  for (const PacketRecord& r : records) {
    if (r.originAsn < windowStartAsn || !r.arrived) continue;
    ++arrived;
    if (!r.onTime) ++late;
  }
  if (arrived == 0) return 0.0;
  return static_cast<double>(late) / static_cast<double>(arrived);
}

DelayStats delayStats(const std::vector<PacketRecord>& records, std::uint32_t group,
                      Asn windowStartAsn, double slotDurationS) {
  DelayStats out;
  double sum = 0.0;
  for (const PacketRecord& r : records) {
    if (r.group != group || r.originAsn < windowStartAsn || !r.arrived) continue;
    ++out.count;
    sum += static_cast<double>(r.arrivalAsn - r.originAsn) * slotDurationS;
  }
  if (out.count == 0) return out;
  out.meanS = sum / static_cast<double>(out.count);
  double sq = 0.0;
  for (const PacketRecord& r : records) {
    if (r.group != group || r.originAsn < windowStartAsn || !r.arrived) continue;
    double d = static_cast<double>(r.arrivalAsn - r.originAsn) * slotDurationS - out.meanS;
    sq += d * d;
  }
  out.stdS = std::sqrt(sq / static_cast<double>(out.count));
  return out;
}

double delayCdfAt(const std::vector<PacketRecord>& records, Asn windowStartAsn,
                  double slotDurationS, double delayS) {
  auto budget = static_cast<std::int64_t>(std::floor(delayS / slotDurationS + 1e-9));
  std::uint64_t arrived = 0;
  std::uint64_t within = 0;
  for (const PacketRecord& r : records) {
    if (r.originAsn < windowStartAsn || !r.arrived) continue;
    ++arrived;
    if (static_cast<std::int64_t>(r.arrivalAsn - r.originAsn) <= budget) ++within;
  }
  if (arrived == 0) return 0.0;
  return static_cast<double>(within) / static_cast<double>(arrived);
}

}  // namespace bdpc
