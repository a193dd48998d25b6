#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "bdpc/energy.hpp"
#include "bdpc/harness.hpp"
#include "bdpc/network.hpp"

namespace bdpc {

namespace {

using nlohmann::ordered_json;

double meanOf(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stdOf(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = meanOf(v);
  double sq = 0.0;
  for (double x : v) sq += (x - m) * (x - m);
  return std::sqrt(sq / static_cast<double>(v.size()));
}

ordered_json statPair(const std::vector<double>& v) {
  return ordered_json{{"mean", meanOf(v)}, {"std", stdOf(v)}};
}

std::string hashHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void expectKeys(const ordered_json& j, const std::set<std::string>& allowed,
                const std::string& scope) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown config key: " + scope + key);
    }
  }
}

template <typename T>
void readUint(const ordered_json& j, const char* key, T& out, std::uint64_t lo,
              std::uint64_t hi) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  std::int64_t raw = v.get<std::int64_t>();
  if (raw < 0 || static_cast<std::uint64_t>(raw) < lo ||
      static_cast<std::uint64_t>(raw) > hi) {
    throw ConfigError(std::string(key) + " out of range");
  }
  out = static_cast<T>(raw);
}

void readDouble(const ordered_json& j, const char* key, double& out, double lo,
                double hi) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  double raw = v.get<double>();
  if (!(raw >= lo && raw <= hi)) {
    throw ConfigError(std::string(key) + " out of range");
  }
  out = raw;
}

void readBool(const ordered_json& j, const char* key, bool& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
  out = v.get<bool>();
}

// Counts mirror and single-duty breaks plus routing loops; zero on a healthy
// network.
std::uint64_t validateNetwork(const Network& net) {
  std::uint64_t violations = 0;
  for (const Node& node : net.nodes) {
    std::map<std::uint16_t, int> perSlot;
    for (const auto& [coord, cell] : node.schedule.cells()) {
      ++perSlot[coord.slotOffset];
      if (cell.isShared()) continue;
      const Cell* mirror = net.node(cell.peer).schedule.find(coord);
      if (mirror == nullptr || mirror->peer != node.id ||
          cell.isTx() != mirror->isRx() || cell.isRx() != mirror->isTx()) {
        ++violations;
      }
    }
    for (const auto& [slot, count] : perSlot) {
      (void)slot;
      if (count > 1) violations += static_cast<std::uint64_t>(count - 1);
    }
  }
  for (const Node& node : net.nodes) {
    if (node.isRoot() || !node.joined) continue;
    NodeId cur = node.id;
    std::size_t steps = 0;
    while (cur != kRootId && cur != kNoNode && steps <= net.nodes.size()) {
      cur = net.node(cur).rpl.parent;
      ++steps;
    }
    if (cur != kRootId) ++violations;
  }
  return violations;
}

}  // namespace

const char* presetName(Preset p) {
  switch (p) {
    case Preset::Msf:
      return "msf";
    case Preset::Bdpc1:
      return "bdpc1";
    default:
      return "bdpc2";
  }
}

std::optional<Preset> presetFromName(const std::string& name) {
  if (name == "msf") return Preset::Msf;
  if (name == "bdpc1") return Preset::Bdpc1;
  if (name == "bdpc2") return Preset::Bdpc2;
  return std::nullopt;
}

void applyPreset(SimConfig& cfg, Preset p) {
  switch (p) {
    case Preset::Msf:
      cfg.bdpcEnabled = false;
      break;
    case Preset::Bdpc1:
      cfg.bdpcEnabled = true;
      cfg.sfMax = 0.1;
      cfg.sfMin = 0.05;
      break;
    case Preset::Bdpc2:
      cfg.bdpcEnabled = true;
      cfg.sfMax = 0.0001;
      cfg.sfMin = 0.00001;
      break;
  }
}

ordered_json configToJson(const SimConfig& cfg) {
  ordered_json j;
  j["slotframe_length"] = cfg.slotframeLength;
  j["num_channels"] = cfg.numChannels;
  j["slot_duration_s"] = cfg.slotDurationS;
  j["max_delay_s"] = cfg.maxDelayS;
  j["packet_period_s"] = cfg.packetPeriodS;
  j["packet_period_std_s"] = cfg.packetPeriodStdS;
  j["payload_bytes"] = cfg.payloadBytes;
  j["tx_queue_size"] = cfg.txQueueSize;
  j["control_queue_reserve"] = cfg.controlQueueReserve;
  j["max_retries"] = cfg.maxRetries;
  j["sf_max"] = cfg.sfMax;
  j["sf_min"] = cfg.sfMin;
  j["bdpc_enabled"] = cfg.bdpcEnabled;
  j["pre_hop_add_cell_count"] = cfg.preHopAddCellCount;
  j["reset_counters_on_action"] = cfg.resetCountersOnAction;
  j["msf_window"] = cfg.msfWindow;
  j["msf_high_limit"] = cfg.msfHighLimit;
  j["msf_low_limit"] = cfg.msfLowLimit;
  j["candidate_list_length"] = cfg.candidateListLength;
  j["sixp_timeout_slotframes"] = cfg.sixpTimeoutSlotframes;
  j["rank_base"] = cfg.rankBase;
  j["rank_increase"] = cfg.rankIncrease;
  j["rank_hysteresis"] = cfg.rankHysteresis;
  j["dio_period_slots"] = cfg.dioPeriodSlots;
  j["dio_jitter_slots"] = cfg.dioJitterSlots;
  j["groups"] = cfg.groups;
  j["group_size"] = cfg.groupSize;
  j["pdr_link"] = cfg.pdrLink;
  j["rssi_link_dbm"] = cfg.rssiLinkDbm;
  j["num_slotframes"] = cfg.numSlotframes;
  j["seed"] = cfg.seed;
  j["num_seeds"] = cfg.numSeeds;
  j["stats_start_slotframe"] = cfg.statsStartSlotframe;
  j["energy"] = ordered_json{{"tx_data_rx_ack_uc", cfg.charge.txDataRxAckUc},
                             {"rx_data_tx_ack_uc", cfg.charge.rxDataTxAckUc},
                             {"idle_listen_uc", cfg.charge.idleListenUc},
                             {"tx_broadcast_uc", cfg.charge.txBroadcastUc},
                             {"rx_broadcast_uc", cfg.charge.rxBroadcastUc},
                             {"sleep_uc", cfg.charge.sleepUc},
                             {"battery_mah", cfg.charge.batteryMah}};
  return j;
}

SimConfig configFromJson(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  static const std::set<std::string> kKeys = {
      "slotframe_length", "num_channels", "slot_duration_s", "max_delay_s",
      "packet_period_s", "packet_period_std_s", "payload_bytes", "tx_queue_size",
      "control_queue_reserve", "max_retries", "sf_max", "sf_min", "bdpc_enabled",
      "pre_hop_add_cell_count", "reset_counters_on_action", "msf_window",
      "msf_high_limit", "msf_low_limit", "candidate_list_length",
      "sixp_timeout_slotframes", "rank_base", "rank_increase", "rank_hysteresis",
      "dio_period_slots", "dio_jitter_slots", "groups", "group_size", "pdr_link",
      "rssi_link_dbm", "num_slotframes", "seed", "num_seeds",
      "stats_start_slotframe", "energy"};
  expectKeys(j, kKeys, "");

  SimConfig cfg;
  readUint(j, "slotframe_length", cfg.slotframeLength, 2, 65535);
  readUint(j, "num_channels", cfg.numChannels, 1, 65535);
  readDouble(j, "slot_duration_s", cfg.slotDurationS, 1e-6, 10.0);
  readDouble(j, "max_delay_s", cfg.maxDelayS, 1e-6, 1e6);
  readDouble(j, "packet_period_s", cfg.packetPeriodS, 1e-6, 1e9);
  readDouble(j, "packet_period_std_s", cfg.packetPeriodStdS, 0.0, 1e9);
  readUint(j, "payload_bytes", cfg.payloadBytes, 0, 1u << 16);
  readUint(j, "tx_queue_size", cfg.txQueueSize, 1, 1u << 20);
  readUint(j, "control_queue_reserve", cfg.controlQueueReserve, 0, 1u << 20);
  readUint(j, "max_retries", cfg.maxRetries, 0, 1000);
  readDouble(j, "sf_max", cfg.sfMax, 0.0, 1.0);
  readDouble(j, "sf_min", cfg.sfMin, 0.0, 1.0);
  readBool(j, "bdpc_enabled", cfg.bdpcEnabled);
  readUint(j, "pre_hop_add_cell_count", cfg.preHopAddCellCount, 1, 16);
  readBool(j, "reset_counters_on_action", cfg.resetCountersOnAction);
  readUint(j, "msf_window", cfg.msfWindow, 1, 1u << 20);
  readDouble(j, "msf_high_limit", cfg.msfHighLimit, 0.0, 1.0);
  readDouble(j, "msf_low_limit", cfg.msfLowLimit, 0.0, 1.0);
  readUint(j, "candidate_list_length", cfg.candidateListLength, 1, 64);
  readUint(j, "sixp_timeout_slotframes", cfg.sixpTimeoutSlotframes, 1, 1000);
  readUint(j, "rank_base", cfg.rankBase, 0, 1u << 24);
  readUint(j, "rank_increase", cfg.rankIncrease, 1, 1u << 24);
  readUint(j, "rank_hysteresis", cfg.rankHysteresis, 0, 1u << 24);
  readUint(j, "dio_period_slots", cfg.dioPeriodSlots, 1, 1u << 24);
  readUint(j, "dio_jitter_slots", cfg.dioJitterSlots, 0, 1u << 16);
  readUint(j, "groups", cfg.groups, 1, 1000);
  readUint(j, "group_size", cfg.groupSize, 1, 1000);
  readDouble(j, "pdr_link", cfg.pdrLink, 0.0, 1.0);
  readDouble(j, "rssi_link_dbm", cfg.rssiLinkDbm, -200.0, 50.0);
  readUint(j, "num_slotframes", cfg.numSlotframes, 1, 1u << 30);
  readUint(j, "seed", cfg.seed, 0, ~0ull >> 1);
  readUint(j, "num_seeds", cfg.numSeeds, 1, 100000);
  readUint(j, "stats_start_slotframe", cfg.statsStartSlotframe, 0, 1u << 30);

  if (j.contains("energy")) {
    const auto& e = j.at("energy");
    if (!e.is_object()) throw ConfigError("energy must be an object");
    static const std::set<std::string> kEnergyKeys = {
        "tx_data_rx_ack_uc", "rx_data_tx_ack_uc", "idle_listen_uc",
        "tx_broadcast_uc", "rx_broadcast_uc", "sleep_uc", "battery_mah"};
    expectKeys(e, kEnergyKeys, "energy.");
    readDouble(e, "tx_data_rx_ack_uc", cfg.charge.txDataRxAckUc, 0.0, 1e9);
    readDouble(e, "rx_data_tx_ack_uc", cfg.charge.rxDataTxAckUc, 0.0, 1e9);
    readDouble(e, "idle_listen_uc", cfg.charge.idleListenUc, 0.0, 1e9);
    readDouble(e, "tx_broadcast_uc", cfg.charge.txBroadcastUc, 0.0, 1e9);
    readDouble(e, "rx_broadcast_uc", cfg.charge.rxBroadcastUc, 0.0, 1e9);
    readDouble(e, "sleep_uc", cfg.charge.sleepUc, 0.0, 1e9);
    readDouble(e, "battery_mah", cfg.charge.batteryMah, 1e-9, 1e9);
  }

  if (cfg.sfMin > cfg.sfMax) throw ConfigError("sf_min must not exceed sf_max");
  if (cfg.msfLowLimit >= cfg.msfHighLimit) {
    throw ConfigError("msf_low_limit must be below msf_high_limit");
  }
  if (cfg.statsStartSlotframe >= cfg.numSlotframes) {
    throw ConfigError("stats_start_slotframe must be below num_slotframes");
  }
  return cfg;
}

SimConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return configFromJson(j);
}

std::uint64_t configHash(const SimConfig& cfg) {
  return fnv1a(configToJson(cfg).dump());
}

std::uint64_t comparableHash(const SimConfig& cfg) {
  ordered_json j;
  j["slotframe_length"] = cfg.slotframeLength;
  j["num_channels"] = cfg.numChannels;
  j["slot_duration_s"] = cfg.slotDurationS;
  j["max_delay_s"] = cfg.maxDelayS;
  j["packet_period_s"] = cfg.packetPeriodS;
  j["packet_period_std_s"] = cfg.packetPeriodStdS;
  j["payload_bytes"] = cfg.payloadBytes;
  j["groups"] = cfg.groups;
  j["group_size"] = cfg.groupSize;
  j["pdr_link"] = cfg.pdrLink;
  j["num_slotframes"] = cfg.numSlotframes;
  j["stats_start_slotframe"] = cfg.statsStartSlotframe;
  return fnv1a(j.dump());
}

RunResult runSingle(const SimConfig& cfg, std::uint64_t seed,
                    const RunOptions& options) {
  Network net(cfg, seed);
  RunResult res;
  res.seed = seed;

  for (std::uint32_t sf = 0; sf < cfg.numSlotframes; ++sf) {
    runSlotframe(net);
    if (options.validateInvariants) res.invariantViolations += validateNetwork(net);
  }
  flagStuckPackets(net);

  Asn windowStart = static_cast<Asn>(cfg.statsStartSlotframe) * cfg.slotframeLength;
  auto budget = static_cast<Asn>(delayBudgetSlots(cfg.maxDelayS, cfg.slotDurationS));
  Asn total = cfg.totalSlots();
  Asn trimStart = total > 2 * budget ? total - 2 * budget : 0;

  const auto& records = net.metrics.records();
  res.generated = records.size();
  for (const PacketRecord& r : records) {
    if (r.arrived) ++res.delivered;
  }
  res.pdrE2e = pdrE2e(records, trimStart);
  res.onTimeFraction = onTimeFraction(records, windowStart);
  res.lateAtRoot = lateAtRoot(records, windowStart);

  std::vector<double> lifetimes;
  for (const Node& node : net.nodes) {
    if (node.isRoot()) continue;
    lifetimes.push_back(lifetimeYears(node.energy, cfg.charge, cfg.slotDurationS));
  }
  res.lifetimeYears = lifetimes.empty()
                          ? 0.0
                          : *std::min_element(lifetimes.begin(), lifetimes.end());
  res.meanLifetimeYears = meanOf(lifetimes);

  res.cellSeries = net.metrics.cellSeries();
  std::size_t firstBin = cfg.statsStartSlotframe / 50;
  std::vector<double> converged;
  for (std::size_t i = firstBin; i < res.cellSeries.size(); ++i) {
    converged.push_back(static_cast<double>(res.cellSeries[i]));
  }
  res.meanConvergedTxCells = meanOf(converged);

  res.groups.resize(cfg.groups + 1);
  struct GroupAccum {
    std::uint64_t arrived = 0;
    std::uint64_t late = 0;
    std::uint64_t inTime = 0;
    std::uint64_t delayed = 0;
  };
  std::vector<GroupAccum> accum(cfg.groups + 1);
  for (const PacketRecord& r : records) {
    if (r.originAsn < windowStart || !r.arrived || r.group == 0 ||
        r.group > cfg.groups) {
      continue;
    }
    ++accum[r.group].arrived;
    if (!r.onTime) ++accum[r.group].late;
  }
  for (const Node& node : net.nodes) {
    for (const auto& [child, stats] : node.sf.childStats) {
      res.finalLatePaqs.push_back(
          {net.asn, node.id, child, stats.inTime, stats.delayed});
      std::uint32_t g = net.topology.groupOf(child);
      if (g >= 1 && g <= cfg.groups) {
        accum[g].inTime += stats.inTime;
        accum[g].delayed += stats.delayed;
      }
    }
  }
  for (std::uint32_t g = 1; g <= cfg.groups; ++g) {
    GroupResult& gr = res.groups[g];
    gr.group = g;
    gr.delay = delayStats(records, g, windowStart, cfg.slotDurationS);
    gr.lateAtRoot = accum[g].arrived > 0 ? static_cast<double>(accum[g].late) /
                                               static_cast<double>(accum[g].arrived)
                                         : 0.0;
    std::uint64_t judged = accum[g].inTime + accum[g].delayed;
    gr.latePaqs = judged > 0 ? static_cast<double>(accum[g].delayed) /
                                   static_cast<double>(judged)
                             : 0.0;
    gr.meanDelayToRootSlots = net.metrics.meanDelayToRootSlots(g);
  }

  res.finalParent.resize(net.nodes.size(), kNoNode);
  for (const Node& node : net.nodes) res.finalParent[node.id] = node.rpl.parent;

  if (!options.outDir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.outDir, ec);
    if (ec) throw IoError("cannot create " + options.outDir);
    net.metrics.writePacketsCsv(options.outDir + "/packets.csv", cfg.slotDurationS);
    net.metrics.writeLateRowsCsv(options.outDir + "/latepaqs.csv");
    net.metrics.writeCellsCsv(options.outDir + "/cells.csv");
    if (options.writeEvents) net.log.writeCsv(options.outDir + "/events.csv");
  }
  return res;
}

static ordered_json runJson(const RunResult& r) {
  ordered_json groups = ordered_json::array();
  for (std::size_t g = 1; g < r.groups.size(); ++g) {
    const GroupResult& gr = r.groups[g];
    groups.push_back(ordered_json{{"group", gr.group},
                                  {"delay_mean_s", gr.delay.meanS},
                                  {"delay_std_s", gr.delay.stdS},
                                  {"delivered", gr.delay.count},
                                  {"late_paqs", gr.latePaqs},
                                  {"late_at_root", gr.lateAtRoot},
                                  {"mean_d2r_slots", gr.meanDelayToRootSlots}});
  }
  return ordered_json{{"seed", r.seed},
                      {"generated", r.generated},
                      {"delivered", r.delivered},
                      {"pdr_e2e", r.pdrE2e},
                      {"on_time_fraction", r.onTimeFraction},
                      {"late_at_root", r.lateAtRoot},
                      {"lifetime_years", r.lifetimeYears},
                      {"mean_lifetime_years", r.meanLifetimeYears},
                      {"mean_converged_tx_cells", r.meanConvergedTxCells},
                      {"invariant_violations", r.invariantViolations},
                      {"groups", groups}};
}

nlohmann::ordered_json summaryJson(const RunBundle& bundle) {
  std::vector<double> onTime, pdr, late, life, meanLife, cells;
  for (const RunResult& r : bundle.runs) {
    onTime.push_back(r.onTimeFraction);
    pdr.push_back(r.pdrE2e);
    late.push_back(r.lateAtRoot);
    life.push_back(r.lifetimeYears);
    meanLife.push_back(r.meanLifetimeYears);
    cells.push_back(r.meanConvergedTxCells);
  }

  ordered_json groups = ordered_json::array();
  for (std::uint32_t g = 1; g <= bundle.config.groups; ++g) {
    std::vector<double> dm, ds, lp, lar, d2r;
    for (const RunResult& r : bundle.runs) {
      if (g >= r.groups.size()) continue;
      dm.push_back(r.groups[g].delay.meanS);
      ds.push_back(r.groups[g].delay.stdS);
      lp.push_back(r.groups[g].latePaqs);
      lar.push_back(r.groups[g].lateAtRoot);
      d2r.push_back(r.groups[g].meanDelayToRootSlots);
    }
    groups.push_back(ordered_json{{"group", g},
                                  {"delay_mean_s", statPair(dm)},
                                  {"delay_std_s", statPair(ds)},
                                  {"late_paqs", statPair(lp)},
                                  {"late_at_root", statPair(lar)},
                                  {"mean_d2r_slots", statPair(d2r)}});
  }

  ordered_json runs = ordered_json::array();
  std::vector<std::uint64_t> seeds;
  for (const RunResult& r : bundle.runs) {
    runs.push_back(runJson(r));
    seeds.push_back(r.seed);
  }

  return ordered_json{
      {"code_version", kCodeVersion},
      {"preset", bundle.preset},
      {"config_hash", hashHex(configHash(bundle.config))},
      {"comparable_hash", hashHex(comparableHash(bundle.config))},
      {"seeds", seeds},
      {"aggregate", ordered_json{{"on_time_fraction", statPair(onTime)},
                                 {"pdr_e2e", statPair(pdr)},
                                 {"late_at_root", statPair(late)},
                                 {"lifetime_years", statPair(life)},
                                 {"mean_lifetime_years", statPair(meanLife)},
                                 {"mean_converged_tx_cells", statPair(cells)},
                                 {"groups", groups}}},
      {"runs", runs}};
}

nlohmann::ordered_json manifestJson(const RunBundle& bundle,
                                    const std::vector<std::string>& files) {
  return ordered_json{{"code_version", kCodeVersion},
                      {"preset", bundle.preset},
                      {"config_hash", hashHex(configHash(bundle.config))},
                      {"comparable_hash", hashHex(comparableHash(bundle.config))},
                      {"config", configToJson(bundle.config)},
                      {"files", files}};
}

RunBundle runExperiment(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                        const std::string& outDir, const std::string& presetLabel) {
  RunBundle bundle;
  bundle.config = cfg;
  bundle.preset = presetLabel;

  std::vector<std::string> files;
  for (std::uint64_t seed : seeds) {
    RunOptions options;
    if (!outDir.empty()) {
      options.outDir = outDir + "/seed_" + std::to_string(seed);
      files.push_back("seed_" + std::to_string(seed) + "/packets.csv");
      files.push_back("seed_" + std::to_string(seed) + "/latepaqs.csv");
      files.push_back("seed_" + std::to_string(seed) + "/cells.csv");
    }
    bundle.runs.push_back(runSingle(cfg, seed, options));
  }

  if (!outDir.empty()) {
    std::ofstream summary(outDir + "/summary.json");
    if (!summary) throw IoError("cannot write summary.json under " + outDir);
    summary << summaryJson(bundle).dump(2) << "\n";
    std::ofstream manifest(outDir + "/manifest.json");
    if (!manifest) throw IoError("cannot write manifest.json under " + outDir);
    manifest << manifestJson(bundle, files).dump(2) << "\n";
  }
  return bundle;
}

nlohmann::ordered_json compareSummaries(
    const std::vector<nlohmann::ordered_json>& summaries) {
  if (summaries.size() < 2) {
    throw IncompatibleBundles("compare needs at least two bundles");
  }
  std::string comparable;
  for (const auto& s : summaries) {
    if (!s.contains("comparable_hash")) {
      throw IncompatibleBundles("summary lacks comparable_hash");
    }
    std::string h = s.at("comparable_hash").get<std::string>();
    if (comparable.empty()) {
      comparable = h;
    } else if (h != comparable) {
      throw IncompatibleBundles("bundles cover different topology or traffic");
    }
  }

  auto metric = [](const ordered_json& s, const char* key) {
    return s.at("aggregate").at(key).at("mean").get<double>();
  };

  ordered_json rows = ordered_json::array();
  for (const auto& s : summaries) {
    rows.push_back(ordered_json{
        {"preset", s.at("preset")},
        {"config_hash", s.at("config_hash")},
        {"on_time_fraction", metric(s, "on_time_fraction")},
        {"pdr_e2e", metric(s, "pdr_e2e")},
        {"lifetime_years", metric(s, "lifetime_years")},
        {"mean_converged_tx_cells", metric(s, "mean_converged_tx_cells")}});
  }

  const ordered_json& base = summaries.front();
  ordered_json deltas = ordered_json::array();
  for (const auto& s : summaries) {
    double baseOnTime = metric(base, "on_time_fraction");
    deltas.push_back(ordered_json{
        {"preset", s.at("preset")},
        {"d_on_time_fraction", metric(s, "on_time_fraction") - baseOnTime},
        {"on_time_ratio",
         baseOnTime > 0.0 ? metric(s, "on_time_fraction") / baseOnTime : 0.0},
        {"d_pdr_e2e", metric(s, "pdr_e2e") - metric(base, "pdr_e2e")},
        {"d_lifetime_years",
         metric(s, "lifetime_years") - metric(base, "lifetime_years")},
        {"d_mean_converged_tx_cells",
         metric(s, "mean_converged_tx_cells") -
             metric(base, "mean_converged_tx_cells")}});
  }
  return ordered_json{{"comparable_hash", comparable},
                      {"bundles", rows},
                      {"deltas", deltas}};
}

}  // namespace bdpc
