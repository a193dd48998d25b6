#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdpc/core.hpp"
#include "bdpc/metrics.hpp"

namespace bdpc {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class Preset { Msf, Bdpc1, Bdpc2 };

const char* presetName(Preset p);
std::optional<Preset> presetFromName(const std::string& name);

// Presets touch only the scheduling-function knobs.
void applyPreset(SimConfig& cfg, Preset p);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleBundles : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON round-trip. Parsing rejects unknown keys and out-of-range values.
nlohmann::ordered_json configToJson(const SimConfig& cfg);
SimConfig configFromJson(const nlohmann::ordered_json& j);
SimConfig loadConfigFile(const std::string& path);

// FNV-1a over the canonical JSON text.
std::uint64_t configHash(const SimConfig& cfg);
// Same, restricted to the topology/traffic/run-shape keys two bundles must
// share to be comparable.
std::uint64_t comparableHash(const SimConfig& cfg);

struct GroupResult {
  std::uint32_t group = 0;
  DelayStats delay;
  double latePaqs = 0.0;    // converged, aggregated over links toward this group
  double lateAtRoot = 0.0;  // among delivered packets sourced in this group
  double meanDelayToRootSlots = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  double pdrE2e = 0.0;
  double onTimeFraction = 0.0;
  double lateAtRoot = 0.0;
  double lifetimeYears = 0.0;      // first battery to drain, root excluded
  double meanLifetimeYears = 0.0;  // across non-root nodes
  double meanConvergedTxCells = 0.0;
  std::vector<GroupResult> groups;      // index 0 unused, 1..numGroups
  std::vector<std::int64_t> cellSeries; // one sample per 50 slotframes
  std::vector<LateRow> finalLatePaqs;   // cumulative counters at run end
  std::vector<NodeId> finalParent;
  std::uint64_t invariantViolations = 0;
};

struct RunOptions {
  std::string outDir;              // empty: no files written
  bool validateInvariants = false; // per-slotframe protocol checks
  bool writeEvents = false;
};

RunResult runSingle(const SimConfig& cfg, std::uint64_t seed,
                    const RunOptions& options = {});

struct RunBundle {
  SimConfig config;
  std::string preset;  // preset name or "custom"
  std::vector<RunResult> runs;
};

// Runs cfg over the given seeds; writes per-seed files plus summary.json and
// manifest.json when outDir is set.
RunBundle runExperiment(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                        const std::string& outDir = {},
                        const std::string& presetLabel = "custom");

nlohmann::ordered_json summaryJson(const RunBundle& bundle);
nlohmann::ordered_json manifestJson(const RunBundle& bundle,
                                    const std::vector<std::string>& files);

// Side-by-side comparison of ≥ 2 summaries over identical topology/traffic.
nlohmann::ordered_json compareSummaries(
    const std::vector<nlohmann::ordered_json>& summaries);

}  // namespace bdpc
