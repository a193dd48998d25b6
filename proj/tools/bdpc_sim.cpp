#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdpc/harness.hpp"

namespace {

int cmdRun(const std::string& presetArg, const std::string& configPath,
           unsigned seeds, long long seedBase, long long slotframes,
           const std::string& outDir, bool events, bool validate) {
  bdpc::SimConfig cfg;
  if (!configPath.empty()) cfg = bdpc::loadConfigFile(configPath);

  std::string label = "custom";
  if (!presetArg.empty()) {
    auto preset = bdpc::presetFromName(presetArg);
    if (!preset) {
      std::fprintf(stderr, "unknown preset: %s\n", presetArg.c_str());
      return 1;
    }
    bdpc::applyPreset(cfg, *preset);
    label = bdpc::presetName(*preset);
  }
  if (seeds > 0) cfg.numSeeds = seeds;
  if (seedBase >= 0) cfg.seed = static_cast<std::uint64_t>(seedBase);
  if (slotframes > 0) cfg.numSlotframes = static_cast<std::uint32_t>(slotframes);

  std::vector<std::uint64_t> seedList;
  for (std::uint32_t i = 0; i < cfg.numSeeds; ++i) seedList.push_back(cfg.seed + i);

  bdpc::RunBundle bundle;
  if (events || validate) {
    bundle.config = cfg;
    bundle.preset = label;
    for (std::uint64_t s : seedList) {
      bdpc::RunOptions options;
      options.writeEvents = events;
      options.validateInvariants = validate;
      if (!outDir.empty()) options.outDir = outDir + "/seed_" + std::to_string(s);
      bundle.runs.push_back(bdpc::runSingle(cfg, s, options));
    }
    if (!outDir.empty()) {
      std::ofstream summary(outDir + "/summary.json");
      summary << bdpc::summaryJson(bundle).dump(2) << "\n";
    }
  } else {
    bundle = bdpc::runExperiment(cfg, seedList, outDir, label);
  }

  auto summary = bdpc::summaryJson(bundle);
  const auto& agg = summary.at("aggregate");
  std::printf("preset=%s seeds=%zu\n", label.c_str(), seedList.size());
  std::printf("on_time_fraction  %.5f (std %.5f)\n",
              agg.at("on_time_fraction").at("mean").get<double>(),
              agg.at("on_time_fraction").at("std").get<double>());
  std::printf("pdr_e2e           %.5f\n", agg.at("pdr_e2e").at("mean").get<double>());
  std::printf("late_at_root      %.5f\n",
              agg.at("late_at_root").at("mean").get<double>());
  std::printf("lifetime_years    %.3f\n",
              agg.at("lifetime_years").at("mean").get<double>());
  std::printf("tx_cells_converged %.2f\n",
              agg.at("mean_converged_tx_cells").at("mean").get<double>());
  if (validate) {
    std::uint64_t violations = 0;
    for (const auto& r : bundle.runs) violations += r.invariantViolations;
    std::printf("invariant_violations %llu\n",
                static_cast<unsigned long long>(violations));
  }
  return 0;
}

int cmdCompare(const std::vector<std::string>& dirs) {
  std::vector<nlohmann::ordered_json> summaries;
  for (const std::string& dir : dirs) {
    std::ifstream in(dir + "/summary.json");
    if (!in) {
      std::fprintf(stderr, "no summary.json in %s\n", dir.c_str());
      return 1;
    }
    nlohmann::ordered_json j;
    in >> j;
    summaries.push_back(std::move(j));
  }
  auto result = bdpc::compareSummaries(summaries);
  std::printf("%s\n", result.dump(2).c_str());
  return 0;
}

int cmdValidate(const std::string& path) {
  bdpc::SimConfig cfg = bdpc::loadConfigFile(path);
  std::printf("ok config_hash=%016llx\n",
              static_cast<unsigned long long>(bdpc::configHash(cfg)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"6TiSCH deadline scheduling simulator"};
  app.require_subcommand(1);

  std::string presetArg, configPath, outDir;
  unsigned seeds = 0;
  long long seedBase = -1;
  long long slotframes = 0;
  bool events = false;
  bool validate = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  run->add_option("--preset", presetArg, "msf, bdpc1 or bdpc2");
  run->add_option("--config", configPath, "config file (json)");
  run->add_option("--seeds", seeds, "number of seeds");
  run->add_option("--seed-base", seedBase, "first seed");
  run->add_option("--slotframes", slotframes, "override run length");
  run->add_option("--out", outDir, "output directory");
  run->add_flag("--events", events, "also write events.csv");
  run->add_flag("--validate", validate, "check protocol invariants per slotframe");

  std::vector<std::string> compareDirs;
  CLI::App* cmp = app.add_subcommand("compare", "compare result bundles");
  cmp->add_option("dirs", compareDirs, "bundle directories")->expected(-2);

  std::string validatePath;
  CLI::App* val = app.add_subcommand("validate-config", "check a config file");
  val->add_option("file", validatePath, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmdRun(presetArg, configPath, seeds, seedBase, slotframes, outDir,
                    events, validate);
    }
    if (cmp->parsed()) return cmdCompare(compareDirs);
    if (val->parsed()) return cmdValidate(validatePath);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
