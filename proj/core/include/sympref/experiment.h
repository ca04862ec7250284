// Copyright 2026 The sympref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMPREF_EXPERIMENT_H_
#define SYMPREF_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sympref/diagnostics.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Pipeline { kReward, kRlhf, kOffline };
enum class Generator { kTabular, kExact };

struct DatasetConfig {
  Generator generator = Generator::kTabular;
  std::size_t space_size = 10;
  RewardLaw reward_law = RewardLaw::kDigits;
  std::size_t n_train = 10000;
  std::size_t n_test = 1000;  // ignored by the exact generator
  bool features = false;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::vector<std::string> losses;
  std::vector<NoiseSpec> noise;
  std::vector<std::uint64_t> seeds;
  double learning_rate = 0.05;
  int epochs = 1000;
  ModelKind model = ModelKind::kTabular;
  std::optional<double> clip;  // unhinged falls back to 20 when unset
  std::optional<InitSpec> init;
  Pipeline pipeline = Pipeline::kReward;
  double beta = 1.0;
  std::filesystem::path out_dir;  // empty: keep results in memory only
  int jobs = 1;

  // Throws ConfigError.
  void Validate() const;
  std::size_t cell_count() const { return losses.size() * noise.size() * seeds.size(); }
};

// Parses the JSON config schema documented in README.md. Unknown keys and
// bad values raise ConfigError.
ExperimentConfig ConfigFromJson(const std::string& text);
// Canonical form; out_dir and jobs are omitted because they do not affect results.
std::string ConfigToJson(const ExperimentConfig& cfg);
// 16 hex digits, FNV-1a over ConfigToJson.
std::string ConfigHash(const ExperimentConfig& cfg);

struct CellResult {
  std::string key;
  DiagnosticsReport report;
  std::optional<std::string> error;
};

struct MetricSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // population SD
};

struct CellAggregate {
  std::string loss;
  NoiseSpec noise;
  MetricSummary reward_accuracy;
  MetricSummary rank_rate;
  std::optional<MetricSummary> cpe_err;
  std::optional<MetricSummary> margin;
  std::size_t failures = 0;
};

struct ExperimentReport {
  std::vector<CellResult> rows;  // loss-major, then noise, then seed
  std::vector<CellAggregate> aggregates;  // loss-major, then noise
  std::string config_hash;
  std::string version = kArtifactVersion;

  std::size_t failures() const;
  const CellAggregate& Aggregate(const std::string& loss, std::size_t noise_index) const;
};

// Runs one (loss, noise, seed) cell. Throws on failure.
DiagnosticsReport RunCell(const ExperimentConfig& cfg, const std::string& loss,
                          const NoiseSpec& noise, std::uint64_t seed);

// Runs every cell on up to cfg.jobs threads. Cell errors are captured in
// their rows. With a non-empty out_dir writes cells/<key>.json, results.csv,
// summary.csv, table.txt and manifest.json there.
ExperimentReport RunSweep(const ExperimentConfig& cfg);

std::string ResultsCsv(const ExperimentReport& report);
std::string SummaryCsv(const ExperimentReport& report);
// Losses as rows, noise settings as columns, "mean ± sd" reward accuracy in percent.
std::string SweepTable(const ExperimentReport& report);

struct Fig2Options {
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  double class_prior = 0.8;
  double eps_p = 0.0;
  double eps_n = 0.5;
  double theta_lo = -3.0;
  double theta_hi = 3.0;
  std::size_t theta_points = 61;
};

struct Fig2Row {
  double theta = 0.0;
  std::string loss;
  double risk_pre = 0.0;
  double risk_post = 0.0;
};

// Risk of r(a) = theta * a on the noisy Gaussian pairs, before and after
// random_flip, for each of the seven pointwise losses.
std::vector<Fig2Row> RunFig2(const Fig2Options& options = {});
std::string Fig2Csv(const std::vector<Fig2Row>& rows);
double MaxFig2Gap(const std::vector<Fig2Row>& rows);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string kind;
};
void WriteManifest(const std::filesystem::path& out_dir, const std::string& command,
                   const std::vector<ManifestEntry>& files, const std::string& config_hash = "");

}  // namespace sympref

#endif  // SYMPREF_EXPERIMENT_H_
