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

#include "sympref/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"
#include "sympref/errors.h"
#include "sympref/io.h"
#include "sympref/losses.h"
#include "sympref/policy.h"

namespace sympref {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDefaultUnhingedClip = 20.0;

const std::map<std::string, Pipeline> kPipelines = {
    {"reward", Pipeline::kReward}, {"rlhf", Pipeline::kRlhf}, {"offline", Pipeline::kOffline}};
const std::map<std::string, Generator> kGenerators = {{"tabular", Generator::kTabular},
                                                      {"exact", Generator::kExact}};
const std::map<std::string, RewardLaw> kLaws = {{"digits", RewardLaw::kDigits},
                                                {"uniform", RewardLaw::kUniform},
                                                {"gaussian", RewardLaw::kGaussian}};

template <typename T>
std::string NameOf(const std::map<std::string, T>& table, T value) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "?";
}

template <typename T>
T Lookup(const std::map<std::string, T>& table, const std::string& key, const std::string& what) {
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown " + what + " '" + key + "'");
  return it->second;
}

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

NoiseSpec NoiseFromJson(const json& j) {
  if (j.is_number()) return NoiseSpec::Symmetric(j.get<double>());
  if (j.is_object()) {
    RejectUnknownKeys(j, {"eps_p", "eps_n"}, "noise entry");
    const double p = j.at("eps_p").get<double>();
    const double n = j.at("eps_n").get<double>();
    return p == n ? NoiseSpec::Symmetric(p) : NoiseSpec::Asymmetric(p, n);
  }
  throw ConfigError("noise entries must be numbers or {eps_p, eps_n} objects");
}

std::string Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string CellKey(const std::string& loss, const NoiseSpec& noise, std::uint64_t seed) {
  std::string safe;
  for (char c : loss) safe += std::isalnum(static_cast<unsigned char>(c)) || c == '.' ? c : '_';
  return safe + "__p" + FormatNumber(noise.eps_p) + "_n" + FormatNumber(noise.eps_n) + "__s" +
         std::to_string(seed);
}

MetricSummary Summarize(const std::vector<double>& xs) {
  MetricSummary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(xs.size()));
  return s;
}

std::string SummaryFields(const std::optional<MetricSummary>& m) {
  if (!m) return ",";
  return FormatNumber(m->mean) + ',' + FormatNumber(m->sd);
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (losses.empty()) throw ConfigError("loss list is empty");
  if (noise.empty()) throw ConfigError("noise grid is empty");
  if (seeds.empty()) throw ConfigError("seeds list is empty");
  for (const auto& l : losses) {
    try {
      ParseLoss(l);
    } catch (const Error& e) {
      throw ConfigError("loss '" + l + "' does not resolve: " + e.what());
    }
  }
  for (const auto& n : noise) {
    try {
      n.Validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("inadmissible noise entry: ") + e.what());
    }
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (dataset.space_size < 2) throw ConfigError("space_size must be at least 2");
  if (dataset.generator == Generator::kTabular && (dataset.n_train == 0 || dataset.n_test == 0)) {
    throw ConfigError("n_train and n_test must be positive");
  }
  if (model == ModelKind::kLinear && !dataset.features) {
    throw ConfigError("a linear model needs dataset.features = true");
  }
  if (pipeline == Pipeline::kOffline && model != ModelKind::kTabular) {
    throw ConfigError("the offline pipeline is tabular only");
  }
  if (clip && !(*clip > 0.0)) throw ConfigError("clip must be positive");
}

ExperimentConfig ConfigFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    RejectUnknownKeys(j, {"dataset", "losses", "noise", "seeds", "train", "pipeline", "beta", "out", "jobs"},
                      "config");
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      RejectUnknownKeys(d, {"generator", "space_size", "reward_law", "n_train", "n_test", "features"},
                        "dataset");
      if (d.contains("generator")) {
        cfg.dataset.generator = Lookup(kGenerators, d.at("generator").get<std::string>(), "generator");
      }
      cfg.dataset.space_size = d.value("space_size", cfg.dataset.space_size);
      if (d.contains("reward_law")) {
        cfg.dataset.reward_law = Lookup(kLaws, d.at("reward_law").get<std::string>(), "reward law");
      }
      cfg.dataset.n_train = d.value("n_train", cfg.dataset.n_train);
      cfg.dataset.n_test = d.value("n_test", cfg.dataset.n_test);
      cfg.dataset.features = d.value("features", cfg.dataset.features);
    }
    if (j.contains("losses")) cfg.losses = j.at("losses").get<std::vector<std::string>>();
    if (j.contains("noise")) {
      for (const auto& n : j.at("noise")) cfg.noise.push_back(NoiseFromJson(n));
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("train")) {
      const json& t = j.at("train");
      RejectUnknownKeys(t, {"learning_rate", "epochs", "model", "clip", "init", "init_sigma"}, "train");
      cfg.learning_rate = t.value("learning_rate", cfg.learning_rate);
      cfg.epochs = t.value("epochs", cfg.epochs);
      if (t.contains("model")) {
        const std::string m = t.at("model").get<std::string>();
        if (m == "tabular") {
          cfg.model = ModelKind::kTabular;
        } else if (m == "linear") {
          cfg.model = ModelKind::kLinear;
        } else {
          throw ConfigError("unknown model '" + m + "'");
        }
      }
      if (t.contains("clip") && !t.at("clip").is_null()) cfg.clip = t.at("clip").get<double>();
      if (t.contains("init")) {
        const std::string i = t.at("init").get<std::string>();
        InitSpec spec;
        if (i == "zeros") {
          spec.kind = InitSpec::Kind::kZeros;
        } else if (i == "gaussian") {
          spec.kind = InitSpec::Kind::kGaussian;
          spec.sigma = t.value("init_sigma", spec.sigma);
        } else {
          throw ConfigError("unknown init '" + i + "'");
        }
        cfg.init = spec;
      }
    }
    if (j.contains("pipeline")) {
      cfg.pipeline = Lookup(kPipelines, j.at("pipeline").get<std::string>(), "pipeline");
    }
    cfg.beta = j.value("beta", cfg.beta);
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    cfg.jobs = j.value("jobs", cfg.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

std::string ConfigToJson(const ExperimentConfig& cfg) {
  json noise = json::array();
  for (const auto& n : cfg.noise) noise.push_back({{"eps_p", n.eps_p}, {"eps_n", n.eps_n}});
  json train = {{"learning_rate", cfg.learning_rate},
                {"epochs", cfg.epochs},
                {"model", cfg.model == ModelKind::kTabular ? "tabular" : "linear"},
                {"clip", cfg.clip ? json(*cfg.clip) : json(nullptr)}};
  if (cfg.init) {
    train["init"] = cfg.init->kind == InitSpec::Kind::kZeros ? "zeros" : "gaussian";
    train["init_sigma"] = cfg.init->sigma;
  }
  const json j = {
      {"dataset",
       {{"generator", NameOf(kGenerators, cfg.dataset.generator)},
        {"space_size", cfg.dataset.space_size},
        {"reward_law", NameOf(kLaws, cfg.dataset.reward_law)},
        {"n_train", cfg.dataset.n_train},
        {"n_test", cfg.dataset.n_test},
        {"features", cfg.dataset.features}}},
      {"losses", cfg.losses},
      {"noise", noise},
      {"seeds", cfg.seeds},
      {"train", train},
      {"pipeline", NameOf(kPipelines, cfg.pipeline)},
      {"beta", cfg.beta},
  };
  return j.dump(2);
}

std::string ConfigHash(const ExperimentConfig& cfg) { return Fnv1a(ConfigToJson(cfg)); }

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const CellResult& r) { return r.error.has_value(); }));
}

const CellAggregate& ExperimentReport::Aggregate(const std::string& loss,
                                                 std::size_t noise_index) const {
  std::size_t seen = 0;
  for (const auto& a : aggregates) {
    if (a.loss != loss) continue;
    if (seen++ == noise_index) return a;
  }
  throw LookupError("no aggregate for loss '" + loss + "' at noise index " +
                    std::to_string(noise_index));
}

DiagnosticsReport RunCell(const ExperimentConfig& cfg, const std::string& loss_text,
                          const NoiseSpec& noise, std::uint64_t seed) {
  const LossSpec loss = ParseLoss(loss_text);
  TabularOptions topt;
  topt.space_size = cfg.dataset.space_size;
  topt.reward_law = cfg.dataset.reward_law;
  topt.features = cfg.dataset.features;
  const SpacePtr space = MakeTabularSpace(topt, seed);

  PreferenceDataset clean, test;
  if (cfg.dataset.generator == Generator::kExact) {
    clean = MakeExactBtUniform(space);
    clean.set_seed(seed);
    test = clean;
  } else {
    clean = GenerateTabular(space, cfg.dataset.n_train, seed, 0);
    test = GenerateTabular(space, cfg.dataset.n_test, seed, 1);
  }
  Rng noise_rng(seed, Stream::kNoise);
  const PreferenceDataset train = InjectNoise(clean, noise, noise_rng);

  TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.epochs = cfg.epochs;
  tc.loss = loss;
  tc.seed = seed;
  tc.mode = cfg.dataset.generator == Generator::kExact ? RiskMode::kExact : RiskMode::kEmpirical;
  tc.init = cfg.init;
  tc.model_kind = cfg.model;
  tc.clip = cfg.clip;
  if (!tc.clip && loss.kind() == LossKind::kUnhinged) tc.clip = kDefaultUnhingedClip;

  DiagnosticsReport rep;
  rep.loss = loss_text;
  rep.noise = noise;
  rep.seed = seed;
  const std::vector<double> ref = UniformReference(space->size());

  RewardModel model;
  if (cfg.pipeline == Pipeline::kOffline) {
    const PolicyTrainResult pr = TrainPolicyOffline(train, loss, ref, cfg.beta, tc);
    model = ImplicitReward(pr.policy);
    rep.improvement_margin = ImprovementMargin(pr.policy, *space);
  } else {
    model = TrainReward(train, tc).model;
    if (cfg.pipeline == Pipeline::kRlhf) {
      rep.improvement_margin =
          ImprovementMargin(OptimalPolicy(model, *space, ref, cfg.beta), *space);
    }
  }
  rep.reward_accuracy = RewardAccuracy(model, test);
  rep.rank_preservation_rate = RankPreservationRate(model, *space);
  if (loss.is_cpe() && model.kind == ModelKind::kTabular) {
    rep.cpe_max_error = CpeRecoveryError(model, *space, loss);
  }
  return rep;
}

ExperimentReport RunSweep(const ExperimentConfig& cfg) {
  cfg.Validate();
  ExperimentReport report;
  report.config_hash = ConfigHash(cfg);

  struct Cell {
    std::size_t loss, noise, seed;
  };
  std::vector<Cell> cells;
  for (std::size_t l = 0; l < cfg.losses.size(); ++l) {
    for (std::size_t n = 0; n < cfg.noise.size(); ++n) {
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) cells.push_back({l, n, s});
    }
  }
  report.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const std::string& loss = cfg.losses[c.loss];
      const NoiseSpec& noise = cfg.noise[c.noise];
      const std::uint64_t seed = cfg.seeds[c.seed];
      CellResult& row = report.rows[i];
      row.key = CellKey(loss, noise, seed);
      row.report.loss = loss;
      row.report.noise = noise;
      row.report.seed = seed;
      try {
        row.report = RunCell(cfg, loss, noise, seed);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Aggregation is a sequential pass in canonical order.
  for (std::size_t l = 0; l < cfg.losses.size(); ++l) {
    for (std::size_t n = 0; n < cfg.noise.size(); ++n) {
      CellAggregate agg;
      agg.loss = cfg.losses[l];
      agg.noise = cfg.noise[n];
      std::vector<double> acc, rank, cpe, margin;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const CellResult& row = report.rows[(l * cfg.noise.size() + n) * cfg.seeds.size() + s];
        if (row.error) {
          ++agg.failures;
          continue;
        }
        acc.push_back(row.report.reward_accuracy);
        rank.push_back(row.report.rank_preservation_rate);
        if (row.report.cpe_max_error) cpe.push_back(*row.report.cpe_max_error);
        if (row.report.improvement_margin) margin.push_back(*row.report.improvement_margin);
      }
      agg.reward_accuracy = Summarize(acc);
      agg.rank_rate = Summarize(rank);
      if (!cpe.empty()) agg.cpe_err = Summarize(cpe);
      if (!margin.empty()) agg.margin = Summarize(margin);
      report.aggregates.push_back(agg);
    }
  }

  if (!cfg.out_dir.empty()) {
    const Provenance prov = {{"config_hash", report.config_hash}, {"version", report.version}};
    std::vector<ManifestEntry> files;
    // Cells from an earlier run with another grid would otherwise linger.
    std::error_code ec;
    fs::remove_all(cfg.out_dir / "cells", ec);
    for (const auto& row : report.rows) {
      json j = json::parse(ReportToJson(row.report, prov));
      j["key"] = row.key;
      j["error"] = row.error ? json(*row.error) : json(nullptr);
      if (row.error) {
        for (const char* k : {"reward_accuracy", "rank_preservation_rate"}) j[k] = nullptr;
      }
      const std::string rel = "cells/" + row.key + ".json";
      WriteTextFile(cfg.out_dir / rel, j.dump(2) + "\n");
      files.push_back({rel, "cell"});
    }
    WriteTextFile(cfg.out_dir / "config.json", ConfigToJson(cfg) + "\n");
    WriteTextFile(cfg.out_dir / "results.csv", ResultsCsv(report));
    WriteTextFile(cfg.out_dir / "summary.csv", SummaryCsv(report));
    WriteTextFile(cfg.out_dir / "table.txt", SweepTable(report));
    files.insert(files.begin(), {{"config.json", "config"},
                                 {"results.csv", "results"},
                                 {"summary.csv", "summary"},
                                 {"table.txt", "table"}});
    WriteManifest(cfg.out_dir, "sweep", files, report.config_hash);
  }
  return report;
}

std::string ResultsCsv(const ExperimentReport& report) {
  std::string out = std::string(kReportCsvHeader) + ",error\n";
  for (const auto& row : report.rows) {
    if (row.error) {
      const DiagnosticsReport& r = row.report;
      std::string loss = r.loss;
      if (loss.find(',') != std::string::npos) loss = '"' + loss + '"';
      std::string msg = *row.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += loss + ',' + FormatNumber(r.noise->eps_p) + ',' + FormatNumber(r.noise->eps_n) +
             ',' + std::to_string(r.seed) + ",,,,,\"" + msg + "\"\n";
    } else {
      out += ReportCsvRow(row.report) + ",\n";
    }
  }
  return out;
}

std::string SummaryCsv(const ExperimentReport& report) {
  std::string out =
      "loss,eps_p,eps_n,n,reward_accuracy_mean,reward_accuracy_sd,rank_rate_mean,rank_rate_sd,"
      "cpe_err_mean,cpe_err_sd,margin_mean,margin_sd,failures\n";
  for (const auto& a : report.aggregates) {
    std::string loss = a.loss;
    if (loss.find(',') != std::string::npos) loss = '"' + loss + '"';
    out += loss + ',' + FormatNumber(a.noise.eps_p) + ',' + FormatNumber(a.noise.eps_n) + ',' +
           std::to_string(a.reward_accuracy.n) + ',' + SummaryFields(a.reward_accuracy) + ',' +
           SummaryFields(a.rank_rate) + ',' + SummaryFields(a.cpe_err) + ',' +
           SummaryFields(a.margin) + ',' + std::to_string(a.failures) + '\n';
  }
  return out;
}

std::string SweepTable(const ExperimentReport& report) {
  std::vector<std::string> losses;
  std::vector<NoiseSpec> noise;
  for (const auto& a : report.aggregates) {
    if (std::find(losses.begin(), losses.end(), a.loss) == losses.end()) losses.push_back(a.loss);
    if (std::find(noise.begin(), noise.end(), a.noise) == noise.end()) noise.push_back(a.noise);
  }
  std::size_t w0 = 4;
  for (const auto& l : losses) w0 = std::max(w0, l.size());
  constexpr int kCol = 16;
  char buf[64];
  std::string out = "reward accuracy (%), mean ± sd over seeds\n";
  out += std::string(w0, ' ');
  for (const auto& n : noise) {
    const std::string h = n.eps_p == n.eps_n ? "eps=" + FormatNumber(n.eps_p)
                                             : FormatNumber(n.eps_p) + "/" + FormatNumber(n.eps_n);
    std::snprintf(buf, sizeof(buf), "  %*s", kCol, h.c_str());
    out += buf;
  }
  out += '\n';
  std::size_t i = 0;
  for (const auto& l : losses) {
    out += l + std::string(w0 - l.size(), ' ');
    for (std::size_t n = 0; n < noise.size(); ++n, ++i) {
      const CellAggregate& a = report.aggregates[i];
      std::string cell = "failed";
      if (a.reward_accuracy.n > 0) {
        std::snprintf(buf, sizeof(buf), "%.1f ± %.1f", 100.0 * a.reward_accuracy.mean,
                      100.0 * a.reward_accuracy.sd);
        cell = buf;
        if (a.failures > 0) cell += "*";
      }
      // "±" is two bytes but one column.
      const int width = kCol + (a.reward_accuracy.n > 0 ? 1 : 0);
      std::snprintf(buf, sizeof(buf), "  %*s", width, cell.c_str());
      out += buf;
    }
    out += '\n';
  }
  if (report.failures() > 0) out += "* some seeds failed; see results.csv\n";
  return out;
}

std::vector<Fig2Row> RunFig2(const Fig2Options& o) {
  if (o.theta_points < 2) throw DomainError("fig2 needs at least two theta points");
  GaussianPairsOptions gopt;
  gopt.n = o.n;
  gopt.target_prior = o.class_prior;
  const PreferenceDataset clean = GenerateGaussianPairs(gopt, o.seed);
  Rng noise_rng(o.seed, Stream::kNoise);
  const PreferenceDataset pre =
      InjectNoise(clean, NoiseSpec::Asymmetric(o.eps_p, o.eps_n), noise_rng);
  Rng flip_rng(o.seed, Stream::kFlips);
  const PreferenceDataset post = RandomFlip(pre, flip_rng);

  std::vector<Fig2Row> rows;
  const double step = (o.theta_hi - o.theta_lo) / static_cast<double>(o.theta_points - 1);
  for (const LossSpec& loss : TableLosses()) {
    for (std::size_t i = 0; i < o.theta_points; ++i) {
      double theta = o.theta_lo + step * static_cast<double>(i);
      if (std::abs(theta) < 1e-12 * step) theta = 0.0;
      const RewardModel m = RewardModel::Linear({theta});
      rows.push_back({theta, loss.name(), EmpiricalRisk(m, pre, loss, LabelView::kNoisy),
                      EmpiricalRisk(m, post, loss, LabelView::kNoisy)});
    }
  }
  return rows;
}

std::string Fig2Csv(const std::vector<Fig2Row>& rows) {
  std::string out = "theta,loss_name,risk_pre,risk_post\n";
  for (const auto& r : rows) {
    out += FormatNumber(r.theta) + ',' + r.loss + ',' + FormatNumber(r.risk_pre) + ',' +
           FormatNumber(r.risk_post) + '\n';
  }
  return out;
}

double MaxFig2Gap(const std::vector<Fig2Row>& rows) {
  double gap = 0.0;
  for (const auto& r : rows) gap = std::max(gap, std::abs(r.risk_pre - r.risk_post));
  return gap;
}

void WriteManifest(const fs::path& out_dir, const std::string& command,
                   const std::vector<ManifestEntry>& files, const std::string& config_hash) {
  json list = json::array();
  for (const auto& f : files) list.push_back({{"path", f.path}, {"kind", f.kind}});
  json j = {{"command", command}, {"version", kArtifactVersion}, {"files", list}};
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  WriteTextFile(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace sympref
