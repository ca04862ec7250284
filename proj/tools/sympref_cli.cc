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

// Command-line front end: dataset generation, training, evaluation, sweeps
// and the probe suite. Exit codes: 0 success, 1 run failure, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sympref/diagnostics.h"
#include "sympref/errors.h"
#include "sympref/experiment.h"
#include "sympref/io.h"
#include "sympref/losses.h"
#include "sympref/policy.h"
#include "sympref/prefgen.h"
#include "sympref/probes.h"
#include "sympref/riskcore.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sympref {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

// Where a single-artifact command writes: --out may name the JSON file itself
// or a directory that receives <default_name>.
struct OutPaths {
  fs::path dir;
  fs::path main;
};

OutPaths ResolveOut(const fs::path& out, const std::string& default_name) {
  if (out.extension() == ".json") return {out.has_parent_path() ? out.parent_path() : ".", out};
  return {out, out / default_name};
}

std::string Rel(const fs::path& p, const fs::path& dir) {
  return fs::relative(p, dir).generic_string();
}

NoiseSpec NoiseFromFlags(std::optional<double> eps, std::optional<double> eps_p,
                         std::optional<double> eps_n) {
  if (eps) return NoiseSpec::Symmetric(*eps);
  return NoiseSpec::Asymmetric(eps_p.value_or(0.0), eps_n.value_or(0.0));
}

// ---- prefgen ---------------------------------------------------------------

struct PrefgenArgs {
  fs::path out;
  std::string generator = "tabular";
  std::size_t space_size = 10;
  std::string reward_law = "digits";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string mode = "empirical";
  bool features = false;
  std::optional<double> eps, eps_p, eps_n, prior;
  std::string flip = "none";
};

int RunPrefgen(const PrefgenArgs& a) {
  PreferenceDataset ds;
  if (a.generator == "gaussian") {
    if (a.mode == "exact") throw ConfigError("the gaussian generator is sample-based only");
    GaussianPairsOptions g;
    g.n = a.n;
    g.target_prior = a.prior;
    ds = GenerateGaussianPairs(g, a.seed);
  } else {
    TabularOptions t;
    t.space_size = a.space_size;
    t.reward_law = a.reward_law == "digits"    ? RewardLaw::kDigits
                   : a.reward_law == "uniform" ? RewardLaw::kUniform
                                               : RewardLaw::kGaussian;
    t.n_pairs = a.n;
    t.features = a.features;
    const SpacePtr space = MakeTabularSpace(t, a.seed);
    if (a.mode == "exact") {
      ds = MakeExactBtUniform(space);
      ds.set_seed(a.seed);
    } else {
      ds = GenerateTabular(space, a.n, a.seed);
    }
  }
  if (a.eps || a.eps_p || a.eps_n) {
    Rng rng(a.seed, Stream::kNoise);
    ds = InjectNoise(ds, NoiseFromFlags(a.eps, a.eps_p, a.eps_n), rng);
  }
  if (a.flip == "random") {
    Rng rng(a.seed, Stream::kFlips);
    ds = RandomFlip(ds, rng);
  } else if (a.flip == "symmetrize") {
    ds = FlipSymmetrize(ds);
  }
  WriteDataset(ds, a.out);
  WriteManifest(a.out, "prefgen", {{kDataFile, "dataset"}, {kSpaceFile, "space"}});
  std::printf("wrote %zu records (%s mode) to %s\n", ds.size(), ds.exact() ? "exact" : "empirical",
              a.out.string().c_str());
  return kExitOk;
}

// ---- train-reward ----------------------------------------------------------

struct TrainArgs {
  fs::path data, out;
  std::string loss;
  double lr = 0.05;
  int epochs = 1000;
  std::string mode = "auto";
  std::string model = "tabular";
  std::optional<double> clip;
  std::string init = "default";
  double init_sigma = 0.01;
  std::uint64_t seed = 0;
};

TrainConfig MakeTrainConfig(const TrainArgs& a, const PreferenceDataset& ds) {
  TrainConfig tc;
  tc.learning_rate = a.lr;
  tc.epochs = a.epochs;
  tc.loss = ParseLoss(a.loss);
  tc.seed = a.seed;
  const bool exact = a.mode == "auto" ? ds.exact() : a.mode == "exact";
  if (exact != ds.exact()) {
    throw ConfigError("--mode " + a.mode + " does not match the " +
                      (ds.exact() ? "exact" : "empirical") + " dataset");
  }
  tc.mode = exact ? RiskMode::kExact : RiskMode::kEmpirical;
  tc.model_kind = a.model == "linear" ? ModelKind::kLinear : ModelKind::kTabular;
  tc.clip = a.clip;
  if (a.init != "default") {
    InitSpec i;
    i.kind = a.init == "zeros" ? InitSpec::Kind::kZeros : InitSpec::Kind::kGaussian;
    i.sigma = a.init_sigma;
    tc.init = i;
  }
  tc.Validate();
  return tc;
}

Provenance TrainProvenance(const TrainArgs& a, const PreferenceDataset& ds) {
  return {{"loss", ParseLoss(a.loss).ToString()},
          {"learning_rate", FormatNumber(a.lr)},
          {"epochs", std::to_string(a.epochs)},
          {"seed", std::to_string(a.seed)},
          {"data", a.data.string()},
          {"data_seed", std::to_string(ds.seed())},
          {"version", kArtifactVersion}};
}

int RunTrainReward(const TrainArgs& a) {
  const PreferenceDataset ds = ReadDataset(a.data);
  const TrainConfig tc = MakeTrainConfig(a, ds);
  const TrainResult res = TrainReward(ds, tc);
  const OutPaths out = ResolveOut(a.out, "model.json");
  const fs::path trace = out.main.parent_path() / (out.main.stem().string() + ".trace.csv");
  WriteTextFile(out.main, ModelToJson(res.model, TrainProvenance(a, ds)));
  WriteTextFile(trace, TraceToCsv(res.trace));
  WriteManifest(out.dir, "train-reward",
                {{Rel(out.main, out.dir), "model"}, {Rel(trace, out.dir), "trace"}});
  std::printf("final noisy risk %.6g, clean risk %.6g -> %s\n", res.trace.noisy_risk.back(),
              res.trace.clean_risk.back(), out.main.string().c_str());
  return kExitOk;
}

// ---- train-policy ----------------------------------------------------------

struct PolicyArgs {
  TrainArgs train;
  std::string regime = "offline";
  fs::path reward;
  double beta = 1.0;
  std::vector<double> reference;
};

int RunTrainPolicy(const PolicyArgs& a) {
  const PreferenceDataset ds = ReadDataset(a.train.data);
  const std::size_t k = ds.space().size();
  const std::vector<double> ref = a.reference.empty() ? UniformReference(k) : Normalized(a.reference);
  if (ref.size() != k) throw ConfigError("--reference needs one weight per action");
  const OutPaths out = ResolveOut(a.train.out, "policy.json");
  std::vector<ManifestEntry> files = {{Rel(out.main, out.dir), "policy"}};
  Provenance prov = {{"regime", a.regime}, {"beta", FormatNumber(a.beta)}, {"version", kArtifactVersion}};
  PolicyTable policy;
  if (a.regime == "rlhf") {
    if (a.reward.empty()) throw ConfigError("--pipeline rlhf needs --reward model.json");
    const RewardModel model = ModelFromJson(ReadTextFile(a.reward));
    policy = OptimalPolicy(model, ds.space(), ref, a.beta);
    prov["reward"] = a.reward.string();
  } else {
    if (a.train.loss.empty()) throw ConfigError("--pipeline offline needs --loss");
    const TrainConfig tc = MakeTrainConfig(a.train, ds);
    const PolicyTrainResult res = TrainPolicyOffline(ds, tc.loss, ref, a.beta, tc);
    policy = res.policy;
    prov.merge(TrainProvenance(a.train, ds));
    const fs::path trace = out.main.parent_path() / (out.main.stem().string() + ".trace.csv");
    WriteTextFile(trace, TraceToCsv(res.trace));
    files.push_back({Rel(trace, out.dir), "trace"});
  }
  WriteTextFile(out.main, PolicyToJson(policy, prov));
  WriteManifest(out.dir, "train-policy", files);
  std::printf("improvement margin %.6g -> %s\n", ImprovementMargin(policy, ds.space()),
              out.main.string().c_str());
  return kExitOk;
}

// ---- eval-policy / diagnose -------------------------------------------------

int RunEvalPolicy(const fs::path& policy_path, const fs::path& data, const fs::path& out) {
  const PolicyTable policy = PolicyFromJson(ReadTextFile(policy_path));
  const SpacePtr space = ReadSpace(data);
  if (policy.probs.size() != space->size()) throw ConfigError("policy and space sizes differ");
  const RewardModel implicit = ImplicitReward(policy);
  json j = {{"expected_true_reward", ExpectedTrueReward(policy.probs, *space)},
            {"reference_true_reward", ExpectedTrueReward(policy.reference, *space)},
            {"improvement_margin", ImprovementMargin(policy, *space)},
            {"implicit_rank_preservation_rate", RankPreservationRate(implicit, *space)}};
  if (fs::is_directory(data) && fs::exists(data / kDataFile)) {
    j["implicit_reward_accuracy"] = RewardAccuracy(implicit, ReadDataset(data));
  }
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) {
    const OutPaths o = ResolveOut(out, "eval.json");
    WriteTextFile(o.main, text);
    WriteManifest(o.dir, "eval-policy", {{Rel(o.main, o.dir), "evaluation"}});
  }
  return kExitOk;
}

struct DiagnoseArgs {
  fs::path model, data, out;
  std::string loss;
  std::optional<double> beta;
};

int RunDiagnose(const DiagnoseArgs& a) {
  const RewardModel model = ModelFromJson(ReadTextFile(a.model));
  const PreferenceDataset test = ReadDataset(a.data);
  DiagnosticsReport rep;
  rep.reward_accuracy = RewardAccuracy(model, test);
  rep.rank_preservation_rate = RankPreservationRate(model, test.space());
  rep.noise = test.noise();
  rep.seed = test.seed();
  if (!a.loss.empty()) {
    const LossSpec loss = ParseLoss(a.loss);
    rep.loss = loss.ToString();
    if (loss.is_cpe()) rep.cpe_max_error = CpeRecoveryError(model, test.space(), loss);
  }
  if (a.beta) {
    const PolicyTable p = OptimalPolicy(model, test.space(), UniformReference(test.space().size()), *a.beta);
    rep.improvement_margin = ImprovementMargin(p, test.space());
  }
  const std::string text = ReportToJson(rep, {{"model", a.model.string()}, {"data", a.data.string()}});
  std::cout << text;
  if (!a.out.empty()) {
    const OutPaths o = ResolveOut(a.out, "report.json");
    const fs::path csv = o.main.parent_path() / (o.main.stem().string() + ".csv");
    WriteTextFile(o.main, text);
    WriteTextFile(csv, std::string(kReportCsvHeader) + "\n" + ReportCsvRow(rep) + "\n");
    WriteManifest(o.dir, "diagnose", {{Rel(o.main, o.dir), "report"}, {Rel(csv, o.dir), "report-row"}});
  }
  return kExitOk;
}

// ---- sweep / fig2 / verify --------------------------------------------------

struct SweepArgs {
  fs::path config, out;
  std::optional<int> jobs, epochs;
  std::optional<double> lr, beta;
  std::vector<std::string> losses;
  std::vector<double> noise;
  std::vector<std::uint64_t> seeds;
  std::string pipeline;
  std::optional<std::size_t> n_train, n_test;
};

int RunSweepCommand(const SweepArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : ConfigFromJson(ReadTextFile(a.config));
  if (!a.out.empty()) cfg.out_dir = a.out;
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.lr) cfg.learning_rate = *a.lr;
  if (a.beta) cfg.beta = *a.beta;
  if (!a.losses.empty()) cfg.losses = a.losses;
  if (!a.noise.empty()) {
    cfg.noise.clear();
    for (double e : a.noise) cfg.noise.push_back(NoiseSpec::Symmetric(e));
  }
  if (!a.seeds.empty()) cfg.seeds = a.seeds;
  if (!a.pipeline.empty()) {
    cfg.pipeline = a.pipeline == "reward" ? Pipeline::kReward
                   : a.pipeline == "rlhf" ? Pipeline::kRlhf
                                          : Pipeline::kOffline;
  }
  if (a.n_train) cfg.dataset.n_train = *a.n_train;
  if (a.n_test) cfg.dataset.n_test = *a.n_test;
  if (cfg.out_dir.empty()) throw ConfigError("sweep needs an output directory (--out or \"out\")");
  const ExperimentReport rep = RunSweep(cfg);
  std::cout << SweepTable(rep);
  std::printf("%zu cells, %zu failed, config %s -> %s\n", rep.rows.size(), rep.failures(),
              rep.config_hash.c_str(), cfg.out_dir.string().c_str());
  return rep.failures() == 0 ? kExitOk : kExitFailure;
}

int RunFig2Command(const fs::path& out, std::size_t n, std::uint64_t seed) {
  Fig2Options o;
  o.n = n;
  o.seed = seed;
  const std::vector<Fig2Row> rows = RunFig2(o);
  WriteTextFile(out / "fig2.csv", Fig2Csv(rows));
  WriteManifest(out, "fig2", {{"fig2.csv", "curves"}});
  std::printf("%zu rows, max |risk_pre - risk_post| = %.3g -> %s\n", rows.size(), MaxFig2Gap(rows),
              (out / "fig2.csv").string().c_str());
  return kExitOk;
}

int RunVerify(std::vector<int> only, std::uint64_t seed, int jobs) {
  if (only.empty()) {
    for (int i = 1; i <= kProbeCount; ++i) only.push_back(i);
  }
  ProbeOptions o;
  o.seed = seed;
  o.jobs = jobs;
  bool all = true;
  for (int id : only) {
    const ProbeResult r = RunProbe(id, o);
    std::printf("%s\n", FormatProbeLine(r).c_str());
    std::fflush(stdout);
    all = all && r.passed();
  }
  return all ? kExitOk : kExitFailure;
}

int Main(int argc, char** argv) {
  CLI::App app{"Robust preference learning with symmetric losses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kArtifactVersion);
  int rc = kExitOk;

  PrefgenArgs pg;
  auto* prefgen = app.add_subcommand("prefgen", "Generate a preference dataset");
  prefgen->add_option("--out", pg.out, "Output directory")->required();
  prefgen->add_option("generator,--generator", pg.generator, "tabular or gaussian")
      ->check(CLI::IsMember({"tabular", "gaussian"}));
  prefgen->add_option("--space-size", pg.space_size)->check(CLI::Range(2, 1000000));
  prefgen->add_option("--reward-law", pg.reward_law)
      ->check(CLI::IsMember({"digits", "uniform", "gaussian"}));
  prefgen->add_option("--n", pg.n, "Number of sampled pairs");
  prefgen->add_option("--seed", pg.seed);
  prefgen->add_option("--mode", pg.mode)->check(CLI::IsMember({"empirical", "exact"}));
  prefgen->add_flag("--features", pg.features, "Attach feature vectors to actions");
  auto* eps = prefgen->add_option("--eps", pg.eps, "Symmetric flip rate");
  prefgen->add_option("--eps-p", pg.eps_p, "Flip rate of positive labels")->excludes(eps);
  prefgen->add_option("--eps-n", pg.eps_n, "Flip rate of negative labels")->excludes(eps);
  prefgen->add_option("--prior", pg.prior, "Target class prior (gaussian generator)");
  prefgen->add_option("--flip", pg.flip)->check(CLI::IsMember({"none", "random", "symmetrize"}));
  prefgen->callback([&] { rc = RunPrefgen(pg); });

  auto add_train_flags = [](CLI::App* sub, TrainArgs& t, bool need_loss) {
    sub->add_option("--data", t.data, "Dataset directory")->required();
    auto* loss = sub->add_option("--loss", t.loss, "Loss, e.g. sigmoid or rdpo:eps=0.2");
    if (need_loss) loss->required();
    sub->add_option("--out", t.out, "Output file (.json) or directory")->required();
    sub->add_option("--lr", t.lr)->check(CLI::PositiveNumber);
    sub->add_option("--epochs", t.epochs)->check(CLI::PositiveNumber);
    sub->add_option("--mode", t.mode)->check(CLI::IsMember({"auto", "exact", "empirical"}));
    sub->add_option("--model", t.model)->check(CLI::IsMember({"tabular", "linear"}));
    sub->add_option("--clip", t.clip)->check(CLI::PositiveNumber);
    sub->add_option("--init", t.init)->check(CLI::IsMember({"default", "zeros", "gaussian"}));
    sub->add_option("--init-sigma", t.init_sigma)->check(CLI::PositiveNumber);
    sub->add_option("--seed", t.seed);
  };

  TrainArgs tr;
  auto* train_reward = app.add_subcommand("train-reward", "Fit a reward model by gradient descent");
  add_train_flags(train_reward, tr, true);
  train_reward->callback([&] { rc = RunTrainReward(tr); });

  PolicyArgs pa;
  auto* train_policy = app.add_subcommand("train-policy", "Offline policy training or closed-form RLHF policy");
  add_train_flags(train_policy, pa.train, false);
  train_policy->add_option("--pipeline,--regime", pa.regime)->check(CLI::IsMember({"offline", "rlhf"}));
  train_policy->add_option("--reward", pa.reward, "Reward model JSON (rlhf regime)");
  train_policy->add_option("--beta", pa.beta)->check(CLI::PositiveNumber);
  train_policy->add_option("--reference", pa.reference, "Reference weights, one per action");
  train_policy->callback([&] { rc = RunTrainPolicy(pa); });

  fs::path ev_policy, ev_data, ev_out;
  auto* eval = app.add_subcommand("eval-policy", "Score a policy against the true rewards");
  eval->add_option("--policy", ev_policy)->required();
  eval->add_option("--space,--data", ev_data, "space.json or a dataset directory")->required();
  eval->add_option("--out", ev_out);
  eval->callback([&] { rc = RunEvalPolicy(ev_policy, ev_data, ev_out); });

  DiagnoseArgs dg;
  auto* diag = app.add_subcommand("diagnose", "Reward accuracy, rank preservation, CPE error");
  diag->add_option("--model", dg.model)->required();
  diag->add_option("--data", dg.data, "Test dataset directory")->required();
  diag->add_option("--loss", dg.loss, "Training loss (enables the CPE check)");
  diag->add_option("--beta", dg.beta, "Also report the optimal-policy margin")->check(CLI::PositiveNumber);
  diag->add_option("--out", dg.out);
  diag->callback([&] { rc = RunDiagnose(dg); });

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a (loss x noise x seed) grid");
  sweep->add_option("--config", sw.config, "JSON config; flags override its keys");
  sweep->add_option("--out", sw.out);
  sweep->add_option("--jobs", sw.jobs)->check(CLI::PositiveNumber);
  sweep->add_option("--epochs", sw.epochs)->check(CLI::PositiveNumber);
  sweep->add_option("--lr", sw.lr)->check(CLI::PositiveNumber);
  sweep->add_option("--beta", sw.beta)->check(CLI::PositiveNumber);
  sweep->add_option("--losses", sw.losses);
  sweep->add_option("--noise", sw.noise, "Symmetric flip rates");
  sweep->add_option("--seeds", sw.seeds);
  sweep->add_option("--pipeline", sw.pipeline)->check(CLI::IsMember({"reward", "rlhf", "offline"}));
  sweep->add_option("--n-train", sw.n_train);
  sweep->add_option("--n-test", sw.n_test);
  sweep->callback([&] { rc = RunSweepCommand(sw); });

  fs::path f2_out;
  std::size_t f2_n = 100000;
  std::uint64_t f2_seed = 0;
  auto* fig2 = app.add_subcommand("fig2", "Risk curves before and after random flipping");
  fig2->add_option("--out", f2_out)->required();
  fig2->add_option("--n", f2_n)->check(CLI::PositiveNumber);
  fig2->add_option("--seed", f2_seed);
  fig2->callback([&] { rc = RunFig2Command(f2_out, f2_n, f2_seed); });

  std::vector<int> only;
  std::uint64_t v_seed = ProbeOptions{}.seed;
  int v_jobs = 1;
  auto* verify = app.add_subcommand("verify", "Run the property probes and print pass/fail");
  verify->add_option("--only", only, "Probe ids to run")->check(CLI::Range(1, kProbeCount));
  verify->add_option("--seed", v_seed);
  verify->add_option("--jobs", v_jobs)->check(CLI::PositiveNumber);
  verify->callback([&] { rc = RunVerify(only, v_seed, v_jobs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitConfig;
  } catch (const LookupError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return rc;
}

}  // namespace
}  // namespace sympref

int main(int argc, char** argv) { return sympref::Main(argc, argv); }
