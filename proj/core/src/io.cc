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

#include "sympref/io.h"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sympref/errors.h"

namespace sympref {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError("cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

int ParseLabel(const std::string& s) {
  if (s == "1" || s == "+1") return 1;
  if (s == "-1") return -1;
  throw IoError("label must be +1 or -1, got '" + s + "'");
}

json NoiseJson(const std::optional<NoiseSpec>& noise) {
  if (!noise) return nullptr;
  return {{"eps_p", noise->eps_p},
          {"eps_n", noise->eps_n},
          {"mode", noise->mode == NoiseMode::kSymmetric ? "symmetric" : "asymmetric"}};
}

json ProvenanceJson(const Provenance& prov) {
  json out = json::object();
  for (const auto& [k, v] : prov) out[k] = v;
  return out;
}

json Parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("malformed " + what + ": " + e.what());
  }
}

template <typename F>
auto Guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw IoError("invalid " + what + ": " + e.what());
  }
}

SpacePtr SpaceFromJson(const json& j) {
  auto ids = j.at("ids").get<std::vector<std::string>>();
  auto rewards = j.at("true_reward").get<std::vector<double>>();
  std::vector<std::vector<double>> features;
  if (j.contains("features") && !j.at("features").is_null()) {
    features = j.at("features").get<std::vector<std::vector<double>>>();
  }
  try {
    return std::make_shared<const ActionSpace>(std::move(ids), std::move(rewards),
                                               std::move(features));
  } catch (const DomainError& e) {
    throw IoError(std::string("invalid action space: ") + e.what());
  }
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string());
}

void WriteDataset(const PreferenceDataset& ds, const fs::path& dir) {
  const ActionSpace& space = ds.space();
  for (const auto& id : space.ids()) {
    if (id.find_first_of(",\n\r") != std::string::npos) {
      throw IoError("action id '" + id + "' cannot be written to CSV");
    }
  }
  std::string csv = "a1,a2,clean_label,noisy_label";
  if (ds.exact()) csv += ",mass";
  csv += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.records()[i];
    csv += space.ids()[r.a1] + ',' + space.ids()[r.a2] + ',' +
           std::to_string(r.clean_label) + ',' + std::to_string(r.noisy_label);
    if (ds.exact()) csv += ',' + FormatNumber(ds.mass()[i]);
    csv += '\n';
  }
  json side = {
      {"ids", space.ids()},
      {"true_reward", space.true_reward()},
      {"features", space.has_features() ? json(space.all_features()) : json(nullptr)},
      {"noise", NoiseJson(ds.noise())},
      {"prior", ds.empty() ? json(nullptr) : json(ds.ClassPrior())},
      {"seed", ds.seed()},
      {"mode", ds.exact() ? "exact" : "empirical"},
      {"records", ds.size()},
  };
  WriteTextFile(dir / kDataFile, csv);
  WriteTextFile(dir / kSpaceFile, side.dump(2) + "\n");
}

SpacePtr ReadSpace(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kSpaceFile : path;
  const json j = Parse(ReadTextFile(file), file.string());
  return Guard(file.string(), [&] { return SpaceFromJson(j); });
}

PreferenceDataset ReadDataset(const fs::path& dir) {
  const json side = Parse(ReadTextFile(dir / kSpaceFile), (dir / kSpaceFile).string());
  return Guard("dataset " + dir.string(), [&] {
    SpacePtr space = SpaceFromJson(side);
    const bool exact = side.value("mode", "empirical") == "exact";
    std::istringstream in(ReadTextFile(dir / kDataFile));
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty " + (dir / kDataFile).string());
    const auto header = SplitCsvLine(line);
    const std::vector<std::string> want = exact
        ? std::vector<std::string>{"a1", "a2", "clean_label", "noisy_label", "mass"}
        : std::vector<std::string>{"a1", "a2", "clean_label", "noisy_label"};
    if (header != want) throw IoError("unexpected CSV header '" + line + "'");
    std::vector<PreferenceRecord> records;
    std::vector<double> mass;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = SplitCsvLine(line);
      if (f.size() != want.size()) {
        throw IoError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(want.size()) + " fields");
      }
      PreferenceRecord r;
      try {
        r.a1 = space->IndexOf(f[0]);
        r.a2 = space->IndexOf(f[1]);
      } catch (const LookupError& e) {
        throw IoError("line " + std::to_string(lineno) + ": " + e.what());
      }
      r.clean_label = ParseLabel(f[2]);
      r.noisy_label = ParseLabel(f[3]);
      r.flipped = r.clean_label != r.noisy_label;
      records.push_back(r);
      if (exact) mass.push_back(ParseDouble(f[4], "mass"));
    }
    const std::uint64_t seed = side.value("seed", std::uint64_t{0});
    try {
      PreferenceDataset ds = exact ? PreferenceDataset(space, std::move(records), std::move(mass), seed)
                                   : PreferenceDataset(space, std::move(records), seed);
      if (side.contains("noise") && !side.at("noise").is_null()) {
        const json& n = side.at("noise");
        ds.set_noise(NoiseSpec{n.at("eps_p").get<double>(), n.at("eps_n").get<double>(),
                               n.value("mode", "asymmetric") == "symmetric"
                                   ? NoiseMode::kSymmetric
                                   : NoiseMode::kAsymmetric});
      }
      return ds;
    } catch (const DomainError& e) {
      throw IoError(std::string("invalid dataset: ") + e.what());
    }
  });
}

std::string ModelToJson(const RewardModel& model, const Provenance& prov) {
  const json j = {
      {"kind", model.kind == ModelKind::kTabular ? "tabular" : "linear"},
      {"params", model.params},
      {"clip", model.clip ? json(*model.clip) : json(nullptr)},
      {"provenance", ProvenanceJson(prov)},
  };
  return j.dump(2) + "\n";
}

RewardModel ModelFromJson(const std::string& text) {
  const json j = Parse(text, "model JSON");
  return Guard("model JSON", [&] {
    RewardModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tabular") {
      m.kind = ModelKind::kTabular;
    } else if (kind == "linear") {
      m.kind = ModelKind::kLinear;
    } else {
      throw IoError("unknown model kind '" + kind + "'");
    }
    m.params = j.at("params").get<std::vector<double>>();
    if (j.contains("clip") && !j.at("clip").is_null()) m.clip = j.at("clip").get<double>();
    return m;
  });
}

std::string PolicyToJson(const PolicyTable& policy, const Provenance& prov) {
  const json j = {
      {"probs", policy.probs},
      {"reference", policy.reference},
      {"beta", policy.beta},
      {"provenance", ProvenanceJson(prov)},
  };
  return j.dump(2) + "\n";
}

PolicyTable PolicyFromJson(const std::string& text) {
  const json j = Parse(text, "policy JSON");
  PolicyTable p = Guard("policy JSON", [&] {
    return PolicyTable{j.at("probs").get<std::vector<double>>(),
                       j.at("reference").get<std::vector<double>>(),
                       j.at("beta").get<double>()};
  });
  try {
    // Decimal round trip may move the sum by a few ulps.
    p.Validate(1e-9);
  } catch (const DomainError& e) {
    throw IoError(std::string("invalid policy: ") + e.what());
  }
  return p;
}

std::string TraceToCsv(const RiskTrace& trace) {
  std::string out = "epoch,noisy_risk,clean_risk,grad_norm\n";
  for (std::size_t e = 0; e < trace.size(); ++e) {
    out += std::to_string(e) + ',' + FormatNumber(trace.noisy_risk[e]) + ',' +
           FormatNumber(trace.clean_risk[e]) + ',' + FormatNumber(trace.grad_norm[e]) + '\n';
  }
  return out;
}

std::string ReportToJson(const DiagnosticsReport& r, const Provenance& prov) {
  const json j = {
      {"loss", r.loss},
      {"noise", NoiseJson(r.noise)},
      {"seed", r.seed},
      {"reward_accuracy", r.reward_accuracy},
      {"rank_preservation_rate", r.rank_preservation_rate},
      {"cpe_max_error", r.cpe_max_error ? json(*r.cpe_max_error) : json(nullptr)},
      {"improvement_margin", r.improvement_margin ? json(*r.improvement_margin) : json(nullptr)},
      {"provenance", ProvenanceJson(prov)},
  };
  return j.dump(2) + "\n";
}

std::string ReportCsvRow(const DiagnosticsReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? FormatNumber(*v) : std::string(); };
  const std::string eps_p = r.noise ? FormatNumber(r.noise->eps_p) : "";
  const std::string eps_n = r.noise ? FormatNumber(r.noise->eps_n) : "";
  std::string loss = r.loss;
  // Loss strings such as "cdpo:eps=0.1,swapped=1" contain commas.
  if (loss.find(',') != std::string::npos) loss = '"' + loss + '"';
  return loss + ',' + eps_p + ',' + eps_n + ',' + std::to_string(r.seed) + ',' +
         FormatNumber(r.reward_accuracy) + ',' + FormatNumber(r.rank_preservation_rate) + ',' +
         opt(r.cpe_max_error) + ',' + opt(r.improvement_margin);
}

}  // namespace sympref
