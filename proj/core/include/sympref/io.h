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

#ifndef SYMPREF_IO_H_
#define SYMPREF_IO_H_

#include <filesystem>
#include <map>
#include <string>

#include "sympref/diagnostics.h"
#include "sympref/policy.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {

// Free-form string metadata attached to serialized artifacts.
using Provenance = std::map<std::string, std::string>;

inline constexpr const char* kDataFile = "data.csv";
inline constexpr const char* kSpaceFile = "space.json";

// Writes <dir>/data.csv (header a1,a2,clean_label,noisy_label, plus a mass
// column in exact mode; actions by id) and <dir>/space.json (ids, features,
// true rewards, noise, clean prior, seed, mode). Creates dir if needed.
void WriteDataset(const PreferenceDataset& ds, const std::filesystem::path& dir);
// Inverse of WriteDataset. Throws IoError on malformed input.
PreferenceDataset ReadDataset(const std::filesystem::path& dir);
// Reads only the action space from a space.json file or a dataset directory.
SpacePtr ReadSpace(const std::filesystem::path& path);

std::string ModelToJson(const RewardModel& model, const Provenance& prov = {});
RewardModel ModelFromJson(const std::string& text);

std::string PolicyToJson(const PolicyTable& policy, const Provenance& prov = {});
PolicyTable PolicyFromJson(const std::string& text);

// CSV with header epoch,noisy_risk,clean_risk,grad_norm.
std::string TraceToCsv(const RiskTrace& trace);

std::string ReportToJson(const DiagnosticsReport& report, const Provenance& prov = {});

inline constexpr const char* kReportCsvHeader =
    "loss,eps_p,eps_n,seed,reward_accuracy,rank_rate,cpe_err,margin";
// One CSV row matching kReportCsvHeader; absent optionals are empty fields.
std::string ReportCsvRow(const DiagnosticsReport& report);

// Shortest decimal text that parses back to the same double.
std::string FormatNumber(double v);

std::string ReadTextFile(const std::filesystem::path& path);
// Writes atomically enough for our purposes (temp file + rename).
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace sympref

#endif  // SYMPREF_IO_H_
