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

// Runs every acceptance probe and prints one line per criterion. Exits
// nonzero if any criterion misses its threshold or its time budget.

#include <cstdio>
#include <cstdlib>

#include "sympref/probes.h"

int main(int argc, char** argv) {
  sympref::ProbeOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (int id = 1; id <= sympref::kProbeCount; ++id) {
    const sympref::ProbeResult r = sympref::RunProbe(id, options);
    std::printf("criterion %d: %s\n", id, sympref::FormatProbeLine(r).c_str());
    std::fflush(stdout);
    failed += r.passed() ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", sympref::kProbeCount - failed, sympref::kProbeCount);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
