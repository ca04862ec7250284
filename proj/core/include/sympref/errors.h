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

#ifndef SYMPREF_ERRORS_H_
#define SYMPREF_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sympref {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or malformed configuration (unknown loss name, missing parameter).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Unknown action identifier.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Dataset generation could not satisfy its request.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Optimization diverged; the message names the epoch.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch)
      : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// Unreadable or malformed file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sympref

#endif  // SYMPREF_ERRORS_H_
