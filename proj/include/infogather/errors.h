// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOGATHER_ERRORS_H_
#define INFOGATHER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace infogather {

// Invalid or inconsistent scenario / command-line configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical precondition failed at runtime (non-PD covariance, singular
// horizon, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Sensor geometry is undefined (target coincides with the sensor).
class DegenerateGeometryError : public NumericalError {
 public:
  explicit DegenerateGeometryError(const std::string& what)
      : NumericalError(what) {}
};

// Message-passing failure: unregistered sender, missing robot, deadlock.
class NetworkError : public std::runtime_error {
 public:
  explicit NetworkError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace infogather

#endif  // INFOGATHER_ERRORS_H_
