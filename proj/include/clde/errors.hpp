// Copyright 2026 The clde Authors
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

#ifndef CLDE_ERRORS_HPP_
#define CLDE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace clde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or shape mismatch at an API boundary.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of a routine (NaN, asymmetry, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(double t, int stage)
      : Error("non-finite RK4 stage " + std::to_string(stage) + " at t=" +
              std::to_string(t)),
        t_(t),
        stage_(stage) {}

  double time() const { return t_; }
  int stage() const { return stage_; }

 private:
  double t_;
  int stage_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, int line, const std::string& what)
      : Error(format(key, line, what)), key_(key), line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& key, int line,
                            const std::string& what) {
    std::string msg = "config error";
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!key.empty()) msg += " (key '" + key + "')";
    return msg + ": " + what;
  }

  std::string key_;
  int line_;
};

class StaleFixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace clde

#endif  // CLDE_ERRORS_HPP_
