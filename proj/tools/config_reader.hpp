// Copyright 2026 The prsguard Authors
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

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "prsguard/json_io.hpp"

namespace prsguard::cli {

/// Schema violation in a run configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Typed access to a JSON object that remembers which fields were read, so
/// anything left over can be rejected as unknown.
class ConfigReader {
 public:
  ConfigReader(const Json& doc, std::string scope) : doc_(doc), scope_(std::move(scope)) {
    if (!doc_.is_object()) throw ConfigError(scope_ + ": expected a JSON object");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!doc_.contains(key) || doc_.at(key).is_null()) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!doc_.contains(key) || doc_.at(key).is_null()) {
      throw ConfigError(path(key) + ": required field is missing");
    }
    return convert<T>(key);
  }

  ConfigReader child(const std::string& key) {
    seen_.insert(key);
    static const Json kEmpty = Json::object();
    if (!doc_.contains(key)) return ConfigReader(kEmpty, path(key));
    return ConfigReader(doc_.at(key), path(key));
  }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key) + ": unknown field");
    }
  }

  std::string path(const std::string& key) const { return scope_ + "." + key; }

 private:
  template <typename T>
  T convert(const std::string& key) const {
    const Json& v = doc_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(path(key) + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path(key) + ": " + e.what());
    }
  }

  const Json& doc_;
  std::string scope_;
  std::set<std::string> seen_;
};

}  // namespace prsguard::cli
