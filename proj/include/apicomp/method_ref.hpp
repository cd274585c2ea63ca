// Copyright 2026 The apicomp Authors
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

#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "apicomp/errors.hpp"

namespace apicomp {

/// Identity of a method: owning class plus method name. Overloads collapse
/// onto one MethodRef since traces carry no signatures.
struct MethodRef {
  std::string class_name;
  std::string method_name;

  MethodRef() = default;
  MethodRef(std::string cls, std::string method)
      : class_name(std::move(cls)), method_name(std::move(method)) {
    if (class_name.empty() || method_name.empty()) {
      throw ArgumentError("MethodRef requires non-empty class and method names");
    }
  }

  /// Splits "pkg.Class.method" at the last '.'. Returns nullopt when either
  /// side would be empty.
  static std::optional<MethodRef> try_parse(std::string_view qualified) {
    const auto dot = qualified.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == qualified.size()) {
      return std::nullopt;
    }
    return MethodRef(std::string(qualified.substr(0, dot)),
                     std::string(qualified.substr(dot + 1)));
  }

  static MethodRef parse(std::string_view qualified) {
    auto m = try_parse(qualified);
    if (!m) {
      throw ArgumentError("not a qualified method name: '" + std::string(qualified) + "'");
    }
    return *std::move(m);
  }

  std::string qualified() const { return class_name + "." + method_name; }

  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
  friend bool operator==(const MethodRef&, const MethodRef&) = default;
};

struct MethodRefHash {
  std::size_t operator()(const MethodRef& m) const noexcept {
    const std::size_t h1 = std::hash<std::string>{}(m.class_name);
    const std::size_t h2 = std::hash<std::string>{}(m.method_name);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

}  // namespace apicomp
