// Copyright 2026 The spinknit Authors
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

// Private helpers for reading YAML with line/field diagnostics.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "spinknit/error.hpp"

namespace spinknit::yaml {

inline std::string where(const YAML::Node& node, std::string_view field) {
    std::string out;
    const YAML::Mark m = node.Mark();
    if (m.line >= 0) out = "line " + std::to_string(m.line + 1) + ", ";
    return out + "field '" + std::string(field) + "'";
}

[[noreturn]] inline void fail(const YAML::Node& node, std::string_view field, const std::string& what) {
    throw ConfigError(where(node, field) + ": " + what);
}

/// Rejects keys of `map` that are not in `allowed`.
inline void check_keys(const YAML::Node& map, std::string_view context,
                       const std::set<std::string, std::less<>>& allowed) {
    if (!map.IsMap()) fail(map, context, "expected a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) fail(kv.first, key, "unknown field in " + std::string(context));
    }
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view field) {
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, field, "cannot parse '" + node.Scalar() + "'");
    }
}

template <typename T>
T get(const YAML::Node& map, std::string_view field, T fallback) {
    const YAML::Node n = map[std::string(field)];
    return n ? scalar<T>(n, field) : fallback;
}

template <typename T>
T require(const YAML::Node& map, std::string_view field) {
    const YAML::Node n = map[std::string(field)];
    if (!n) fail(map, field, "missing required field");
    return scalar<T>(n, field);
}

/// Accepts a scalar or a sequence of scalars.
template <typename T>
std::vector<T> list(const YAML::Node& map, std::string_view field, std::vector<T> fallback) {
    const YAML::Node n = map[std::string(field)];
    if (!n) return fallback;
    std::vector<T> out;
    if (n.IsSequence()) {
        for (const auto& item : n) out.push_back(scalar<T>(item, field));
        if (out.empty()) fail(n, field, "list is empty");
    } else {
        out.push_back(scalar<T>(n, field));
    }
    return out;
}

inline YAML::Node parse(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
}

}  // namespace spinknit::yaml
