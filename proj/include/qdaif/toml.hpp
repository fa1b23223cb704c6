// Copyright 2026 The qdaif Authors.
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

#ifndef QDAIF_TOML_HPP_
#define QDAIF_TOML_HPP_

#include <string>
#include <string_view>

#include "qdaif/serialize.hpp"

namespace qdaif::toml {

// Parses the TOML subset used by run configs: tables, arrays of tables,
// dotted and quoted keys, basic/literal/multi-line strings, integers, floats
// (including inf and nan), booleans, arrays and inline tables. Date-times
// are rejected. Throws ConfigError whose path is "line N".
Json parse(std::string_view text);

// Parses a single value ("3", "\"x\"", "[1, 2]"). Throws ConfigError.
Json parse_value(std::string_view text);

// Serializes an object. Scalars and arrays of scalars come first in each
// table, then sub-tables and arrays of tables. Null members are skipped.
std::string write(const Json& doc);

}  // namespace qdaif::toml

#endif  // QDAIF_TOML_HPP_
