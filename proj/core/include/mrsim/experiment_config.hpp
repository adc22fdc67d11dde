// Copyright 2026 The mrsim Authors
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

#include <iosfwd>
#include <string>

#include "mrsim/sim_engine.hpp"

namespace mrsim {

/// Parses the sectioned key-value experiment file. Parsing is strict:
/// unknown sections or keys, duplicate keys, malformed values and
/// out-of-range fields are all rejected (ConfigError with line number or
/// field path). Omitted keys keep their documented defaults. The grammar
/// is documented in the project README.
SimConfig load_config(std::istream& in, const std::string& name = "<config>");
SimConfig load_config_file(const std::string& path);

/// Emits the normalized form of a configuration: every section and key
/// written explicitly with full-precision values. Feeding the output back
/// through load_config yields the same configuration.
void write_config(const SimConfig& cfg, std::ostream& out);

}  // namespace mrsim
