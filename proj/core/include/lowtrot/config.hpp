// Copyright 2026 The lowtrot Authors
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

#ifndef LOWTROT_CONFIG_HPP
#define LOWTROT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lowtrot::harness {

enum class MethodKind { pf, qdrift, randperm, symprot };
enum class SubspaceMode { full, low, both };

std::string method_name(MethodKind m);
MethodKind parse_method(const std::string& s);
std::string subspace_name(SubspaceMode s);

/// prep = exact | gaussian:sigma=<s>
struct PrepSpec {
    bool gaussian = false;
    double sigma = 0.0;
};

PrepSpec parse_prep(const std::string& s);

/// One [experiment] section. Either t_list x r_list or delta_list x r_list
/// (then t = r * delta) spans the time grid.
struct ExperimentConfig {
    std::string id;
    std::vector<std::string> models;
    MethodKind method = MethodKind::pf;
    std::vector<int> p_list{2};
    std::vector<std::string> schemes;
    std::vector<double> t_list;
    std::vector<std::int64_t> r_list;
    std::vector<double> delta_list;
    std::optional<double> Delta;
    SubspaceMode subspace = SubspaceMode::both;
    int samples = 1;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::uint64_t> st_seed;
    std::optional<std::uint64_t> perm_seed;
    PrepSpec prep;
    std::string output;
    /// Runs only under --long.
    bool long_only = false;
};

struct ConfigFile {
    std::vector<ExperimentConfig> experiments;
    /// Top-level `output` key, if any.
    std::string output;
};

/// Parses the key = value grammar (see docs/config_grammar.md). Keys before
/// the first [experiment] header are defaults for every section. Throws
/// InvalidInput with "<source>:<line>: ..." on malformed input.
ConfigFile parse_config(std::string_view text, const std::string& source = "<config>");
ConfigFile load_config(const std::filesystem::path& path);

/// Brace expansion: "chain:{4..6}" -> chain:4, chain:5, chain:6;
/// "a{x,y}b" -> axb, ayb. Nested groups expand left to right.
std::vector<std::string> expand_braces(const std::string& pattern);

/// Splits on commas outside braces and trims whitespace.
std::vector<std::string> split_list(const std::string& value);

/// Throws InvalidInput when the experiment is incomplete or inconsistent.
void validate_experiment(const ExperimentConfig& e);

}  // namespace lowtrot::harness

#endif  // LOWTROT_CONFIG_HPP
