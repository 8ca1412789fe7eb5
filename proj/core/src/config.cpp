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

#include "lowtrot/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lowtrot/errors.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/symmetry.hpp"

namespace lowtrot::harness {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

struct Context {
    const std::string& source;
    int line;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidInput(source + ":" + std::to_string(line) + ": " + msg);
    }
};

double to_double(const std::string& s, const Context& ctx) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        ctx.fail("expected a number, got '" + s + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& s, const Context& ctx) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        // Allow 1e3 style integers.
        const double d = to_double(s, ctx);
        if (d != static_cast<double>(static_cast<std::int64_t>(d))) {
            ctx.fail("expected an integer, got '" + s + "'");
        }
        return static_cast<std::int64_t>(d);
    }
    return v;
}

std::uint64_t to_uint(const std::string& s, const Context& ctx) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        ctx.fail("expected an unsigned integer, got '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& s, const Context& ctx) {
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    ctx.fail("expected true or false, got '" + s + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& value, const Context& ctx, F convert) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) {
        for (const auto& expanded : expand_braces(item)) {
            out.push_back(convert(expanded, ctx));
        }
    }
    if (out.empty()) {
        ctx.fail("empty list");
    }
    return out;
}

void apply(ExperimentConfig& e, const std::string& key, const std::string& value, const Context& ctx) {
    try {
        if (key == "id") {
            e.id = value;
        } else if (key == "model" || key == "models") {
            e.models.clear();
            for (const auto& item : split_list(value)) {
                for (auto& id : expand_braces(item)) {
                    e.models.push_back(std::move(id));
                }
            }
        } else if (key == "method") {
            e.method = parse_method(value);
        } else if (key == "p") {
            e.p_list = parse_list<int>(value, ctx, [](const std::string& s, const Context& c) {
                return static_cast<int>(to_int(s, c));
            });
        } else if (key == "scheme" || key == "schemes") {
            e.schemes = split_list(value);
            for (const auto& s : e.schemes) {
                symmetry::parse_scheme(s);
            }
        } else if (key == "t") {
            e.t_list = parse_list<double>(value, ctx, to_double);
        } else if (key == "r" || key == "r_list") {
            e.r_list = parse_list<std::int64_t>(value, ctx, to_int);
        } else if (key == "delta" || key == "delta_list") {
            e.delta_list = parse_list<double>(value, ctx, to_double);
        } else if (key == "Delta") {
            e.Delta = to_double(value, ctx);
        } else if (key == "subspace") {
            if (value == "full") {
                e.subspace = SubspaceMode::full;
            } else if (value == "low") {
                e.subspace = SubspaceMode::low;
            } else if (value == "both") {
                e.subspace = SubspaceMode::both;
            } else {
                ctx.fail("subspace must be full | low | both");
            }
        } else if (key == "samples") {
            e.samples = static_cast<int>(to_int(value, ctx));
        } else if (key == "master_seed") {
            e.master_seed = to_uint(value, ctx);
        } else if (key == "st_seed") {
            e.st_seed = to_uint(value, ctx);
        } else if (key == "perm_seed") {
            e.perm_seed = to_uint(value, ctx);
        } else if (key == "prep") {
            e.prep = parse_prep(value);
        } else if (key == "output") {
            e.output = value;
        } else if (key == "long") {
            e.long_only = to_bool(value, ctx);
        } else {
            ctx.fail("unknown key '" + key + "'");
        }
    } catch (const InvalidInput& err) {
        const std::string msg = err.what();
        if (msg.rfind(ctx.source + ":", 0) == 0) {
            throw;
        }
        ctx.fail(msg);
    }
}

}  // namespace

std::string method_name(MethodKind m) {
    switch (m) {
        case MethodKind::pf:
            return "pf";
        case MethodKind::qdrift:
            return "qdrift";
        case MethodKind::randperm:
            return "randperm";
        case MethodKind::symprot:
            return "symprot";
    }
    return "pf";
}

MethodKind parse_method(const std::string& s) {
    if (s == "pf") {
        return MethodKind::pf;
    }
    if (s == "qdrift") {
        return MethodKind::qdrift;
    }
    if (s == "randperm") {
        return MethodKind::randperm;
    }
    if (s == "symprot") {
        return MethodKind::symprot;
    }
    throw InvalidInput("unknown method '" + s + "' (pf | qdrift | randperm | symprot)");
}

std::string subspace_name(SubspaceMode s) {
    switch (s) {
        case SubspaceMode::full:
            return "full";
        case SubspaceMode::low:
            return "low";
        case SubspaceMode::both:
            return "both";
    }
    return "both";
}

PrepSpec parse_prep(const std::string& s) {
    if (s == "exact") {
        return {};
    }
    const std::string prefix = "gaussian:sigma=";
    if (s.rfind(prefix, 0) == 0) {
        const std::string num = s.substr(prefix.size());
        double sigma = 0.0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), sigma);
        if (ec != std::errc() || ptr != num.data() + num.size() || !(sigma > 0.0)) {
            throw InvalidInput("prep: sigma must be a positive number, got '" + num + "'");
        }
        return {true, sigma};
    }
    throw InvalidInput("prep must be exact | gaussian:sigma=<s>, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    for (char ch : value) {
        if (ch == '{') {
            ++depth;
        } else if (ch == '}') {
            --depth;
        }
        if (ch == ',' && depth == 0) {
            out.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (depth != 0) {
        throw InvalidInput("unbalanced braces in '" + value + "'");
    }
    const std::string last = trim(current);
    if (!last.empty() || !out.empty()) {
        out.push_back(last);
    }
    if (std::any_of(out.begin(), out.end(), [](const std::string& s) { return s.empty(); })) {
        throw InvalidInput("empty list item in '" + value + "'");
    }
    return out;
}

std::vector<std::string> expand_braces(const std::string& pattern) {
    const auto open = pattern.find('{');
    if (open == std::string::npos) {
        if (pattern.find('}') != std::string::npos) {
            throw InvalidInput("unbalanced braces in '" + pattern + "'");
        }
        return {pattern};
    }
    int depth = 0;
    std::size_t close = std::string::npos;
    for (std::size_t i = open; i < pattern.size(); ++i) {
        if (pattern[i] == '{') {
            ++depth;
        } else if (pattern[i] == '}' && --depth == 0) {
            close = i;
            break;
        }
    }
    if (close == std::string::npos) {
        throw InvalidInput("unbalanced braces in '" + pattern + "'");
    }
    const std::string head = pattern.substr(0, open);
    const std::string body = pattern.substr(open + 1, close - open - 1);
    const std::string tail = pattern.substr(close + 1);

    std::vector<std::string> options;
    const auto dots = body.find("..");
    if (dots != std::string::npos && body.find(',') == std::string::npos) {
        const std::string a = trim(body.substr(0, dots));
        const std::string b = trim(body.substr(dots + 2));
        long lo = 0;
        long hi = 0;
        auto r1 = std::from_chars(a.data(), a.data() + a.size(), lo);
        auto r2 = std::from_chars(b.data(), b.data() + b.size(), hi);
        if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != a.data() + a.size() ||
            r2.ptr != b.data() + b.size() || hi < lo || hi - lo > 100000) {
            throw InvalidInput("bad integer range '{" + body + "}'");
        }
        for (long v = lo; v <= hi; ++v) {
            options.push_back(std::to_string(v));
        }
    } else {
        options = split_list(body);
    }
    std::vector<std::string> out;
    for (const auto& opt : options) {
        for (const auto& rest : expand_braces(opt + tail)) {
            out.push_back(head + rest);
        }
    }
    return out;
}

void validate_experiment(const ExperimentConfig& e) {
    const std::string where = "experiment '" + e.id + "': ";
    if (e.id.empty()) {
        throw InvalidInput("experiment without id");
    }
    if (e.models.empty()) {
        throw InvalidInput(where + "no model");
    }
    for (const auto& id : e.models) {
        if (models::dimension_for_id(id) > linalg::kMaxDimension) {
            throw InvalidInput(where + "model " + id + " exceeds dimension " + std::to_string(linalg::kMaxDimension));
        }
    }
    if (e.r_list.empty()) {
        throw InvalidInput(where + "r_list is empty");
    }
    if (std::any_of(e.r_list.begin(), e.r_list.end(), [](std::int64_t r) { return r < 1; })) {
        throw InvalidInput(where + "every r must be >= 1");
    }
    if (e.t_list.empty() == e.delta_list.empty()) {
        throw InvalidInput(where + "give exactly one of t and delta_list");
    }
    if (e.subspace != SubspaceMode::full && !e.Delta) {
        throw InvalidInput(where + "low-energy output needs Delta");
    }
    if (e.prep.gaussian && !e.Delta) {
        throw InvalidInput(where + "gaussian prep is centred at Delta, which is missing");
    }
    if (e.samples < 1) {
        throw InvalidInput(where + "samples must be >= 1");
    }
    const bool randomized = e.method == MethodKind::qdrift || e.method == MethodKind::randperm ||
                            (e.method == MethodKind::symprot &&
                             std::find(e.schemes.begin(), e.schemes.end(), "random_st") != e.schemes.end());
    if (randomized && !e.master_seed) {
        throw InvalidInput(where + "randomized method needs master_seed");
    }
    if ((e.method == MethodKind::qdrift || e.method == MethodKind::randperm) && e.samples < 2) {
        throw InvalidInput(where + "randomized methods need samples >= 2");
    }
    if (e.method == MethodKind::symprot && e.schemes.empty()) {
        throw InvalidInput(where + "symprot needs scheme");
    }
    if (e.method != MethodKind::symprot && !e.schemes.empty()) {
        throw InvalidInput(where + "scheme applies to symprot only");
    }
}

ConfigFile parse_config(std::string_view text, const std::string& source) {
    ConfigFile file;
    ExperimentConfig defaults;
    std::vector<std::pair<ExperimentConfig, int>> sections;
    bool in_section = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const Context ctx{source, line_no};
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line != "[experiment]") {
                ctx.fail("unknown section " + line);
            }
            sections.emplace_back(defaults, line_no);
            in_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            ctx.fail("expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            ctx.fail("empty key or value");
        }
        if (in_section) {
            apply(sections.back().first, key, value, ctx);
        } else {
            if (key == "output") {
                file.output = value;
            }
            apply(defaults, key, value, ctx);
        }
    }
    std::vector<std::string> seen;
    for (auto& [e, line] : sections) {
        try {
            validate_experiment(e);
        } catch (const InvalidInput& err) {
            throw InvalidInput(source + ":" + std::to_string(line) + ": " + err.what());
        }
        if (std::find(seen.begin(), seen.end(), e.id) != seen.end()) {
            throw InvalidInput(source + ":" + std::to_string(line) + ": duplicate experiment id '" + e.id + "'");
        }
        seen.push_back(e.id);
        file.experiments.push_back(std::move(e));
    }
    if (file.experiments.empty()) {
        throw InvalidInput(source + ": no [experiment] section");
    }
    return file;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot read config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace lowtrot::harness
