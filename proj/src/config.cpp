// SPDX-License-Identifier: Apache-2.0
//
// otfsim: matrix-vector simulation of time-frequency signaling over
// doubly dispersive channels.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "otfsim/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace otfsim {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
    {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

bool parse_double(std::string_view s, double& out)
{
    const std::string tmp(s);
    char* end = nullptr;
    errno = 0;
    out = std::strtod(tmp.c_str(), &end);
    return !tmp.empty() && end == tmp.c_str() + tmp.size() && errno == 0 && std::isfinite(out);
}

template <typename T>
bool parse_unsigned(std::string_view s, T& out)
{
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ScenarioConfig with_defaults(std::string name, double bandwidth, double max_delay, double max_doppler,
                             std::size_t time_slots)
{
    ScenarioConfig c;
    c.name = std::move(name);
    c.carrier_frequency = 4e9;
    c.bandwidth = bandwidth;
    c.max_delay = max_delay;
    c.max_doppler = max_doppler;
    c.num_paths = 30;
    c.time_slots = time_slots;
    c.snr_db = {0, 5, 10, 15, 20, 25, 30};
    c.trials = 100;
    c.systems = {System::eig, System::ofdm, System::ostf, System::ostf_u, System::otfs};
    c.csi = CsiMode::full;
    c.base_seed = 1;
    return c;
}

} // namespace

ConfigError::ConfigError(Kind kind, std::vector<std::string> problems)
    : std::runtime_error(join(problems, "; ")), kind_(kind), problems_(std::move(problems))
{
}

std::vector<std::string> builtin_scenario_names()
{
    return {"moderate", "extreme", "reduced"};
}

ScenarioConfig builtin_scenario(std::string_view name)
{
    // 500 km/h at 4 GHz
    if (name == "moderate")
        return with_defaults("moderate", 15e6, 300e-9, 1.85e3, 9);
    // 2500 km/h at 4 GHz
    if (name == "extreme")
        return with_defaults("extreme", 15e6, 700e-9, 9.26e3, 13);
    // moderate spreads on a 5 x 27 grid (3 MHz), for quick runs
    if (name == "reduced")
        return with_defaults("reduced", 3e6, 300e-9, 1.85e3, 5);
    throw ConfigError(ConfigError::Kind::unknown_scenario,
                      {"unknown scenario '" + std::string(name) + "' (known: " + join(builtin_scenario_names(), ", ") + ")"});
}

std::vector<System> parse_systems(std::string_view list)
{
    std::vector<System> out;
    std::vector<std::string> unknown;
    for (std::string_view item : split(list, ','))
    {
        if (item.empty())
            continue;
        if (auto s = parse_system(item))
            out.push_back(*s);
        else
            unknown.emplace_back(item);
    }
    if (!unknown.empty())
        throw ConfigError(ConfigError::Kind::unknown_scheme,
                          {"unknown scheme(s): " + join(unknown, ", ") + " (known: eig, ofdm, ostf, ostf-u, otfs)"});
    return out;
}

std::vector<double> parse_snr_list(std::string_view list)
{
    std::vector<double> out;
    std::vector<std::string> bad;
    for (std::string_view item : split(list, ','))
    {
        if (item.empty())
            continue;
        double v = 0.0;
        if (parse_double(item, v))
            out.push_back(v);
        else
            bad.emplace_back(item);
    }
    if (!bad.empty())
        throw ConfigError(ConfigError::Kind::invalid, {"bad snr value(s): " + join(bad, ", ")});
    return out;
}

ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base)
{
    ScenarioConfig cfg = base;
    std::vector<std::string> problems;
    std::string section;
    std::size_t line_no = 0;

    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw))
    {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
            {
                problems.push_back(where() + "malformed section header");
                continue;
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "scenario" && section != "simulation")
                problems.push_back(where() + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            problems.push_back(where() + "expected key = value");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        auto number = [&](double& field) {
            if (!parse_double(value, field))
                problems.push_back(where() + key + ": not a number: '" + std::string(value) + "'");
        };
        auto count = [&](std::size_t& field) {
            if (!parse_unsigned(value, field))
                problems.push_back(where() + key + ": not a non-negative integer: '" + std::string(value) + "'");
        };

        if (section == "scenario")
        {
            if (key == "base")
                continue; // resolved by load_config
            if (key == "name")
                cfg.name = std::string(value);
            else if (key == "carrier_frequency")
                number(cfg.carrier_frequency);
            else if (key == "bandwidth")
                number(cfg.bandwidth);
            else if (key == "max_delay")
                number(cfg.max_delay);
            else if (key == "max_doppler")
                number(cfg.max_doppler);
            else if (key == "paths")
                count(cfg.num_paths);
            else if (key == "time_slots")
                count(cfg.time_slots);
            else
                problems.push_back(where() + "unknown key '" + key + "' in [scenario]");
        }
        else if (section == "simulation")
        {
            if (key == "trials")
                count(cfg.trials);
            else if (key == "seed")
            {
                if (!parse_unsigned(value, cfg.base_seed))
                    problems.push_back(where() + "seed: not a non-negative integer: '" + std::string(value) + "'");
            }
            else if (key == "csi")
            {
                if (value == "full")
                    cfg.csi = CsiMode::full;
                else if (value == "diag" || value == "diagonal")
                    cfg.csi = CsiMode::diagonal;
                else
                    problems.push_back(where() + "csi must be full or diag, got '" + std::string(value) + "'");
            }
            else if (key == "snr_db")
            {
                try
                {
                    cfg.snr_db = parse_snr_list(value);
                }
                catch (const ConfigError& e)
                {
                    problems.push_back(where() + e.what());
                }
            }
            else if (key == "schemes")
            {
                try
                {
                    cfg.systems = parse_systems(value);
                }
                catch (const ConfigError& e)
                {
                    problems.push_back(where() + e.what());
                }
            }
            else
                problems.push_back(where() + "unknown key '" + key + "' in [simulation]");
        }
        else
        {
            problems.push_back(where() + "key '" + key + "' outside of a section");
        }
    }

    for (auto& p : check(cfg))
        problems.push_back(std::move(p));
    if (problems.empty())
    {
        try
        {
            scenario_grid(cfg);
        }
        catch (const std::invalid_argument& e)
        {
            problems.emplace_back(e.what());
        }
    }
    if (!problems.empty())
        throw ConfigError(ConfigError::Kind::invalid, std::move(problems));
    return cfg;
}

ScenarioConfig load_config(const std::string& path, std::string_view default_base)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError(ConfigError::Kind::unreadable, {"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();

    // Find `base` under [scenario] before applying anything else.
    std::string base_name(default_base);
    {
        std::istringstream in(text);
        std::string raw, section;
        while (std::getline(in, raw))
        {
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.size() >= 2 && line.front() == '[' && line.back() == ']')
                section = std::string(trim(line.substr(1, line.size() - 2)));
            else if (section == "scenario")
                if (const auto eq = line.find('='); eq != std::string_view::npos && trim(line.substr(0, eq)) == "base")
                    base_name = std::string(trim(line.substr(eq + 1)));
        }
    }
    return parse_config(text, builtin_scenario(base_name));
}

std::string to_config_text(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os << "[scenario]\n";
    os << "name = " << cfg.name << '\n';
    os << "carrier_frequency = " << format_double(cfg.carrier_frequency) << '\n';
    os << "bandwidth = " << format_double(cfg.bandwidth) << '\n';
    os << "max_delay = " << format_double(cfg.max_delay) << '\n';
    os << "max_doppler = " << format_double(cfg.max_doppler) << '\n';
    os << "paths = " << cfg.num_paths << '\n';
    os << "time_slots = " << cfg.time_slots << '\n';
    os << "\n[simulation]\n";
    os << "snr_db = ";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
        os << (i ? ", " : "") << format_double(cfg.snr_db[i]);
    os << '\n';
    os << "trials = " << cfg.trials << '\n';
    os << "schemes = ";
    for (std::size_t i = 0; i < cfg.systems.size(); ++i)
        os << (i ? ", " : "") << to_string(cfg.systems[i]);
    os << '\n';
    os << "csi = " << to_string(cfg.csi) << '\n';
    os << "seed = " << cfg.base_seed << '\n';
    return os.str();
}

} // namespace otfsim
