// SPDX-License-Identifier: Apache-2.0
//
// ris-pdpr: pilot power and RIS phase configuration for RIS-assisted uplink MIMO
// Copyright (C) 2026 The ris-pdpr authors
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

#ifndef RIS_PDPR_EXPERIMENTS_HPP
#define RIS_PDPR_EXPERIMENTS_HPP

#include "analysis.hpp"
#include "channel.hpp"
#include "geometry.hpp"
#include "montecarlo.hpp"
#include "risopt.hpp"
#include "verification.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

// Declarative experiment runner behind the `ris-pdpr` command line tool.
//
// Outputs
//   fig1          CSV  tau_c,n_r,gamma_p,lambda,mmse_linear,mmse_db,gamma_p_star,low_snr_marker,high_snr_marker,is_baseline
//   fig2          CSV  tau_c,n_r,zeta,gamma_p_policy,gamma_p,lambda,mmse_linear,mmse_db,dsm_iterations
//   optimize-ris  JSON {schema_version, experiment, n_r, phases, zeta, iterations, converged, history}
//   validate      JSON report + CSV grid table
// CSV files are UTF-8 with '.' decimals, '\n' line endings and a header row. Sweep CSVs get a
// `<out>.meta.json` sidecar naming the settings that fell back to defaults.

namespace ris_pdpr::experiments
{
    inline constexpr const char *schema_version = "1";

    enum class Experiment
    {
        fig1,
        fig2,
        optimize_ris,
        validate
    };

    inline std::string to_string(Experiment e)
    {
        switch (e)
        {
        case Experiment::fig1: return "fig1";
        case Experiment::fig2: return "fig2";
        case Experiment::optimize_ris: return "optimize-ris";
        case Experiment::validate: return "validate";
        }
        return "unknown";
    }

    inline std::optional<Experiment> parse_experiment(std::string_view name)
    {
        if (name == "fig1") return Experiment::fig1;
        if (name == "fig2") return Experiment::fig2;
        if (name == "optimize-ris") return Experiment::optimize_ris;
        if (name == "validate") return Experiment::validate;
        return std::nullopt;
    }

    // Exit codes of the command line tool.
    inline constexpr int exit_success = 0;
    inline constexpr int exit_validation_failure = 1;
    inline constexpr int exit_config_error = 2;

    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct GridSpec
    {
        double min = 0.0;
        double max = 0.0;
        int points = 0;
    };

    struct ExperimentConfig
    {
        Experiment experiment = Experiment::fig1;
        int tauC = 160;
        std::optional<std::vector<int>> tauCList; // fig2; default {40, 160}
        std::optional<double> snrDb;              // fig1: zeta N_b SNR (default 0 dB); fig2: SNR (default -10 dB)
        int bsRows = 2, bsCols = 5;
        double bsSpacing = 0.5;
        int risRows = 3, risCols = 3;
        double risSpacing = 1.0 / 7.0;
        double bsAzimuth = 0.0, bsElevation = 0.0;
        double risAzimuth = 0.0, risElevation = 0.0;
        std::optional<std::vector<int>> nrList;
        std::optional<GridSpec> gammaPGrid; // nullopt: automatic grid
        std::size_t trials = 20000;
        std::optional<std::size_t> rhoTrials; // validate; default = trials
        std::uint64_t seed = 1;
        std::optional<double> epsilon;
        int maxSweeps = 1000;
        std::optional<std::string> outputPath;
        unsigned threads = 0;
        std::string risCorrelation = "isotropic"; // or "identity"
        int restarts = 0;
        std::optional<std::vector<double>> aggregateGainsDb; // validate; default {0, 10, 20}
        int identityDraws = 200;
        double zLimit = 4.0; // validate: pass threshold on |z| for the grid
    };

    // ----------------------------------------------------------------------------------------
    // Defaults
    // ----------------------------------------------------------------------------------------

    inline std::vector<int> default_nr_list(Experiment e)
    {
        if (e == Experiment::fig2)
            return {4, 9, 16, 36, 64, 100, 144, 256, 400, 576, 784, 1024};
        return {16, 64, 256};
    }

    inline double default_snr_db(Experiment e) { return e == Experiment::fig2 ? -10.0 : 0.0; }

    inline std::string default_output_path(Experiment e)
    {
        switch (e)
        {
        case Experiment::fig1: return "fig1.csv";
        case Experiment::fig2: return "fig2.csv";
        case Experiment::optimize_ris: return "optimize_ris.json";
        case Experiment::validate: return "validate.json";
        }
        return "out";
    }

    inline std::vector<int> tau_c_list(const ExperimentConfig &c) { return c.tauCList.value_or(std::vector<int>{40, 160}); }
    inline std::vector<int> nr_list(const ExperimentConfig &c) { return c.nrList.value_or(default_nr_list(c.experiment)); }
    inline double snr_db(const ExperimentConfig &c) { return c.snrDb.value_or(default_snr_db(c.experiment)); }
    inline std::string output_path(const ExperimentConfig &c) { return c.outputPath.value_or(default_output_path(c.experiment)); }
    inline std::vector<double> aggregate_gains_db(const ExperimentConfig &c)
    {
        return c.aggregateGainsDb.value_or(std::vector<double>{0.0, 10.0, 20.0});
    }

    // Settings that matter for the experiment and were not given explicitly.
    inline std::vector<std::string> defaults_used(const ExperimentConfig &c)
    {
        std::vector<std::string> out;
        switch (c.experiment)
        {
        case Experiment::fig1:
            if (!c.nrList) out.push_back("nrList");
            if (!c.snrDb) out.push_back("snrDb");
            if (!c.gammaPGrid) out.push_back("gammaPGrid");
            break;
        case Experiment::fig2:
            if (!c.nrList) out.push_back("nrList");
            if (!c.tauCList) out.push_back("tauCList");
            if (!c.snrDb) out.push_back("snrDb");
            break;
        case Experiment::optimize_ris:
            if (!c.epsilon) out.push_back("epsilon");
            break;
        case Experiment::validate:
            if (!c.aggregateGainsDb) out.push_back("aggregateGainsDb");
            if (!c.gammaPGrid) out.push_back("gammaPGrid");
            break;
        }
        return out;
    }

    // ----------------------------------------------------------------------------------------
    // Config parsing
    // ----------------------------------------------------------------------------------------

    // 1-based line of the first occurrence of "key" in the config text.
    inline std::optional<int> line_of_key(std::string_view text, std::string_view key)
    {
        const std::string quoted = "\"" + std::string(key) + "\"";
        const auto pos = text.find(quoted);
        if (pos == std::string_view::npos)
            return std::nullopt;
        int line = 1;
        for (std::size_t i = 0; i < pos; ++i)
            if (text[i] == '\n')
                ++line;
        return line;
    }

    class ConfigSource
    {
    public:
        ConfigSource(std::string name, std::string text) : name_(std::move(name)), text_(std::move(text)) {}

        [[noreturn]] void fail(std::string_view key, const std::string &message) const
        {
            std::ostringstream os;
            os << name_;
            if (auto line = line_of_key(text_, key))
                os << ":" << *line;
            os << ": " << key << ": " << message;
            throw ConfigError(os.str());
        }

        const std::string &text() const { return text_; }
        const std::string &name() const { return name_; }

    private:
        std::string name_;
        std::string text_;
    };

    namespace detail
    {
        using nlohmann::json;

        template <typename T>
        T get_as(const json &value, std::string_view key, const ConfigSource &src)
        {
            try
            {
                if constexpr (std::is_same_v<T, int>)
                {
                    if (!value.is_number_integer())
                        src.fail(key, "expected an integer");
                    const auto v = value.get<std::int64_t>();
                    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                        src.fail(key, "integer out of range");
                    return static_cast<int>(v);
                }
                else if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t> ||
                                   std::is_same_v<T, unsigned>)
                {
                    if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
                        src.fail(key, "expected a non-negative integer");
                    return static_cast<T>(value.get<std::uint64_t>());
                }
                else if constexpr (std::is_same_v<T, double>)
                {
                    if (!value.is_number())
                        src.fail(key, "expected a number");
                    return value.get<double>();
                }
                else if constexpr (std::is_same_v<T, std::string>)
                {
                    if (!value.is_string())
                        src.fail(key, "expected a string");
                    return value.get<std::string>();
                }
                else
                {
                    static_assert(sizeof(T) == 0, "unsupported config type");
                }
            }
            catch (const json::exception &e)
            {
                src.fail(key, e.what());
            }
        }

        template <typename T>
        std::vector<T> get_list(const json &value, std::string_view key, const ConfigSource &src)
        {
            if (!value.is_array())
                src.fail(key, "expected an array");
            std::vector<T> out;
            for (const auto &item : value)
                out.push_back(get_as<T>(item, key, src));
            return out;
        }
    } // namespace detail

    // Range and consistency checks; `src` locates offending keys in the original text.
    inline void validate_config(const ExperimentConfig &c, const ConfigSource &src)
    {
        auto require = [&](bool ok, std::string_view key, const std::string &message) {
            if (!ok)
                src.fail(key, message);
        };
        auto num = [](double v) {
            std::ostringstream os;
            os << v;
            return os.str();
        };

        require(c.tauC >= 2, "tauC", "must be >= 2 (got " + std::to_string(c.tauC) + ")");
        if (c.tauCList)
        {
            require(!c.tauCList->empty(), "tauCList", "must not be empty");
            for (int t : *c.tauCList)
                require(t >= 2, "tauCList", "entries must be >= 2 (got " + std::to_string(t) + ")");
        }
        if (c.snrDb)
            require(std::isfinite(*c.snrDb), "snrDb", "must be finite");
        require(c.bsRows >= 1 && c.bsCols >= 1, "bsRows", "BS array dimensions must be >= 1");
        require(c.bsSpacing > 0.0, "bsSpacing", "must be > 0");
        require(c.risRows >= 1 && c.risCols >= 1, "risRows", "RIS array dimensions must be >= 1");
        require(c.risSpacing > 0.0, "risSpacing", "must be > 0");
        if (c.nrList)
        {
            require(!c.nrList->empty(), "nrList", "must not be empty");
            for (int n : *c.nrList)
                require(n >= 1, "nrList", "entries must be >= 1 (got " + std::to_string(n) + ")");
        }
        if (c.gammaPGrid)
        {
            const GridSpec &g = *c.gammaPGrid;
            require(g.points >= 1, "gammaPGrid", "points must be >= 1");
            require(g.min > 0.0, "gammaPGrid", "min must be > 0 (got " + num(g.min) + ")");
            require(g.max < c.tauC, "gammaPGrid",
                    "max must be < tauC = " + std::to_string(c.tauC) + " (got " + num(g.max) + ")");
            require(g.min <= g.max, "gammaPGrid", "min must not exceed max");
            require(g.points > 1 || g.min == g.max, "gammaPGrid", "a single point needs min == max");
        }
        require(c.trials >= 1, "trials", "must be >= 1");
        if (c.rhoTrials)
            require(*c.rhoTrials >= 2, "rhoTrials", "must be >= 2");
        if (c.epsilon)
            require(*c.epsilon > 0.0, "epsilon", "must be > 0");
        require(c.maxSweeps >= 1, "maxSweeps", "must be >= 1");
        require(c.risCorrelation == "isotropic" || c.risCorrelation == "identity", "risCorrelation",
                "must be \"isotropic\" or \"identity\"");
        require(c.restarts >= 0, "restarts", "must be >= 0");
        require(c.identityDraws >= 1, "identityDraws", "must be >= 1");
        require(c.zLimit > 0.0, "zLimit", "must be > 0");
        if (c.aggregateGainsDb)
        {
            require(!c.aggregateGainsDb->empty(), "aggregateGainsDb", "must not be empty");
            for (double a : *c.aggregateGainsDb)
                require(std::isfinite(a), "aggregateGainsDb", "entries must be finite");
        }
        if (c.outputPath)
            require(!c.outputPath->empty(), "outputPath", "must not be empty");
    }

    // Parses the JSON config text. Structural problems throw ConfigError naming the line.
    inline ExperimentConfig parse_config(const ConfigSource &src)
    {
        using nlohmann::json;
        json root;
        try
        {
            root = json::parse(src.text());
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(src.name() + ": " + e.what());
        }
        if (!root.is_object())
            throw ConfigError(src.name() + ": top-level value must be an object");

        ExperimentConfig c;
        if (auto it = root.find("experiment"); it != root.end())
        {
            const auto name = detail::get_as<std::string>(*it, "experiment", src);
            const auto e = parse_experiment(name);
            if (!e)
                src.fail("experiment", "unknown experiment \"" + name + "\" (fig1, fig2, optimize-ris, validate)");
            c.experiment = *e;
        }

        using detail::get_as;
        using detail::get_list;
        const std::map<std::string, std::function<void(const json &)>> handlers = {
            {"experiment", [](const json &) {}},
            {"tauC", [&](const json &v) { c.tauC = get_as<int>(v, "tauC", src); }},
            {"tauCList", [&](const json &v) { c.tauCList = get_list<int>(v, "tauCList", src); }},
            {"snrDb", [&](const json &v) { c.snrDb = get_as<double>(v, "snrDb", src); }},
            {"bsRows", [&](const json &v) { c.bsRows = get_as<int>(v, "bsRows", src); }},
            {"bsCols", [&](const json &v) { c.bsCols = get_as<int>(v, "bsCols", src); }},
            {"bsSpacing", [&](const json &v) { c.bsSpacing = get_as<double>(v, "bsSpacing", src); }},
            {"risRows", [&](const json &v) { c.risRows = get_as<int>(v, "risRows", src); }},
            {"risCols", [&](const json &v) { c.risCols = get_as<int>(v, "risCols", src); }},
            {"risSpacing", [&](const json &v) { c.risSpacing = get_as<double>(v, "risSpacing", src); }},
            {"bsAzimuth", [&](const json &v) { c.bsAzimuth = get_as<double>(v, "bsAzimuth", src); }},
            {"bsElevation", [&](const json &v) { c.bsElevation = get_as<double>(v, "bsElevation", src); }},
            {"risAzimuth", [&](const json &v) { c.risAzimuth = get_as<double>(v, "risAzimuth", src); }},
            {"risElevation", [&](const json &v) { c.risElevation = get_as<double>(v, "risElevation", src); }},
            {"nrList", [&](const json &v) { c.nrList = get_list<int>(v, "nrList", src); }},
            {"gammaPGrid",
             [&](const json &v) {
                 if (v.is_string())
                 {
                     if (v.get<std::string>() != "auto")
                         src.fail("gammaPGrid", "expected \"auto\" or {min, max, points}");
                     c.gammaPGrid.reset();
                     return;
                 }
                 if (!v.is_object())
                     src.fail("gammaPGrid", "expected \"auto\" or {min, max, points}");
                 for (const auto &[k, _] : v.items())
                     if (k != "min" && k != "max" && k != "points")
                         src.fail("gammaPGrid", "unknown field \"" + k + "\"");
                 if (!v.contains("min") || !v.contains("max") || !v.contains("points"))
                     src.fail("gammaPGrid", "needs min, max and points");
                 c.gammaPGrid = GridSpec{get_as<double>(v["min"], "gammaPGrid", src),
                                         get_as<double>(v["max"], "gammaPGrid", src),
                                         get_as<int>(v["points"], "gammaPGrid", src)};
             }},
            {"trials", [&](const json &v) { c.trials = get_as<std::size_t>(v, "trials", src); }},
            {"rhoTrials", [&](const json &v) { c.rhoTrials = get_as<std::size_t>(v, "rhoTrials", src); }},
            {"seed", [&](const json &v) { c.seed = get_as<std::uint64_t>(v, "seed", src); }},
            {"epsilon", [&](const json &v) { c.epsilon = get_as<double>(v, "epsilon", src); }},
            {"maxSweeps", [&](const json &v) { c.maxSweeps = get_as<int>(v, "maxSweeps", src); }},
            {"outputPath", [&](const json &v) { c.outputPath = get_as<std::string>(v, "outputPath", src); }},
            {"threads", [&](const json &v) { c.threads = get_as<unsigned>(v, "threads", src); }},
            {"risCorrelation", [&](const json &v) { c.risCorrelation = get_as<std::string>(v, "risCorrelation", src); }},
            {"restarts", [&](const json &v) { c.restarts = get_as<int>(v, "restarts", src); }},
            {"aggregateGainsDb",
             [&](const json &v) { c.aggregateGainsDb = get_list<double>(v, "aggregateGainsDb", src); }},
            {"identityDraws", [&](const json &v) { c.identityDraws = get_as<int>(v, "identityDraws", src); }},
            {"zLimit", [&](const json &v) { c.zLimit = get_as<double>(v, "zLimit", src); }},
        };

        for (const auto &[key, value] : root.items())
        {
            const auto h = handlers.find(key);
            if (h == handlers.end())
                src.fail(key, "unknown configuration key");
            h->second(value);
        }
        validate_config(c, src);
        return c;
    }

    inline ExperimentConfig parse_config(std::string_view text, std::string name = "config")
    {
        return parse_config(ConfigSource(std::move(name), std::string(text)));
    }

    inline std::string read_text_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError(path.string() + ": cannot open file");
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    // ----------------------------------------------------------------------------------------
    // Formatting helpers
    // ----------------------------------------------------------------------------------------

    // Shortest representation that round-trips exactly.
    inline std::string format_double(double v)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    inline void write_text_file(const std::filesystem::path &path, const std::string &content)
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error(path.string() + ": cannot open for writing");
        out << content;
        if (!out)
            throw std::runtime_error(path.string() + ": write failed");
    }

    inline std::string dump_json(const nlohmann::json &j) { return j.dump(2) + "\n"; }

    inline nlohmann::json config_to_json(const ExperimentConfig &c)
    {
        nlohmann::json j;
        j["experiment"] = to_string(c.experiment);
        j["tauC"] = c.tauC;
        j["tauCList"] = tau_c_list(c);
        j["snrDb"] = snr_db(c);
        j["bsRows"] = c.bsRows;
        j["bsCols"] = c.bsCols;
        j["bsSpacing"] = c.bsSpacing;
        j["risRows"] = c.risRows;
        j["risCols"] = c.risCols;
        j["risSpacing"] = c.risSpacing;
        j["bsAzimuth"] = c.bsAzimuth;
        j["bsElevation"] = c.bsElevation;
        j["risAzimuth"] = c.risAzimuth;
        j["risElevation"] = c.risElevation;
        j["nrList"] = nr_list(c);
        if (c.gammaPGrid)
            j["gammaPGrid"] = {{"min", c.gammaPGrid->min}, {"max", c.gammaPGrid->max}, {"points", c.gammaPGrid->points}};
        else
            j["gammaPGrid"] = "auto";
        j["trials"] = c.trials;
        j["rhoTrials"] = c.rhoTrials.value_or(c.trials);
        j["seed"] = c.seed;
        if (c.epsilon)
            j["epsilon"] = *c.epsilon;
        j["maxSweeps"] = c.maxSweeps;
        j["risCorrelation"] = c.risCorrelation;
        j["restarts"] = c.restarts;
        j["aggregateGainsDb"] = aggregate_gains_db(c);
        j["identityDraws"] = c.identityDraws;
        j["zLimit"] = c.zLimit;
        return j;
    }

    inline nlohmann::json metadata_json(const ExperimentConfig &c)
    {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["experiment"] = to_string(c.experiment);
        j["defaults_used"] = defaults_used(c);
        j["config"] = config_to_json(c);
        return j;
    }

    // ----------------------------------------------------------------------------------------
    // fig1: ergodic MMSE versus gamma_p for several RIS sizes
    // ----------------------------------------------------------------------------------------

    // Automatic grid: step 1/4 over (0, tau_c), i.e. 0.25, 0.5, ..., tau_c - 0.25.
    inline std::vector<double> gamma_grid(const ExperimentConfig &c, int tauC)
    {
        std::vector<double> g;
        if (!c.gammaPGrid)
        {
            const int points = 4 * tauC - 1;
            for (int i = 1; i <= points; ++i)
                g.push_back(0.25 * i);
            return g;
        }
        const GridSpec &s = *c.gammaPGrid;
        if (s.points == 1)
            return {s.min};
        for (int i = 0; i < s.points; ++i)
            g.push_back(s.min + (s.max - s.min) * i / (s.points - 1));
        return g;
    }

    struct Fig1Row
    {
        int tauC = 0;
        int nr = 0;
        double gammaP = 0.0;
        double lambda = 0.0;
        double mmseLinear = 1.0;
        double mmseDb = 0.0;
        double gammaPStar = 0.0;
        double lowSnrMarker = 0.0;
        double highSnrMarker = 0.0;
        bool baseline = false;
    };

    // Aggregate gain a = (zeta N_b SNR) N_r with zeta N_b SNR = snrDb.
    inline std::vector<Fig1Row> compute_fig1(const ExperimentConfig &c)
    {
        const int tc = c.tauC;
        const double per_element_gain = from_db10(snr_db(c));
        const std::vector<double> grid = gamma_grid(c, tc);
        std::vector<Fig1Row> rows;
        for (int nr : nr_list(c))
        {
            const double a = per_element_gain * nr;
            const double star = best_pilot_ratio(a, tc);
            auto row = [&](double gp, bool baseline) {
                Fig1Row r;
                r.tauC = tc;
                r.nr = nr;
                r.gammaP = gp;
                const ClosedFormSummary s = summarize(lambda_from_ratio(a, tc, gp));
                r.lambda = s.lambda;
                r.mmseLinear = s.ergodicMmse;
                r.mmseDb = s.ergodicMmseDb;
                r.gammaPStar = star;
                r.lowSnrMarker = low_snr_pilot_ratio(tc);
                r.highSnrMarker = high_snr_pilot_ratio(tc);
                r.baseline = baseline;
                return r;
            };
            for (double gp : grid)
                rows.push_back(row(gp, false));
            rows.push_back(row(1.0, true));
        }
        return rows;
    }

    inline std::string fig1_csv(const std::vector<Fig1Row> &rows)
    {
        std::string out = "tau_c,n_r,gamma_p,lambda,mmse_linear,mmse_db,gamma_p_star,low_snr_marker,high_snr_marker,is_baseline\n";
        for (const Fig1Row &r : rows)
        {
            out += std::to_string(r.tauC) + "," + std::to_string(r.nr) + "," + format_double(r.gammaP) + "," +
                   format_double(r.lambda) + "," + format_double(r.mmseLinear) + "," + format_double(r.mmseDb) + "," +
                   format_double(r.gammaPStar) + "," + format_double(r.lowSnrMarker) + "," +
                   format_double(r.highSnrMarker) + "," + (r.baseline ? "1" : "0") + "\n";
        }
        return out;
    }

    // ----------------------------------------------------------------------------------------
    // fig2: ergodic MMSE versus number of RIS elements, equal power and optimal PDPR
    // ----------------------------------------------------------------------------------------

    struct Fig2Row
    {
        int tauC = 0;
        int nr = 0;
        double zeta = 0.0;
        std::string policy; // "equal" or "optimal"
        double gammaP = 0.0;
        double lambda = 0.0;
        double mmseLinear = 1.0;
        double mmseDb = 0.0;
        int dsmIterations = 0;
    };

    inline CorrelationMatrix ris_correlation(const ExperimentConfig &c, const ArrayGeometry &ris)
    {
        if (c.risCorrelation == "identity")
            return CorrelationMatrix{RMatrix::Identity(ris.size(), ris.size())};
        return isotropic_correlation(ris);
    }

    inline DsmOptions dsm_options(const ExperimentConfig &c)
    {
        DsmOptions o;
        o.epsilon = c.epsilon;
        o.maxSweeps = c.maxSweeps;
        return o;
    }

    inline std::vector<Fig2Row> compute_fig2(const ExperimentConfig &c)
    {
        const ArrayGeometry bs = planar_array_positions(c.bsRows, c.bsCols, c.bsSpacing);
        const double nb = static_cast<double>(bs.size());
        const double snr = from_db10(snr_db(c));
        std::vector<Fig2Row> rows;
        for (int nr : nr_list(c))
        {
            const ArrayGeometry ris = truncated_square_array(nr, c.risSpacing);
            const SteeringVector v = steering_vector(ris, c.risAzimuth, c.risElevation);
            const CouplingMatrix g = coupling_matrix(v, ris_correlation(c, ris));
            const PhaseOptimizationResult opt = dsm_optimize_with_restarts(g, c.restarts, c.seed, dsm_options(c));
            const double a = opt.zeta * nr * nb * snr;
            for (int tc : tau_c_list(c))
            {
                for (const bool optimal : {false, true})
                {
                    Fig2Row r;
                    r.tauC = tc;
                    r.nr = nr;
                    r.zeta = opt.zeta;
                    r.policy = optimal ? "optimal" : "equal";
                    r.gammaP = optimal ? best_pilot_ratio(a, tc) : 1.0;
                    const ClosedFormSummary s = summarize(lambda_from_ratio(a, tc, r.gammaP));
                    r.lambda = s.lambda;
                    r.mmseLinear = s.ergodicMmse;
                    r.mmseDb = s.ergodicMmseDb;
                    r.dsmIterations = opt.iterations;
                    rows.push_back(std::move(r));
                }
            }
        }
        return rows;
    }

    inline std::string fig2_csv(const std::vector<Fig2Row> &rows)
    {
        std::string out = "tau_c,n_r,zeta,gamma_p_policy,gamma_p,lambda,mmse_linear,mmse_db,dsm_iterations\n";
        for (const Fig2Row &r : rows)
        {
            out += std::to_string(r.tauC) + "," + std::to_string(r.nr) + "," + format_double(r.zeta) + "," + r.policy +
                   "," + format_double(r.gammaP) + "," + format_double(r.lambda) + "," + format_double(r.mmseLinear) +
                   "," + format_double(r.mmseDb) + "," + std::to_string(r.dsmIterations) + "\n";
        }
        return out;
    }

    // ----------------------------------------------------------------------------------------
    // optimize-ris
    // ----------------------------------------------------------------------------------------

    inline nlohmann::json compute_optimize_ris(const ExperimentConfig &c)
    {
        const ArrayGeometry ris = planar_array_positions(c.risRows, c.risCols, c.risSpacing);
        const SteeringVector v = steering_vector(ris, c.risAzimuth, c.risElevation);
        const CouplingMatrix g = coupling_matrix(v, ris_correlation(c, ris));
        const PhaseOptimizationResult r = dsm_optimize_with_restarts(g, c.restarts, c.seed, dsm_options(c));

        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["experiment"] = "optimize-ris";
        j["n_r"] = ris.size();
        j["phases"] = phase_angles(r.phases);
        j["zeta"] = r.zeta;
        j["iterations"] = r.iterations;
        j["converged"] = r.converged;
        j["history"] = r.history;
        j["defaults_used"] = defaults_used(c);
        return j;
    }

    // ----------------------------------------------------------------------------------------
    // validate: Monte Carlo against the closed form, plus identity suites
    // ----------------------------------------------------------------------------------------

    struct ValidationPoint
    {
        double aggregateGain = 0.0;
        double gammaP = 0.0;
        TrialReport report;
    };

    struct ValidationOutcome
    {
        std::vector<ValidationPoint> points;
        ExponentialityReport exponentiality;
        std::vector<IdentitySuiteResult> identities;
        double zLimit = 4.0;
        double exponentialityZLimit = 5.0;
        bool allPass = false;
        nlohmann::json json;
        std::string csv;
    };

    inline ScenarioSpec scenario_spec(const ExperimentConfig &c)
    {
        ScenarioSpec s;
        s.bsRows = c.bsRows;
        s.bsCols = c.bsCols;
        s.bsSpacing = c.bsSpacing;
        s.risRows = c.risRows;
        s.risCols = c.risCols;
        s.risSpacing = c.risSpacing;
        s.bsAzimuth = c.bsAzimuth;
        s.bsElevation = c.bsElevation;
        s.risAzimuth = c.risAzimuth;
        s.risElevation = c.risElevation;
        return s;
    }

    // Grid: every aggregate gain a (zeta N_r N_b SNR, in dB) crossed with gamma_p in
    // {1, gamma_p*(a), tau_c/2}, or with the explicit gammaPGrid points when one is configured.
    inline ValidationOutcome compute_validate(const ExperimentConfig &c, unsigned threads)
    {
        const RunOptions run{threads};
        const CascadeStatistics cascade = build_cascade(scenario_spec(c));
        const int tc = c.tauC;

        std::vector<GridPoint> grid;
        std::vector<ValidationPoint> points;
        for (double a_db : aggregate_gains_db(c))
        {
            const double a = from_db10(a_db);
            std::vector<double> gammas;
            if (c.gammaPGrid)
                gammas = gamma_grid(c, tc);
            else
                gammas = {1.0, best_pilot_ratio(a, tc), tc / 2.0};
            for (double gp : gammas)
            {
                std::ostringstream label;
                label << "a_db=" << format_double(a_db) << ";gamma_p=" << format_double(gp);
                grid.push_back({label.str(), scenario_for_gain(cascade, a, tc, gp)});
                points.push_back({a, gp, {}});
            }
        }

        ValidationOutcome out;
        out.zLimit = c.zLimit;
        const std::vector<TrialReport> reports = validate_closed_form(grid, c.trials, c.seed, run);
        bool pass = true;
        for (std::size_t k = 0; k < reports.size(); ++k)
        {
            points[k].report = reports[k];
            pass = pass && reports[k].passes(out.zLimit);
        }
        out.points = std::move(points);

        // Exponentiality of rho on the first grid point.
        const std::size_t rho_trials = c.rhoTrials.value_or(c.trials);
        out.exponentiality = sample_rho(grid.front().scenario, rho_trials, c.seed, run, true).report;
        pass = pass && out.exponentiality.moments_pass(out.exponentialityZLimit);

        out.identities.push_back(mse_identity_suite(c.identityDraws, c.seed));
        out.identities.push_back(rank1_stats_suite(c.identityDraws, c.seed));
        for (const auto &s : out.identities)
            pass = pass && s.pass();
        out.allPass = pass;

        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["experiment"] = "validate";
        j["seed"] = c.seed;
        j["trials_per_point"] = c.trials;
        j["tau_c"] = tc;
        j["n_b"] = cascade.nb();
        j["n_r"] = cascade.nr();
        j["zeta"] = cascade.zeta;
        j["z_limit"] = out.zLimit;
        j["defaults_used"] = defaults_used(c);
        nlohmann::json jgrid = nlohmann::json::array();
        for (const ValidationPoint &p : out.points)
        {
            const TrialReport &r = p.report;
            jgrid.push_back({{"label", r.label},
                             {"aggregate_gain", p.aggregateGain},
                             {"gamma_p", p.gammaP},
                             {"lambda", r.lambda},
                             {"trials", r.trials},
                             {"empirical_mean", r.empiricalMean},
                             {"standard_error", r.standardError},
                             {"closed_form", r.closedForm},
                             {"z_score", r.zScore},
                             {"pass", r.passes(out.zLimit)}});
        }
        j["grid"] = jgrid;
        const ExponentialityReport &e = out.exponentiality;
        j["exponentiality"] = {{"trials", e.trials},
                               {"sample_mean", e.sampleMean},
                               {"sample_second_moment", e.sampleSecondMoment},
                               {"lambda_closed_form", e.lambdaClosedForm},
                               {"mean_z", e.meanZ},
                               {"second_moment_z", e.secondMomentZ},
                               {"z_limit", out.exponentialityZLimit},
                               {"ks_statistic", e.ksStatistic},
                               {"ks_threshold_alpha_0_01", e.ksThreshold},
                               {"pass", e.moments_pass(out.exponentialityZLimit)}};
        nlohmann::json jid = nlohmann::json::array();
        for (const auto &s : out.identities)
            jid.push_back({{"name", s.name},
                           {"draws", s.draws},
                           {"max_relative_error", s.maxRelativeError},
                           {"tolerance", s.tolerance},
                           {"pass", s.pass()}});
        j["identity_checks"] = jid;
        j["all_pass"] = out.allPass;
        out.json = std::move(j);

        std::string csv = "label,aggregate_gain,gamma_p,lambda,trials,empirical_mean,standard_error,closed_form,z_score,pass\n";
        for (const ValidationPoint &p : out.points)
        {
            const TrialReport &r = p.report;
            csv += r.label + "," + format_double(p.aggregateGain) + "," + format_double(p.gammaP) + "," +
                   format_double(r.lambda) + "," + std::to_string(r.trials) + "," + format_double(r.empiricalMean) +
                   "," + format_double(r.standardError) + "," + format_double(r.closedForm) + "," +
                   format_double(r.zScore) + "," + (r.passes(out.zLimit) ? "1" : "0") + "\n";
        }
        out.csv = std::move(csv);
        return out;
    }

    // JSON report path and its CSV companion (same stem, .csv extension).
    inline std::pair<std::filesystem::path, std::filesystem::path> validate_paths(const std::string &out)
    {
        std::filesystem::path json_path(out);
        if (json_path.extension() != ".json")
            json_path += ".json";
        std::filesystem::path csv_path = json_path;
        csv_path.replace_extension(".csv");
        return {json_path, csv_path};
    }

    // ----------------------------------------------------------------------------------------
    // Dispatch
    // ----------------------------------------------------------------------------------------

    inline std::filesystem::path metadata_path(const std::filesystem::path &out)
    {
        std::filesystem::path p = out;
        p += ".meta.json";
        return p;
    }

    // Runs the configured experiment, writes its outputs and returns the process exit code.
    inline int run_experiment(const ExperimentConfig &c)
    {
        const std::filesystem::path out = output_path(c);
        switch (c.experiment)
        {
        case Experiment::fig1:
            write_text_file(out, fig1_csv(compute_fig1(c)));
            write_text_file(metadata_path(out), dump_json(metadata_json(c)));
            return exit_success;
        case Experiment::fig2:
            write_text_file(out, fig2_csv(compute_fig2(c)));
            write_text_file(metadata_path(out), dump_json(metadata_json(c)));
            return exit_success;
        case Experiment::optimize_ris:
            write_text_file(out, dump_json(compute_optimize_ris(c)));
            return exit_success;
        case Experiment::validate:
        {
            const ValidationOutcome v = compute_validate(c, c.threads);
            const auto [json_path, csv_path] = validate_paths(out.string());
            write_text_file(json_path, dump_json(v.json));
            write_text_file(csv_path, v.csv);
            return v.allPass ? exit_success : exit_validation_failure;
        }
        }
        return exit_config_error;
    }

} // namespace ris_pdpr::experiments

#endif
