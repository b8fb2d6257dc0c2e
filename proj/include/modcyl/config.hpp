#pragma once

#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "states.hpp"

namespace modcyl {

/// Run configuration shared by the command-line verbs. Loaded from a JSON
/// config file; flags override individual fields. Unknown keys are rejected
/// and every invariant produces a named diagnostic.
struct RunConfig {
    double L = 4.0;
    double ell = 1.0;
    std::string preset = "zero-temperature";
    std::optional<double> h1, h2, psi, phi;  // explicit state, overrides preset
    std::string bc = "";                     // "NS" or "R" when explicit
    int grid_n = 256;
    unsigned seed = 1;
    std::vector<double> times = {0.1, 0.4, 1.0};
    std::string out_dir = "out";
    std::set<std::string> formats = {"csv", "json"};

    Geometry geometry() const { return Geometry(L, ell); }

    StateParams state() const {
        const Geometry g = geometry();
        if (!bc.empty()) {
            if (bc == "NS") return StateParams::ns();
            return StateParams::ramond(h1.value_or(0.0), h2.value_or(0.0), psi.value_or(0.0),
                                       phi.value_or(0.0), g);
        }
        if (preset == "ns-vacuum") return preset_ns_vacuum();
        if (preset == "zero-temperature") return preset_zero_temperature(g);
        if (preset == "massive-vacuum") return preset_massive_vacuum(g);
        if (preset == "tip-plus") return preset_tip(+1, g);
        if (preset == "tip-minus") return preset_tip(-1, g);
        if (preset == "rim") return preset_rim(psi.value_or(0.5 * pi), phi.value_or(0.0), g);
        throw std::invalid_argument("config: unknown preset '" + preset + "'");
    }
};

struct ConfigDiagnostic {
    std::string field;
    std::string message;
};

/// Total validation: every violated invariant yields a named diagnostic.
inline std::vector<ConfigDiagnostic> validate(const RunConfig& c) {
    std::vector<ConfigDiagnostic> out;
    if (!(c.L > 0.0)) out.push_back({"geometry.L", "must be positive"});
    if (!(c.ell > 0.0)) out.push_back({"geometry.ell", "must be positive"});
    if (c.L > 0.0 && c.ell > 0.0 && !(2.0 * c.ell < c.L))
        out.push_back({"geometry", "need 2*ell < L (strict)"});
    static const std::set<std::string> presets = {"ns-vacuum",     "zero-temperature",
                                                  "massive-vacuum", "tip-plus",
                                                  "tip-minus",      "rim"};
    if (c.bc.empty() && presets.count(c.preset) == 0)
        out.push_back({"state.preset", "unknown preset '" + c.preset + "'"});
    if (!c.bc.empty() && c.bc != "NS" && c.bc != "R")
        out.push_back({"state.bc", "must be NS or R"});
    if (c.bc == "R" && c.L > 0.0) {
        const double hmax = 0.5 / c.L;
        if (c.h1 && std::abs(*c.h1) > hmax) out.push_back({"state.h1", "|h1| exceeds 1/(2L)"});
        if (c.h2 && std::abs(*c.h2) > hmax) out.push_back({"state.h2", "|h2| exceeds 1/(2L)"});
        if (c.psi && !(*c.psi >= 0.0 && *c.psi <= pi))
            out.push_back({"state.psi", "psi outside [0, pi]"});
    }
    if (c.bc == "NS" && (c.h1 || c.h2 || c.psi || c.phi))
        out.push_back({"state", "antiperiodic states carry no zero-mode parameters"});
    if (c.grid_n < 16 || c.grid_n % 2 != 0)
        out.push_back({"grid.N", "must be even and >= 16"});
    for (const auto& f : c.formats)
        if (f != "csv" && f != "json" && f != "svg")
            out.push_back({"output.formats", "unknown format '" + f + "'"});
    for (double t : c.times)
        if (!std::isfinite(t)) out.push_back({"times", "non-finite entry"});
    return out;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                           const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (known.count(it.key()) == 0)
            throw std::invalid_argument("config: unknown key '" + scope + it.key() + "'");
}

}  // namespace detail

/// Parse the JSON config format. Structure errors and unknown keys throw;
/// value-level invariants are reported by validate().
inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    detail::reject_unknown(j, {"geometry", "state", "grid", "times", "output"}, "");
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        detail::reject_unknown(g, {"L", "ell"}, "geometry.");
        if (g.contains("L")) c.L = g.at("L").get<double>();
        if (g.contains("ell")) c.ell = g.at("ell").get<double>();
    }
    if (j.contains("state")) {
        const auto& s = j.at("state");
        detail::reject_unknown(s, {"preset", "bc", "h1", "h2", "psi", "phi"}, "state.");
        if (s.contains("preset")) c.preset = s.at("preset").get<std::string>();
        if (s.contains("bc")) c.bc = s.at("bc").get<std::string>();
        if (s.contains("h1")) c.h1 = s.at("h1").get<double>();
        if (s.contains("h2")) c.h2 = s.at("h2").get<double>();
        if (s.contains("psi")) c.psi = s.at("psi").get<double>();
        if (s.contains("phi")) c.phi = s.at("phi").get<double>();
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        detail::reject_unknown(g, {"N", "seed"}, "grid.");
        if (g.contains("N")) c.grid_n = g.at("N").get<int>();
        if (g.contains("seed")) c.seed = g.at("seed").get<unsigned>();
    }
    if (j.contains("times")) c.times = j.at("times").get<std::vector<double>>();
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown(o, {"directory", "formats"}, "output.");
        if (o.contains("directory")) c.out_dir = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            c.formats.clear();
            for (const auto& f : o.at("formats")) c.formats.insert(f.get<std::string>());
        }
    }
    return c;
}

}  // namespace modcyl
