#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"
#include "dlnoc/topology.hpp"

namespace dlnoc {

/// Scenario description read by the CLI. JSON with a closed key set:
///
///   {
///     "topology":  {"kind": "mesh" | "torus" | "hypercube", "dims": [m, n] | [q]},
///     "injection": [row, col] | [bit0, bit1, ...],      optional, default origin
///     "protocol":  "vct" | "snf",
///     "sigma": 0.5,                                     exactly one of sigma / constants
///     "constants": {"omega": 1, "z": 0.5, "Tcp": 1, "Tcm": 1},
///     "load": 1.0,                                      optional makespan scale
///     "options": {"truncate": false,
///                 "tolerances": {"simultaneous": 1e-9, "cramer": 1e-9, "residual": 1e-10}}
///   }
struct ScenarioFile {
    Topology topology = Topology::mesh(1, 1);
    InjectionSpec injection;
    Protocol protocol = Protocol::vct;
    Scenario scenario;
    bool sigma_derived = false; ///< sigma computed from the constant quadruple
    double load = 1.0;
    bool truncate = false;
    double simultaneous_tol = 1e-9;
    double cramer_tol = 1e-9;
    double residual_tol = 1e-10; ///< per level
};

/// Validation failure with a location: "line L, column C" or a dotted field path.
class ScenarioError : public InputError {
public:
    ScenarioError(const std::string& where, const std::string& what)
        : InputError(where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ScenarioError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

inline const json& need_object(const json& v, const std::string& path) {
    if (!v.is_object()) throw ScenarioError(path, "expected an object");
    return v;
}

inline double need_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ScenarioError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path, "expected a finite number");
    return d;
}

inline std::vector<int> need_int_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) throw ScenarioError(path + "[" + std::to_string(i) + "]", "expected an integer");
        const auto x = v[i].get<long long>();
        if (x < -1'000'000'000LL || x > 1'000'000'000LL)
            throw ScenarioError(path + "[" + std::to_string(i) + "]", "integer out of range");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

inline std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Topology parse_topology(const json& v) {
    need_object(v, "topology");
    reject_unknown(v, "topology", {"kind", "dims"});
    if (!v.contains("kind") || !v["kind"].is_string()) throw ScenarioError("topology.kind", "expected a string");
    if (!v.contains("dims")) throw ScenarioError("topology.dims", "missing");
    const std::string kind = v["kind"].get<std::string>();
    const auto dims = need_int_array(v["dims"], "topology.dims");
    try {
        if (kind == "mesh" || kind == "torus") {
            if (dims.size() != 2) throw ScenarioError("topology.dims", kind + " needs [rows, cols]");
            return kind == "mesh" ? Topology::mesh(dims[0], dims[1]) : Topology::torus(dims[0], dims[1]);
        }
        if (kind == "hypercube") {
            if (dims.size() != 1) throw ScenarioError("topology.dims", "hypercube needs [dimension]");
            return Topology::hypercube(dims[0]);
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const InputError& e) {
        throw ScenarioError("topology.dims", e.what());
    }
    throw ScenarioError("topology.kind", "expected mesh, torus or hypercube, got '" + kind + "'");
}

} // namespace detail

inline ScenarioFile parse_scenario(std::string_view text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError(detail::line_column(text, e.byte), "malformed scenario file");
    }
    detail::need_object(root, "<root>");
    detail::reject_unknown(root, "", {"topology", "injection", "protocol", "sigma", "constants", "load", "options"});

    ScenarioFile out;
    if (!root.contains("topology")) throw ScenarioError("topology", "missing");
    out.topology = detail::parse_topology(root["topology"]);

    if (root.contains("injection")) {
        const auto coords = detail::need_int_array(root["injection"], "injection");
        try {
            out.injection = injection_at(out.topology, coords);
        } catch (const InputError& e) {
            throw ScenarioError("injection", e.what());
        }
    } else {
        out.injection = injection_at(out.topology, NodeId{0});
    }

    if (!root.contains("protocol") || !root["protocol"].is_string())
        throw ScenarioError("protocol", "expected \"vct\" or \"snf\"");
    const auto proto = root["protocol"].get<std::string>();
    if (proto == "vct") out.protocol = Protocol::vct;
    else if (proto == "snf") out.protocol = Protocol::snf;
    else throw ScenarioError("protocol", "expected \"vct\" or \"snf\", got '" + proto + "'");

    const bool has_sigma = root.contains("sigma");
    const bool has_constants = root.contains("constants");
    if (has_sigma == has_constants) throw ScenarioError("sigma", "give exactly one of sigma / constants");
    try {
        if (has_sigma) {
            out.scenario = Scenario::from_sigma(detail::need_number(root["sigma"], "sigma"));
        } else {
            const auto& c = detail::need_object(root["constants"], "constants");
            detail::reject_unknown(c, "constants", {"omega", "z", "Tcp", "Tcm"});
            for (const char* key : {"omega", "z", "Tcp", "Tcm"})
                if (!c.contains(key)) throw ScenarioError(std::string("constants.") + key, "missing");
            out.scenario = Scenario::from_constants(detail::need_number(c["omega"], "constants.omega"),
                                                    detail::need_number(c["z"], "constants.z"),
                                                    detail::need_number(c["Tcp"], "constants.Tcp"),
                                                    detail::need_number(c["Tcm"], "constants.Tcm"));
            out.sigma_derived = true;
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const InputError& e) {
        throw ScenarioError(has_sigma ? "sigma" : "constants", e.what());
    }

    if (root.contains("load")) {
        out.load = detail::need_number(root["load"], "load");
        if (!(out.load > 0.0)) throw ScenarioError("load", "must be > 0");
    }

    if (root.contains("options")) {
        const auto& o = detail::need_object(root["options"], "options");
        detail::reject_unknown(o, "options", {"truncate", "tolerances"});
        if (o.contains("truncate")) {
            if (!o["truncate"].is_boolean()) throw ScenarioError("options.truncate", "expected true or false");
            out.truncate = o["truncate"].get<bool>();
        }
        if (o.contains("tolerances")) {
            const auto& t = detail::need_object(o["tolerances"], "options.tolerances");
            detail::reject_unknown(t, "options.tolerances", {"simultaneous", "cramer", "residual"});
            auto tol = [&](const char* key, double& dst) {
                if (!t.contains(key)) return;
                const std::string path = std::string("options.tolerances.") + key;
                dst = detail::need_number(t[key], path);
                if (!(dst > 0.0)) throw ScenarioError(path, "must be > 0");
            };
            tol("simultaneous", out.simultaneous_tol);
            tol("cramer", out.cramer_tol);
            tol("residual", out.residual_tol);
        }
    }
    return out;
}

inline ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path, "cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace dlnoc
