#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"
#include "dlnoc/format.hpp"
#include "dlnoc/metrics.hpp"
#include "dlnoc/solver.hpp"
#include "dlnoc/topology.hpp"

namespace dlnoc {

enum class InfeasibleMode {
    flag,     ///< solve the full system and mark negative solutions infeasible
    truncate, ///< drop deepest levels until the solution is feasible
};

struct SweepRow {
    double sigma = 0.0;
    std::vector<double> level_fractions;
    std::vector<double> node_fractions; ///< one per representative node, see SweepTable
    double speedup = 0.0;
    double makespan = 0.0;
    bool feasible = false;
    std::size_t levels_used = 0;
};

struct SweepTable {
    std::vector<NodeId> representatives; ///< smallest node id on each level
    std::vector<SweepRow> rows;          ///< ascending sigma
};

/// "start:stop:step", stop included when it lies on the grid.
inline std::vector<double> parse_grid(std::string_view spec) {
    const auto p1 = spec.find(':');
    const auto p2 = p1 == std::string_view::npos ? p1 : spec.find(':', p1 + 1);
    if (p2 == std::string_view::npos || spec.find(':', p2 + 1) != std::string_view::npos)
        throw InputError("grid must be start:stop:step, got '" + std::string(spec) + "'");
    auto num = [&](std::string_view s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(std::string(s), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v))
            throw InputError("bad number '" + std::string(s) + "' in grid '" + std::string(spec) + "'");
        return v;
    };
    const double start = num(spec.substr(0, p1));
    const double stop = num(spec.substr(p1 + 1, p2 - p1 - 1));
    const double step = num(spec.substr(p2 + 1));
    if (!(step > 0.0)) throw InputError("grid step must be > 0");
    if (start < 0.0) throw InputError("grid values must be >= 0");
    if (stop < start) throw InputError("grid stop is below start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    if (n > 10'000'000) throw InputError("grid too large");
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(round12(start + static_cast<double>(i) * step));
    return grid;
}

namespace detail {

inline SweepRow sweep_point(std::span<const std::size_t> counts, Protocol protocol, const Scenario& scenario,
                            InfeasibleMode mode) {
    SweepRow row;
    row.sigma = scenario.sigma;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        LevelAllocation alloc;
        FlowMatrix fm;
        if (mode == InfeasibleMode::truncate) {
            auto t = solve_with_truncation(counts, scenario.sigma, protocol);
            alloc = std::move(t.allocation);
            fm = std::move(t.matrix);
            row.levels_used = t.levels_used;
            row.feasible = true;
        } else {
            fm = build_flow_matrix(protocol, counts, scenario.sigma);
            alloc = solve(fm);
            row.levels_used = counts.size();
            row.feasible = check_feasibility(alloc, fm).feasible;
        }
        row.level_fractions = alloc.fractions;
        if (alloc.fractions.front() > 0.0) {
            const auto m = compute_metrics(alloc, scenario, fm);
            row.speedup = m.speedup;
            row.makespan = m.makespan;
        } else {
            row.speedup = row.makespan = nan;
        }
    } catch (const SolverError&) {
        row.level_fractions.assign(counts.size(), nan);
        row.speedup = row.makespan = nan;
        row.feasible = false;
        row.levels_used = counts.size();
    }
    row.node_fractions = row.level_fractions;
    return row;
}

} // namespace detail

/// Solve every sigma in `grid` against `base` (z rescaled per point). Points
/// are independent and may be spread over `threads` workers; rows come back
/// in grid order either way.
inline SweepTable sweep_sigma(const Topology& topo, const InjectionSpec& injection, Protocol protocol,
                              std::span<const double> grid, const Scenario& base,
                              InfeasibleMode mode = InfeasibleMode::flag, unsigned threads = 1) {
    if (grid.empty()) throw InputError("sigma grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) throw InputError("sigma grid values must be finite and >= 0");
        if (i && !(grid[i] > grid[i - 1])) throw InputError("sigma grid must be strictly increasing");
    }
    const LevelProfile profile = level_profile(topo, injection);
    SweepTable table;
    table.representatives = profile.representatives();
    table.rows.resize(grid.size());

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < grid.size(); i += stride)
            table.rows[i] = detail::sweep_point(profile.counts, protocol, base.with_sigma(grid[i]), mode);
    };
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(grid.size(), 64)));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }
    return table;
}

/// `<topology>_<injection>_<protocol>_sweep.<ext>`; the injection label carries
/// the node id unless it is node 0.
inline std::string sweep_file_name(const Topology& topo, const InjectionSpec& inj, Protocol protocol,
                                   std::string_view ext) {
    std::string label = to_string(inj.cls);
    if (inj.node != 0) label += std::to_string(inj.node);
    return topo.name() + "_" + label + "_" + to_string(protocol) + "_sweep." + std::string(ext);
}

inline void emit_csv(std::ostream& os, const SweepTable& table) {
    os << "sigma";
    for (std::size_t d = 0; d < table.representatives.size(); ++d) os << ",level_" << d;
    for (NodeId id : table.representatives) os << ",node_" << id;
    os << ",speedup,makespan,feasible,levels_used\n";
    for (const auto& r : table.rows) {
        os << sig12(r.sigma);
        for (double v : r.level_fractions) os << ',' << sig12(v);
        for (double v : r.node_fractions) os << ',' << sig12(v);
        os << ',' << sig12(r.speedup) << ',' << sig12(r.makespan) << ',' << (r.feasible ? "true" : "false") << ','
           << r.levels_used << '\n';
    }
    if (!os) throw std::runtime_error("failed writing sweep CSV");
}

/// Array of row objects whose keys follow the CSV column order.
inline nlohmann::ordered_json sweep_json(const SweepTable& table) {
    auto num = [](double v) -> nlohmann::ordered_json {
        if (!std::isfinite(v)) return nullptr;
        return round12(v);
    };
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json o;
        o["sigma"] = num(r.sigma);
        for (std::size_t d = 0; d < r.level_fractions.size(); ++d)
            o["level_" + std::to_string(d)] = num(r.level_fractions[d]);
        for (std::size_t d = 0; d < r.node_fractions.size(); ++d)
            o["node_" + std::to_string(table.representatives[d])] = num(r.node_fractions[d]);
        o["speedup"] = num(r.speedup);
        o["makespan"] = num(r.makespan);
        o["feasible"] = r.feasible;
        o["levels_used"] = r.levels_used;
        rows.push_back(std::move(o));
    }
    return rows;
}

inline void emit_json(std::ostream& os, const SweepTable& table) {
    os << sweep_json(table).dump(2) << '\n';
    if (!os) throw std::runtime_error("failed writing sweep JSON");
}

} // namespace dlnoc
