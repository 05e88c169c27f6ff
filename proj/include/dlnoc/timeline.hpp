#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"
#include "dlnoc/format.hpp"
#include "dlnoc/solver.hpp"
#include "dlnoc/topology.hpp"

namespace dlnoc {

/// Per-level schedule replayed from the switching model, independent of the
/// flow matrix. Every node on level d starts at start[d] and ends at finish[d].
struct Timeline {
    Protocol protocol = Protocol::vct;
    std::vector<double> fractions;
    std::vector<double> start;
    std::vector<double> finish;
    double link_time = 0.0; ///< z * Tcm
    double makespan = 0.0; ///< latest finish over levels that carry load

    std::size_t levels() const noexcept { return start.size(); }
};

/// Time the shares of levels 1..d-1 occupy a path before level d's share
/// starts to flow: z*Tcm * (a_1 + ... + a_{d-1}).
inline std::vector<double> upstream_transfer_times(std::span<const double> fractions, double link_time) {
    std::vector<double> up(fractions.size(), 0.0);
    double acc = 0.0;
    for (std::size_t d = 1; d < fractions.size(); ++d) {
        up[d] = link_time * acc;
        acc += fractions[d];
    }
    return up;
}

/// VCT: levels 0 and 1 compute from t = 0 (cut-through relay); deeper levels
/// start as soon as their own share begins to arrive.
/// SNF: a level starts only once its whole share has arrived.
inline Timeline evaluate(Protocol protocol, const LevelAllocation& alloc, const LevelProfile& profile,
                         const Scenario& scenario) {
    const std::size_t k = profile.levels();
    if (alloc.fractions.size() != k)
        throw InputError("allocation has " + std::to_string(alloc.fractions.size()) + " levels, profile has " +
                         std::to_string(k));
    Timeline tl;
    tl.protocol = protocol;
    tl.fractions = alloc.fractions;
    tl.link_time = scenario.link_time();
    tl.start.assign(k, 0.0);
    tl.finish.assign(k, 0.0);

    const auto up = upstream_transfer_times(alloc.fractions, tl.link_time);
    for (std::size_t d = 0; d < k; ++d) {
        if (d == 0) tl.start[d] = 0.0;
        else if (protocol == Protocol::vct) tl.start[d] = d == 1 ? 0.0 : up[d];
        else tl.start[d] = up[d] + tl.link_time * alloc.fractions[d];
        tl.finish[d] = tl.start[d] + alloc.fractions[d] * scenario.compute_time();
    }
    // Levels left without load (truncation) do not bound the makespan.
    for (std::size_t d = 0; d < k; ++d)
        if (alloc.fractions[d] != 0.0) tl.makespan = std::max(tl.makespan, tl.finish[d]);
    return tl;
}

struct SimultaneityCheck {
    bool simultaneous = true;
    double max_deviation = 0.0; ///< max |finish_d - makespan| / makespan over participating levels
};

/// Levels with zero load (dropped by truncation) do not participate.
inline SimultaneityCheck verify_simultaneous(const Timeline& tl, double rel_tol) {
    SimultaneityCheck out;
    if (tl.makespan <= 0.0) return out;
    for (std::size_t d = 0; d < tl.levels(); ++d) {
        if (tl.fractions[d] == 0.0) continue;
        out.max_deviation = std::max(out.max_deviation, std::abs(tl.finish[d] - tl.makespan) / tl.makespan);
    }
    out.simultaneous = out.max_deviation <= rel_tol;
    return out;
}

struct GanttRecord {
    NodeId node = 0;
    NodeId parent = 0;
    std::size_t level = 0;
    double compute_start = 0.0;
    double compute_end = 0.0;
    double receive_start = 0.0; ///< on the edge parent -> node; empty for the root
    double receive_end = 0.0;
};

/// One record per node, ordered by node id. Receive intervals are the level
/// aggregate [z*Tcm*(a_1+..+a_{d-1}), z*Tcm*(a_1+..+a_d)].
inline std::vector<GanttRecord> expand_gantt(const Timeline& tl, const DistributionTree& tree,
                                             const LevelProfile& profile) {
    if (tl.levels() != profile.levels()) throw InputError("timeline and profile depth differ");
    if (tree.parent.size() != profile.node_count()) throw InputError("tree and profile node counts differ");
    const auto up = upstream_transfer_times(tl.fractions, tl.link_time);

    std::vector<GanttRecord> out;
    out.reserve(profile.node_count());
    for (NodeId v = 0; v < profile.node_count(); ++v) {
        const std::size_t d = profile.distance[v];
        GanttRecord rec;
        rec.node = v;
        rec.parent = tree.parent[v];
        rec.level = d;
        rec.compute_start = tl.start[d];
        rec.compute_end = tl.finish[d];
        if (d > 0) {
            rec.receive_start = up[d];
            rec.receive_end = up[d] + tl.link_time * tl.fractions[d];
        }
        out.push_back(rec);
    }
    return out;
}

inline void write_gantt_csv(std::ostream& os, const std::vector<GanttRecord>& records) {
    os << "node_id,level,compute_start,compute_end,receive_start,receive_end\n";
    for (const auto& r : records) {
        os << r.node << ',' << r.level << ',' << sig12(r.compute_start) << ',' << sig12(r.compute_end) << ','
           << sig12(r.receive_start) << ',' << sig12(r.receive_end) << '\n';
    }
}

} // namespace dlnoc
