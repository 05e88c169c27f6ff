#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dlnoc/error.hpp"

namespace dlnoc {

using NodeId = std::size_t;

enum class TopologyKind { mesh, torus, hypercube };

inline const char* to_string(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::mesh: return "mesh";
    case TopologyKind::torus: return "torus";
    case TopologyKind::hypercube: return "hypercube";
    }
    return "?";
}

/// Homogeneous interconnect. Mesh and torus nodes are numbered row-major,
/// id = row * cols + col; hypercube node ids are the bit vectors themselves.
class Topology {
public:
    static constexpr int max_hypercube_dimension = 20;

    static Topology mesh(int rows, int cols) { return grid(TopologyKind::mesh, rows, cols); }
    static Topology torus(int rows, int cols) { return grid(TopologyKind::torus, rows, cols); }

    static Topology hypercube(int dimension) {
        if (dimension < 0 || dimension > max_hypercube_dimension)
            throw InputError("hypercube dimension must be in [0, " +
                             std::to_string(max_hypercube_dimension) + "], got " +
                             std::to_string(dimension));
        return Topology(TopologyKind::hypercube, 0, 0, dimension);
    }

    TopologyKind kind() const noexcept { return kind_; }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int dimension() const noexcept { return dimension_; }

    std::size_t node_count() const noexcept {
        if (kind_ == TopologyKind::hypercube) return std::size_t{1} << dimension_;
        return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
    }

    bool contains(NodeId node) const noexcept { return node < node_count(); }

    /// Short name used in output file names, e.g. "mesh2x3", "hypercube4".
    std::string name() const {
        if (kind_ == TopologyKind::hypercube) return "hypercube" + std::to_string(dimension_);
        return std::string(to_string(kind_)) + std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    /// Coordinates of a node: (row, col) for grids, q bits (bit 0 first) for hypercubes.
    std::vector<int> coordinates(NodeId node) const {
        require(node);
        if (kind_ == TopologyKind::hypercube) {
            std::vector<int> bits(static_cast<std::size_t>(dimension_));
            for (int b = 0; b < dimension_; ++b) bits[static_cast<std::size_t>(b)] = (node >> b) & 1U;
            return bits;
        }
        return {static_cast<int>(node / static_cast<std::size_t>(cols_)),
                static_cast<int>(node % static_cast<std::size_t>(cols_))};
    }

    NodeId node_at(std::span<const int> coords) const {
        if (kind_ == TopologyKind::hypercube) {
            if (coords.size() != static_cast<std::size_t>(dimension_))
                throw InputError("hypercube" + std::to_string(dimension_) + " node needs " +
                                 std::to_string(dimension_) + " bits, got " +
                                 std::to_string(coords.size()));
            NodeId id = 0;
            for (std::size_t b = 0; b < coords.size(); ++b) {
                if (coords[b] != 0 && coords[b] != 1)
                    throw InputError("hypercube coordinate bits must be 0 or 1");
                id |= static_cast<NodeId>(coords[b]) << b;
            }
            return id;
        }
        if (coords.size() != 2)
            throw InputError(name() + " node needs 2 coordinates, got " + std::to_string(coords.size()));
        if (coords[0] < 0 || coords[0] >= rows_ || coords[1] < 0 || coords[1] >= cols_)
            throw InputError("coordinate (" + std::to_string(coords[0]) + "," +
                             std::to_string(coords[1]) + ") outside " + name());
        return static_cast<NodeId>(coords[0]) * static_cast<NodeId>(cols_) +
               static_cast<NodeId>(coords[1]);
    }

    /// Distinct neighbours in ascending id order (self-loops of 1-wide tori removed).
    std::vector<NodeId> neighbors(NodeId node) const {
        require(node);
        std::vector<NodeId> out;
        if (kind_ == TopologyKind::hypercube) {
            for (int b = 0; b < dimension_; ++b) out.push_back(node ^ (NodeId{1} << b));
        } else {
            const int r = static_cast<int>(node / static_cast<std::size_t>(cols_));
            const int c = static_cast<int>(node % static_cast<std::size_t>(cols_));
            const bool wrap = kind_ == TopologyKind::torus;
            auto push = [&](int rr, int cc) {
                if (wrap) {
                    rr = (rr + rows_) % rows_;
                    cc = (cc + cols_) % cols_;
                } else if (rr < 0 || rr >= rows_ || cc < 0 || cc >= cols_) {
                    return;
                }
                const NodeId id = static_cast<NodeId>(rr) * static_cast<NodeId>(cols_) +
                                  static_cast<NodeId>(cc);
                if (id != node) out.push_back(id);
            };
            push(r - 1, c);
            push(r + 1, c);
            push(r, c - 1);
            push(r, c + 1);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void require(NodeId node) const {
        if (!contains(node))
            throw InputError("node " + std::to_string(node) + " is not a node of " + name() +
                             " (" + std::to_string(node_count()) + " nodes)");
    }

    friend bool operator==(const Topology&, const Topology&) = default;

private:
    Topology(TopologyKind kind, int rows, int cols, int dimension)
        : kind_(kind), rows_(rows), cols_(cols), dimension_(dimension) {}

    static Topology grid(TopologyKind kind, int rows, int cols) {
        if (rows < 1 || cols < 1)
            throw InputError(std::string(to_string(kind)) + " dimensions must be positive, got " +
                             std::to_string(rows) + "x" + std::to_string(cols));
        if (static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols) > (1ULL << 24))
            throw InputError("grid too large");
        return Topology(kind, rows, cols, 0);
    }

    TopologyKind kind_;
    int rows_;
    int cols_;
    int dimension_;
};

enum class InjectionClass { corner, boundary, interior, any };

inline const char* to_string(InjectionClass cls) {
    switch (cls) {
    case InjectionClass::corner: return "corner";
    case InjectionClass::boundary: return "boundary";
    case InjectionClass::interior: return "interior";
    case InjectionClass::any: return "any";
    }
    return "?";
}

/// Corner iff both mesh coordinates are extremal, boundary iff exactly one is.
/// Tori and hypercubes are vertex-transitive, so every node is "any".
inline InjectionClass classify(const Topology& topo, NodeId node) {
    topo.require(node);
    if (topo.kind() != TopologyKind::mesh) return InjectionClass::any;
    const auto rc = topo.coordinates(node);
    const bool row_edge = rc[0] == 0 || rc[0] == topo.rows() - 1;
    const bool col_edge = rc[1] == 0 || rc[1] == topo.cols() - 1;
    if (row_edge && col_edge) return InjectionClass::corner;
    if (row_edge || col_edge) return InjectionClass::boundary;
    return InjectionClass::interior;
}

struct InjectionSpec {
    NodeId node = 0;
    InjectionClass cls = InjectionClass::corner;
};

inline InjectionSpec injection_at(const Topology& topo, NodeId node) {
    return {node, classify(topo, node)};
}

inline InjectionSpec injection_at(const Topology& topo, std::span<const int> coords) {
    return injection_at(topo, topo.node_at(coords));
}

/// Node counts per hop distance from the injection node.
struct LevelProfile {
    std::vector<std::size_t> counts;
    std::vector<std::size_t> distance; // node id -> hop distance

    std::size_t levels() const noexcept { return counts.size(); }

    std::size_t node_count() const noexcept { return distance.size(); }

    /// Smallest node id on each level; these label the per-node fraction columns.
    std::vector<NodeId> representatives() const {
        std::vector<NodeId> rep(counts.size(), std::numeric_limits<NodeId>::max());
        for (NodeId v = 0; v < distance.size(); ++v) rep[distance[v]] = std::min(rep[distance[v]], v);
        return rep;
    }
};

/// Profile from raw counts, for use without a concrete topology.
inline LevelProfile profile_from_counts(std::vector<std::size_t> counts) {
    if (counts.empty()) throw InputError("level profile needs at least one level");
    if (counts.front() != 1) throw InputError("level 0 must contain exactly the injection node");
    LevelProfile p;
    for (std::size_t d = 0; d < counts.size(); ++d) {
        if (counts[d] == 0) throw InputError("level " + std::to_string(d) + " is empty");
        p.distance.insert(p.distance.end(), counts[d], d);
    }
    p.counts = std::move(counts);
    return p;
}

namespace detail {

inline std::vector<std::size_t> bfs_distances(const Topology& topo, NodeId root) {
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(topo.node_count(), unseen);
    std::deque<NodeId> queue{root};
    dist[root] = 0;
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        for (NodeId u : topo.neighbors(v)) {
            if (dist[u] != unseen) continue;
            dist[u] = dist[v] + 1;
            queue.push_back(u);
        }
    }
    return dist;
}

} // namespace detail

inline LevelProfile level_profile(const Topology& topo, const InjectionSpec& injection) {
    topo.require(injection.node);
    LevelProfile p;
    p.distance = detail::bfs_distances(topo, injection.node);
    const std::size_t depth = *std::max_element(p.distance.begin(), p.distance.end());
    p.counts.assign(depth + 1, 0);
    for (std::size_t d : p.distance) ++p.counts[d];
    return p;
}

/// Shortest-path tree rooted at the injection node; parent[root] == root.
struct DistributionTree {
    NodeId root = 0;
    std::vector<NodeId> parent;
    std::vector<std::vector<NodeId>> children;

    bool is_root(NodeId v) const noexcept { return v == root; }

    friend bool operator==(const DistributionTree&, const DistributionTree&) = default;
};

/// Each node's parent is its smallest-id neighbour one hop closer to the root
/// (lexicographically smallest coordinate under row-major numbering).
inline DistributionTree distribution_tree(const Topology& topo, const InjectionSpec& injection) {
    topo.require(injection.node);
    const auto dist = detail::bfs_distances(topo, injection.node);
    DistributionTree tree;
    tree.root = injection.node;
    tree.parent.resize(topo.node_count());
    tree.children.resize(topo.node_count());
    for (NodeId v = 0; v < topo.node_count(); ++v) {
        if (v == injection.node) {
            tree.parent[v] = v;
            continue;
        }
        for (NodeId u : topo.neighbors(v)) { // ascending ids
            if (dist[u] + 1 == dist[v]) {
                tree.parent[v] = u;
                tree.children[u].push_back(v);
                break;
            }
        }
    }
    return tree;
}

} // namespace dlnoc
