#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "storm/som.hpp"
#include "storm/tlr.hpp"

namespace storm {

/// Distances between 4-adjacent prototypes, plus the per-node mean of its
/// incident edges.  Each unordered adjacent pair appears exactly once.
struct UMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Grid node_values; // rows x cols, mean of incident edge distances
    Grid right_edges; // rows x (cols-1): distance (r,c)-(r,c+1)
    Grid down_edges;  // (rows-1) x cols: distance (r,c)-(r+1,c)

    std::size_t edge_count() const { return right_edges.cells.size() + down_edges.cells.size(); }

    std::vector<double> all_edges() const {
        std::vector<double> out;
        out.reserve(edge_count());
        out.insert(out.end(), right_edges.cells.begin(), right_edges.cells.end());
        out.insert(out.end(), down_edges.cells.begin(), down_edges.cells.end());
        return out;
    }

    /// Distance for an unordered adjacent pair; (a,b) and (b,a) agree.
    double edge_between(LatticeCoord a, LatticeCoord b) const {
        if (a.row == b.row && (a.col + 1 == b.col || b.col + 1 == a.col))
            return right_edges.at(a.row, std::min(a.col, b.col));
        if (a.col == b.col && (a.row + 1 == b.row || b.row + 1 == a.row))
            return down_edges.at(std::min(a.row, b.row), a.col);
        throw std::invalid_argument("edge_between: nodes are not lattice-adjacent");
    }

    friend bool operator==(const UMatrix&, const UMatrix&) = default;
};

/// Euclidean prototype distances over the 4-neighborhood.
inline UMatrix compute_umatrix(const SomMap& map) {
    if (map.node_count() < 2)
        throw std::invalid_argument("compute_umatrix: map needs at least two nodes");

    UMatrix u;
    u.rows = map.rows;
    u.cols = map.cols;
    u.right_edges = Grid(map.rows, map.cols - 1);
    u.down_edges = Grid(map.rows - 1, map.cols);
    u.node_values = Grid(map.rows, map.cols);

    for (std::size_t r = 0; r < map.rows; ++r)
        for (std::size_t c = 0; c + 1 < map.cols; ++c)
            u.right_edges.at(r, c) =
                std::sqrt(squared_distance(map.at({r, c}).prototype, map.at({r, c + 1}).prototype));
    for (std::size_t r = 0; r + 1 < map.rows; ++r)
        for (std::size_t c = 0; c < map.cols; ++c)
            u.down_edges.at(r, c) =
                std::sqrt(squared_distance(map.at({r, c}).prototype, map.at({r + 1, c}).prototype));

    for (std::size_t r = 0; r < map.rows; ++r) {
        for (std::size_t c = 0; c < map.cols; ++c) {
            double sum = 0.0;
            std::size_t incident = 0;
            if (c > 0) { sum += u.right_edges.at(r, c - 1); ++incident; }
            if (c + 1 < map.cols) { sum += u.right_edges.at(r, c); ++incident; }
            if (r > 0) { sum += u.down_edges.at(r - 1, c); ++incident; }
            if (r + 1 < map.rows) { sum += u.down_edges.at(r, c); ++incident; }
            u.node_values.at(r, c) = sum / static_cast<double>(incident);
        }
    }
    return u;
}

/// Linear-interpolation quantile of a sample (the common "type 7" estimator).
inline double quantile_linear(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile must lie in (0,1)");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

/// q-quantile over all inter-node edge distances, each pair counted once.
inline double edge_quantile(const UMatrix& u, double q) {
    return quantile_linear(u.all_edges(), q);
}

/// Nodes with at least one incident edge strictly above the threshold.
inline BoolGrid flag_edges_above(const UMatrix& u, double threshold) {
    BoolGrid flags(u.rows, u.cols, 0);
    for (std::size_t r = 0; r < u.rows; ++r)
        for (std::size_t c = 0; c + 1 < u.cols; ++c)
            if (u.right_edges.at(r, c) > threshold) flags.at(r, c) = flags.at(r, c + 1) = 1;
    for (std::size_t r = 0; r + 1 < u.rows; ++r)
        for (std::size_t c = 0; c < u.cols; ++c)
            if (u.down_edges.at(r, c) > threshold) flags.at(r, c) = flags.at(r + 1, c) = 1;
    return flags;
}

/// Boundary rule: flag every node incident to an edge whose distance lies
/// strictly above the q-quantile of all edge distances.  The default
/// q = 0.75 assumes roughly a quarter of the map separates clusters.
inline BoolGrid boundary_nodes(const UMatrix& u, double q = 0.75) {
    return flag_edges_above(u, edge_quantile(u, q));
}

/// Connected-component labeling of non-boundary nodes under 4-adjacency.
/// Region ids are assigned in row-major discovery order starting at 0;
/// boundary nodes get -1.
inline RegionGrid connect_regions(const BoolGrid& boundary) {
    RegionGrid regions(boundary.rows, boundary.cols, -1);
    std::int32_t next_id = 0;
    std::deque<LatticeCoord> frontier;

    for (std::size_t r = 0; r < boundary.rows; ++r) {
        for (std::size_t c = 0; c < boundary.cols; ++c) {
            if (boundary.at(r, c) || regions.at(r, c) != -1) continue;
            const std::int32_t id = next_id++;
            regions.at(r, c) = id;
            frontier.push_back({r, c});
            while (!frontier.empty()) {
                const LatticeCoord p = frontier.front();
                frontier.pop_front();
                const auto visit = [&](std::size_t nr, std::size_t nc) {
                    if (boundary.at(nr, nc) || regions.at(nr, nc) != -1) return;
                    regions.at(nr, nc) = id;
                    frontier.push_back({nr, nc});
                };
                if (p.row > 0) visit(p.row - 1, p.col);
                if (p.row + 1 < boundary.rows) visit(p.row + 1, p.col);
                if (p.col > 0) visit(p.row, p.col - 1);
                if (p.col + 1 < boundary.cols) visit(p.row, p.col + 1);
            }
        }
    }
    return regions;
}

/// The dominant receptor per region: sums activation counts over member
/// nodes and picks the receptor with the largest total (ties go to the
/// lowest receptor index); regions with no activity are labelled "none".
/// With by_node_bits set, nodes are counted by state bit instead of by
/// activation count.
inline std::vector<std::string> label_regions(const SomMap& map, const RegionGrid& regions,
                                              const Repertoire& repertoire,
                                              bool by_node_bits = false) {
    if (map.rows != regions.rows || map.cols != regions.cols)
        throw std::invalid_argument("label_regions: grid dimensions do not match map");
    if (map.tlr_count != repertoire.size())
        throw std::invalid_argument("label_regions: map carries " + std::to_string(map.tlr_count) +
                                    " receptor positions, repertoire has " +
                                    std::to_string(repertoire.size()));

    std::int32_t region_count = 0;
    for (const std::int32_t id : regions.cells) region_count = std::max(region_count, id + 1);

    const std::size_t m = repertoire.size();
    std::vector<std::vector<std::uint64_t>> totals(static_cast<std::size_t>(region_count),
                                                   std::vector<std::uint64_t>(m, 0));
    for (std::size_t i = 0; i < regions.cells.size(); ++i) {
        const std::int32_t id = regions.cells[i];
        if (id < 0) continue;
        const Node& node = map.nodes[i];
        for (std::size_t k = 0; k < m; ++k)
            totals[static_cast<std::size_t>(id)][k] +=
                by_node_bits ? (node.tlr_state[k] ? 1 : 0) : node.activation_counts[k];
    }

    std::vector<std::string> labels;
    labels.reserve(totals.size());
    for (const auto& region_totals : totals) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < m; ++k)
            if (region_totals[k] > region_totals[best]) best = k;
        labels.push_back(region_totals[best] == 0 ? "none" : repertoire.receptors[best].name);
    }
    return labels;
}

/// Boundary flags, region partition and per-region labels for one map.
struct RegionLabeling {
    BoolGrid boundary;
    RegionGrid region_id; // -1 on boundary nodes
    std::vector<std::string> labels;
    double threshold_used = 0.0;

    std::size_t region_count() const { return labels.size(); }

    friend bool operator==(const RegionLabeling&, const RegionLabeling&) = default;
};

/// Full interpretation pass: U-Matrix, quantile boundary, connected regions,
/// dominant-receptor labels.
inline RegionLabeling interpret(const SomMap& map, const Repertoire& repertoire, double q = 0.75,
                                bool by_node_bits = false) {
    const UMatrix u = compute_umatrix(map);
    RegionLabeling out;
    out.threshold_used = edge_quantile(u, q);
    out.boundary = flag_edges_above(u, out.threshold_used);
    out.region_id = connect_regions(out.boundary);
    out.labels = label_regions(map, out.region_id, repertoire, by_node_bits);
    return out;
}

} // namespace storm
