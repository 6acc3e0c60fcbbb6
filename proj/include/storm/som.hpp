#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "storm/grid.hpp"
#include "storm/rng.hpp"

namespace storm {

using FeatureVector = std::vector<double>;

/// Per-attribute (min,max) pair.
using ValueRange = std::pair<double, double>;

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        d2 += d * d;
    }
    return d2;
}

enum class Decay { linear, exponential };

/// Learning-rate and kernel-width schedule for one training run.
/// alpha and sigma are interpolated from their start to their end value
/// over steps 0..total_steps-1, so the end values are actually reached.
struct TrainingSchedule {
    std::size_t total_steps = 0;
    double alpha_start = 0.5;
    double alpha_end = 0.01;
    double sigma_start = 5.0;
    double sigma_end = 1.0;
    Decay decay = Decay::linear;

    void validate() const {
        if (total_steps == 0) throw std::invalid_argument("schedule: total_steps must be positive");
        if (!(alpha_start >= alpha_end) || !(alpha_end > 0.0) || alpha_start > 1.0)
            throw std::invalid_argument("schedule: need 1 >= alpha_start >= alpha_end > 0");
        if (!(sigma_start >= sigma_end) || !(sigma_end > 0.0))
            throw std::invalid_argument("schedule: need sigma_start >= sigma_end > 0");
    }

    double alpha(std::size_t t) const { return interpolate(alpha_start, alpha_end, t); }
    double sigma(std::size_t t) const { return interpolate(sigma_start, sigma_end, t); }

    double interpolate(double start, double end, std::size_t t) const {
        const double frac =
            total_steps > 1 ? static_cast<double>(t) / static_cast<double>(total_steps - 1) : 0.0;
        if (decay == Decay::exponential) return start * std::pow(end / start, frac);
        return start + (end - start) * frac;
    }

    friend bool operator==(const TrainingSchedule&, const TrainingSchedule&) = default;
};

/// One lattice node: a prototype in feature space plus the receptor
/// bookkeeping filled in by fused training.
struct Node {
    FeatureVector prototype;
    std::vector<std::uint8_t> tlr_state;          // 0/1 per receptor
    std::vector<std::uint64_t> activation_counts; // per receptor
    std::uint64_t win_count = 0;

    bool any_tlr_set() const {
        return std::any_of(tlr_state.begin(), tlr_state.end(), [](std::uint8_t b) { return b != 0; });
    }

    std::uint64_t total_activations() const {
        return std::accumulate(activation_counts.begin(), activation_counts.end(), std::uint64_t{0});
    }

    friend bool operator==(const Node&, const Node&) = default;
};

/// Rectangular lattice of prototype nodes.  Nodes are stored row-major.
struct SomMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t dim = 0;
    std::size_t tlr_count = 0; // receptor positions per node; 0 until fused training
    std::uint64_t seed = 0;
    TrainingSchedule schedule;
    std::vector<Node> nodes;

    std::size_t node_count() const { return rows * cols; }
    std::size_t index(LatticeCoord p) const { return p.row * cols + p.col; }
    LatticeCoord coord(std::size_t i) const { return {i / cols, i % cols}; }

    Node& at(LatticeCoord p) { return nodes[index(p)]; }
    const Node& at(LatticeCoord p) const { return nodes[index(p)]; }

    friend bool operator==(const SomMap&, const SomMap&) = default;
};

/// Builds a map with prototypes drawn uniformly from the given per-attribute
/// ranges.  Identical arguments yield an identical map.
inline SomMap init_map(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed,
                       const std::vector<ValueRange>& data_ranges) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("init_map: grid size must be positive");
    if (dim == 0) throw std::invalid_argument("init_map: dimension must be positive");
    if (data_ranges.size() != dim)
        throw std::invalid_argument("init_map: one (min,max) range per attribute required");
    for (const auto& [lo, hi] : data_ranges)
        if (!(lo <= hi)) throw std::invalid_argument("init_map: range min exceeds max");

    SomMap map;
    map.rows = rows;
    map.cols = cols;
    map.dim = dim;
    map.seed = seed;
    map.nodes.resize(rows * cols);

    Rng rng(derive_seed(seed, 0));
    for (Node& node : map.nodes) {
        node.prototype.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            node.prototype[k] = rng.uniform(data_ranges[k].first, data_ranges[k].second);
    }
    return map;
}

/// Winner search: coordinate of the prototype nearest to x in Euclidean
/// distance.  Ties go to the smallest row-major index.
inline LatticeCoord find_winner(const SomMap& map, const FeatureVector& x) {
    if (x.size() != map.dim)
        throw std::invalid_argument("find_winner: input has " + std::to_string(x.size()) +
                                    " attributes, map expects " + std::to_string(map.dim));
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < map.nodes.size(); ++i) {
        const double d2 = squared_distance(x, map.nodes[i].prototype);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return map.coord(best);
}

/// Gaussian smoothing kernel over lattice distance:
/// alpha(t) * exp(-|r_c - r_i|^2 / (2 sigma(t)^2)).
inline double neighborhood_weight(std::size_t t, LatticeCoord winner, LatticeCoord node,
                                  const TrainingSchedule& schedule) {
    const double dr = static_cast<double>(winner.row) - static_cast<double>(node.row);
    const double dc = static_cast<double>(winner.col) - static_cast<double>(node.col);
    const double d2 = dr * dr + dc * dc;
    const double sigma = schedule.sigma(t);
    return schedule.alpha(t) * std::exp(-d2 / (2.0 * sigma * sigma));
}

/// One online update: every prototype moves toward x by its kernel weight;
/// the winner's win_count is incremented.  Returns the winner coordinate.
inline LatticeCoord train_step(SomMap& map, const FeatureVector& x, std::size_t t) {
    const LatticeCoord winner = find_winner(map, x);
    for (std::size_t i = 0; i < map.nodes.size(); ++i) {
        const double h = neighborhood_weight(t, winner, map.coord(i), map.schedule);
        FeatureVector& proto = map.nodes[i].prototype;
        for (std::size_t k = 0; k < map.dim; ++k)
            proto[k] += h * (x[k] - proto[k]);
    }
    map.at(winner).win_count += 1;
    return winner;
}

/// Core training loop shared by plain and fused training.  Presentation
/// order is derived from the map seed and reshuffled once per epoch, so a
/// given (map, inputs, schedule) triple always replays identically.
/// on_step(t, input_index, winner) runs after each update.
template <typename OnStep>
void train_with(SomMap& map, const std::vector<FeatureVector>& inputs,
                const TrainingSchedule& schedule, OnStep&& on_step) {
    schedule.validate();
    if (inputs.empty()) throw std::invalid_argument("train: record set is empty");
    for (const FeatureVector& x : inputs)
        if (x.size() != map.dim)
            throw std::invalid_argument("train: input has " + std::to_string(x.size()) +
                                        " attributes, map expects " + std::to_string(map.dim));

    map.schedule = schedule;
    Rng order_rng(derive_seed(map.seed, 1));
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t t = 0; t < schedule.total_steps; ++t) {
        const std::size_t slot = t % inputs.size();
        if (slot == 0) order_rng.shuffle(order);
        const std::size_t idx = order[slot];
        const LatticeCoord winner = train_step(map, inputs[idx], t);
        on_step(t, idx, winner);
    }
}

/// Plain online training over the whole schedule.
inline SomMap train(SomMap map, const std::vector<FeatureVector>& records,
                    const TrainingSchedule& schedule) {
    train_with(map, records, schedule, [](std::size_t, std::size_t, LatticeCoord) {});
    return map;
}

/// One rows x cols grid per attribute, holding that prototype component.
inline std::vector<Grid> component_planes(const SomMap& map) {
    std::vector<Grid> planes(map.dim, Grid(map.rows, map.cols));
    for (std::size_t i = 0; i < map.nodes.size(); ++i) {
        const LatticeCoord p = map.coord(i);
        for (std::size_t k = 0; k < map.dim; ++k) planes[k].at(p) = map.nodes[i].prototype[k];
    }
    return planes;
}

/// Stock schedule: alpha 0.5 -> 0.01, sigma half the longer grid side -> 1,
/// linear decay, ten passes over the data.
inline TrainingSchedule default_schedule(std::size_t rows, std::size_t cols,
                                         std::size_t record_count) {
    TrainingSchedule s;
    s.total_steps = 10 * std::max<std::size_t>(record_count, 1);
    s.alpha_start = 0.5;
    s.alpha_end = 0.01;
    s.sigma_end = 1.0;
    s.sigma_start = std::max(static_cast<double>(std::max(rows, cols)) / 2.0, s.sigma_end);
    s.decay = Decay::linear;
    return s;
}

} // namespace storm
