#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace storm {

/// Position of a node on the map lattice. (0,0) is the top-left corner.
struct LatticeCoord {
    std::size_t row = 0;
    std::size_t col = 0;

    friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
};

/// Dense rows x cols grid stored in row-major order.
template <typename T>
struct GridT {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> cells;

    GridT() = default;
    GridT(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), cells(r * c, fill) {}

    std::size_t index(std::size_t r, std::size_t c) const { return r * cols + c; }

    T& at(std::size_t r, std::size_t c) { return cells[index(r, c)]; }
    const T& at(std::size_t r, std::size_t c) const { return cells[index(r, c)]; }

    T& at(LatticeCoord p) { return at(p.row, p.col); }
    const T& at(LatticeCoord p) const { return at(p.row, p.col); }

    bool same_shape(const GridT& other) const { return rows == other.rows && cols == other.cols; }

    friend bool operator==(const GridT&, const GridT&) = default;
};

using Grid = GridT<double>;
using BoolGrid = GridT<std::uint8_t>;   // 0/1 flags
using RegionGrid = GridT<std::int32_t>; // region id, -1 where none

} // namespace storm
