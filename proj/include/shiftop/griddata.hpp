#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace shiftop {

/// Uniform 1D lattice truncating the line to [x_min, x_max].
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int points = 2; // node count, >= 2

    Grid(double x_min, double x_max, int points);

    double dx() const noexcept { return (x_max - x_min) / (points - 1); }
    double node(int i) const noexcept { return x_min + i * dx(); }
    double length() const noexcept { return x_max - x_min; }

    bool operator==(const Grid&) const = default;
};

/// Out-of-window behavior of a grid function.
enum class Extension : std::uint8_t {
    ConstantHold, // clamp to the nearest endpoint value
    Periodic,     // wrap by the window length
    Zero          // 0 beyond the window
};

enum class InterpScheme : std::uint8_t { Linear, Cubic };

/// Samples of a function on a Grid plus an extension policy. Values are
/// checked finite on construction and immutable afterwards; all reads are
/// pure and safe to share across threads.
class GridFunction {
public:
    GridFunction(const Grid& grid, std::vector<double> values, Extension extension);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    Extension extension() const noexcept { return ext_; }

    /// Pointwise read anywhere on the line. Out-of-window x is resolved by
    /// the extension policy first; an exact node hit returns the stored
    /// value bit for bit. Linear is a convex combination of the bracketing
    /// nodes; cubic is the 4-point Catmull-Rom stencil of the bracketing
    /// cell, with stencil neighbors past the window resolved by the same
    /// extension policy.
    double interpolate(double x, InterpScheme scheme) const;

    /// max_i |values[i]|
    double max_norm() const noexcept;

private:
    double neighbor(int j) const noexcept; // stencil fetch with ghost handling

    Grid grid_;
    std::vector<double> values_;
    Extension ext_;
};

/// Sample any callable at the grid nodes. Evaluation failures propagate.
template <class F>
GridFunction sample(const F& f, const Grid& grid, Extension extension) {
    std::vector<double> v(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i)
        v[static_cast<std::size_t>(i)] = f(grid.node(i));
    return GridFunction(grid, std::move(v), extension);
}

/// CSV serialization, header "x,u", one row per node, 17 significant
/// digits (values round-trip bit-exactly).
void write_csv(const GridFunction& f, std::ostream& os);
GridFunction read_csv(std::istream& is, Extension extension);

} // namespace shiftop
