#include "shiftop/griddata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace shiftop {

Grid::Grid(double x_min_, double x_max_, int points_)
    : x_min(x_min_), x_max(x_max_), points(points_) {
    if (!(x_min < x_max))
        throw std::invalid_argument("Grid: x_min must be less than x_max");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("Grid: window must be finite");
    if (points < 2)
        throw std::invalid_argument("Grid: needs at least 2 points");
}

GridFunction::GridFunction(const Grid& grid, std::vector<double> values, Extension extension)
    : grid_(grid), values_(std::move(values)), ext_(extension) {
    if (static_cast<int>(values_.size()) != grid_.points)
        throw std::invalid_argument("GridFunction: value count does not match grid points");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("GridFunction: values must be finite");
}

double GridFunction::max_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double GridFunction::neighbor(int j) const noexcept {
    const int n = grid_.points;
    if (j >= 0 && j < n) return values_[static_cast<std::size_t>(j)];
    switch (ext_) {
        case Extension::ConstantHold:
            return j < 0 ? values_.front() : values_.back();
        case Extension::Zero:
            return 0.0;
        case Extension::Periodic: {
            // node n-1 coincides with node 0, so the period is n-1 nodes
            int m = (j % (n - 1) + (n - 1)) % (n - 1);
            return values_[static_cast<std::size_t>(m)];
        }
    }
    return 0.0;
}

double GridFunction::interpolate(double x, InterpScheme scheme) const {
    if (!std::isfinite(x))
        throw std::invalid_argument("interpolate: x must be finite");
    const int n = grid_.points;
    const double lo = grid_.x_min;
    const double hi = grid_.x_max;
    switch (ext_) {
        case Extension::ConstantHold:
            if (x <= lo) return values_.front();
            if (x >= hi) return values_.back();
            break;
        case Extension::Zero:
            if (x < lo || x > hi) return 0.0;
            break;
        case Extension::Periodic:
            if (x < lo || x > hi) {
                const double len = grid_.length();
                double y = std::fmod(x - lo, len);
                if (y < 0.0) y += len;
                x = lo + y;
                if (x > hi) x = hi;
            }
            break;
    }

    const double dx = grid_.dx();
    const double u = (x - lo) / dx;

    int nearest = static_cast<int>(std::lround(u));
    nearest = std::clamp(nearest, 0, n - 1);
    if (x == grid_.node(nearest))
        return values_[static_cast<std::size_t>(nearest)];

    int cell = static_cast<int>(std::floor(u));
    cell = std::clamp(cell, 0, n - 2);
    const double theta = (x - grid_.node(cell)) / dx;

    if (scheme == InterpScheme::Linear) {
        return (1.0 - theta) * values_[static_cast<std::size_t>(cell)] +
               theta * values_[static_cast<std::size_t>(cell + 1)];
    }

    const double vm = neighbor(cell - 1);
    const double v0 = values_[static_cast<std::size_t>(cell)];
    const double v1 = values_[static_cast<std::size_t>(cell + 1)];
    const double v2 = neighbor(cell + 2);
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return vm * (-0.5 * theta + t2 - 0.5 * t3) + v0 * (1.0 - 2.5 * t2 + 1.5 * t3) +
           v1 * (0.5 * theta + 2.0 * t2 - 1.5 * t3) + v2 * (-0.5 * t2 + 0.5 * t3);
}

void write_csv(const GridFunction& f, std::ostream& os) {
    os << "x,u\n";
    char buf[96];
    for (int i = 0; i < f.grid().points; ++i) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid().node(i),
                                      f.values()[static_cast<std::size_t>(i)]);
        os.write(buf, len);
    }
}

namespace {
double parse_csv_number(const std::string& field, int line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::runtime_error("csv: malformed number on line " + std::to_string(line_no));
    return v;
}
} // namespace

GridFunction read_csv(std::istream& is, Extension extension) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,u")
        throw std::runtime_error("csv: expected header 'x,u'");

    std::vector<double> xs, us;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("csv: missing comma on line " + std::to_string(line_no));
        xs.push_back(parse_csv_number(line.substr(0, comma), line_no));
        us.push_back(parse_csv_number(line.substr(comma + 1), line_no));
    }
    if (xs.size() < 2)
        throw std::runtime_error("csv: needs at least 2 rows");
    return GridFunction(Grid(xs.front(), xs.back(), static_cast<int>(xs.size())), std::move(us),
                        extension);
}

} // namespace shiftop
