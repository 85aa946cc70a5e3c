#include "subreg/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace subreg {

void GridSpec::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("grid radius must be positive");
    if (points_per_decade < 1) throw std::invalid_argument("grid points_per_decade must be positive");
    if (decades < 1) throw std::invalid_argument("grid decades must be positive");
}

std::size_t GridSpec::size() const {
    const std::size_t one_side = static_cast<std::size_t>(decades) * points_per_decade + 1;
    return symmetric ? 2 * one_side : one_side;
}

std::vector<double> GridSpec::offsets() const {
    validate();
    const int n = decades * points_per_decade;
    std::vector<double> out;
    out.reserve(n + 1);
    for (int j = 0; j <= n; ++j) {
        // Exact decades stay exact: radius * 10^{-d}, not radius * pow(10, -j/ppd).
        if (j % points_per_decade == 0)
            out.push_back(radius / std::pow(10.0, j / points_per_decade));
        else
            out.push_back(radius * std::pow(10.0, -static_cast<double>(j) / points_per_decade));
    }
    return out;
}

std::vector<double> GridSpec::points(double x_bar) const {
    const auto offs = offsets();
    std::vector<double> out;
    out.reserve(size());
    for (double h : offs) {
        const double x = x_bar + h;
        if (x != x_bar) out.push_back(x);
    }
    if (symmetric) {
        for (double h : offs) {
            const double x = x_bar - h;
            if (x != x_bar) out.push_back(x);
        }
    }
    return out;
}

}  // namespace subreg
