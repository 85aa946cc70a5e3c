#pragma once

#include <vector>

namespace subreg {

/// Log-spaced sample points x_bar +/- radius * 10^{-j/points_per_decade},
/// j = 0..decades*points_per_decade. x_bar itself is never a sample.
struct GridSpec {
    double radius = 1.0;
    int points_per_decade = 100;
    int decades = 6;
    bool symmetric = true;

    std::size_t size() const;
    /// Positive side first (outermost to innermost), then the mirrored side.
    std::vector<double> points(double x_bar) const;
    /// Offsets radius * 10^{-j/ppd}, outermost first.
    std::vector<double> offsets() const;

    void validate() const;
};

}  // namespace subreg
