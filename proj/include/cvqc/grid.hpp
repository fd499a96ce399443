#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cvqc {

/// Uniform squeezing grid r_min, r_min + step, ... up to r_max inclusive.
struct Grid {
    double r_min = 0.0;
    double r_max = 3.0;
    double step = 0.01;

    void validate() const {
        if (!std::isfinite(r_min) || !std::isfinite(r_max) || !std::isfinite(step))
            throw std::invalid_argument("grid bounds must be finite");
        if (r_min < 0.0) throw std::invalid_argument("grid: r_min must be >= 0");
        if (!(r_max > r_min)) throw std::invalid_argument("grid: r_max must exceed r_min");
        if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
    }

    std::size_t size() const {
        validate();
        return static_cast<std::size_t>(std::floor((r_max - r_min) / step + 1e-9)) + 1;
    }

    /// i-th point, rounded to 12 decimals so that printed values stay clean.
    double at(std::size_t i) const {
        const double r = r_min + static_cast<double>(i) * step;
        return std::round(r * 1e12) / 1e12;
    }

    std::vector<double> points() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
        return out;
    }
};

}  // namespace cvqc
