#pragma once

#include <utility>
#include <vector>

namespace nlsdbar::evolution {

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least-squares line through (ln t, ln err). Needs at least four points with
// strictly increasing t and positive errors.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples);

}  // namespace nlsdbar::evolution
