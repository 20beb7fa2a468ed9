#include "nlsdbar/fit.hpp"

#include <cmath>

#include "nlsdbar/types.hpp"

namespace nlsdbar::evolution {

DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4) throw InputError("evolution", "decay_fit", "need at least 4 points");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [t, e] = samples[i];
        if (!(t > 0.0) || !std::isfinite(t)) throw InputError("evolution", "decay_fit", "t must be positive");
        if (!(e > 0.0) || !std::isfinite(e)) throw InputError("evolution", "decay_fit", "errors must be positive");
        if (i > 0 && !(t > samples[i - 1].first))
            throw InputError("evolution", "decay_fit", "t must be strictly increasing");
    }
    const double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0;
    for (const auto& [t, e] : samples) {
        sx += std::log(t);
        sy += std::log(e);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [t, e] : samples) {
        const double dx = std::log(t) - mx, dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

}  // namespace nlsdbar::evolution
