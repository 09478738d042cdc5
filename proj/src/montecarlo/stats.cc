#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "tcsim/montecarlo.h"

namespace tcsim {

Interval wilson_interval(uint64_t failures, uint64_t trials, double confidence) {
    if (trials == 0) throw std::invalid_argument("wilson interval needs at least one trial");
    if (failures > trials) throw std::invalid_argument("more failures than trials");
    if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must lie in (0,1)");
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    // The bounds are exactly 0 and 1 at the extremes; avoid rounding residue.
    return {failures == 0 ? 0.0 : std::max(0.0, centre - half), failures == trials ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace tcsim
