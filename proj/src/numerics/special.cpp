#include <cmath>
#include <numbers>

#include "risssk/numerics.hpp"

namespace risssk::numerics {

double q_function(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace risssk::numerics
