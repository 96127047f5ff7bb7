#include "finmem/series.hpp"

#include <cmath>
#include <stdexcept>

namespace finmem {

std::size_t grid_intervals(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step dt must be > 0");
    if (!(t_max >= dt) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be >= dt");
    return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
}

}  // namespace finmem
