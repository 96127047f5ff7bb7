// series.hpp: uniformly sampled coherence trajectories

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace finmem {

// C(t_k) at t_k = k * dt, normalized so that values[0] == 1.
struct CoherenceSeries {
    double dt{0.0};
    std::vector<std::complex<double>> values;
    std::string label;

    std::size_t size() const noexcept { return values.size(); }
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
    double t_max() const noexcept { return values.empty() ? 0.0 : time(values.size() - 1); }
    double magnitude(std::size_t k) const { return std::abs(values.at(k)); }
};

// Number of grid intervals covering [0, t_max] with step dt (t_max is rounded
// down to a multiple of dt, with a small tolerance for representation error).
// Throws std::invalid_argument unless dt > 0 and t_max >= dt.
std::size_t grid_intervals(double t_max, double dt);

// Samples f(t) on the grid of grid_intervals(t_max, dt).
template <class F>
CoherenceSeries sample_series(double t_max, double dt, std::string label, F&& f) {
    const std::size_t n = grid_intervals(t_max, dt);
    CoherenceSeries s{dt, {}, std::move(label)};
    s.values.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) s.values.emplace_back(f(static_cast<double>(k) * dt));
    return s;
}

}  // namespace finmem
