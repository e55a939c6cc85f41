#include "ermakov/ode.hpp"

namespace ermakov::ode {

std::vector<double> output_grid(double t0, double t_end, double stride) {
    std::vector<double> grid{t0};
    if (t_end == t0) return grid;
    const double dir = t_end > t0 ? 1.0 : -1.0;
    const double span = std::abs(t_end - t0);
    const auto n = static_cast<std::size_t>(std::floor(span / stride + 1e-9));
    for (std::size_t k = 1; k <= n; ++k) grid.push_back(t0 + dir * static_cast<double>(k) * stride);
    if (std::abs(grid.back() - t_end) <= 1e-9 * stride && grid.size() > 1)
        grid.back() = t_end;
    else
        grid.push_back(t_end);
    return grid;
}

std::size_t substeps(double stride, double dt) {
    const double ratio = stride / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * dt - stride) > 1e-9 * stride)
        throw ConfigError("step " + std::to_string(dt) + " does not evenly divide the output stride " +
                          std::to_string(stride));
    return static_cast<std::size_t>(n);
}

} // namespace ermakov::ode
