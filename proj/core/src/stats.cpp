#include "twqkd/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twqkd/errors.hpp"
#include "twqkd/gaussian.hpp"

namespace twqkd {

double SampleStats::mean() const {
    if (count_ == 0) throw InsufficientDataError("mean of an empty sample");
    return mean_;
}

double SampleStats::sample_variance() const {
    if (count_ < 2) throw InsufficientDataError("sample variance needs at least two values");
    return m2_ / static_cast<double>(count_ - 1);
}

double empirical_error_variance(std::span<const std::pair<double, double>> pairs) {
    SampleStats stats;
    for (const auto& [truth, estimate] : pairs) stats.add(estimate - truth);
    return stats.sample_variance();  // throws InsufficientDataError below two pairs
}

double empirical_mi(std::span<const std::pair<double, double>> pairs, double signal_var) {
    if (!std::isfinite(signal_var) || signal_var <= 0.0) {
        throw std::invalid_argument("signal_var must be finite and > 0");
    }
    const double error_var = empirical_error_variance(pairs);
    if (error_var == 0.0) return std::numeric_limits<double>::infinity();  // perfect estimation
    return mi_per_quadrature(signal_var, error_var);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
    const std::uint64_t n = x.size();
    if (n < 3) throw InsufficientDataError("linear_fit needs at least three points");

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += r * r;
    }
    fit.residual_variance = rss / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(fit.residual_variance / sxx);
    return fit;
}

}  // namespace twqkd
