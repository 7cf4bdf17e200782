#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace twqkd {

/// Streaming mean/variance accumulator (Welford), mergeable across workers
/// with the Chan parallel update so chunked and serial accumulation agree.
class SampleStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const SampleStats& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count_);
        const double nb = static_cast<double>(other.count_);
        const double delta = other.mean_ - mean_;
        mean_ += delta * nb / (na + nb);
        m2_ += other.m2_ + delta * delta * na * nb / (na + nb);
        count_ += other.count_;
    }

    std::uint64_t count() const { return count_; }
    double mean() const;
    /// Unbiased sample variance; requires count() >= 2.
    double sample_variance() const;
    double sum_squared_deviations() const { return m2_; }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Mean squared-error statistics for (truth, estimate) pairs: the sample
/// variance of estimate - truth. Requires at least two pairs.
double empirical_error_variance(std::span<const std::pair<double, double>> pairs);

/// Plug-in Gaussian-channel mutual information in bits for (truth, estimate)
/// pairs whose truth was drawn with variance signal_var: the empirical error
/// variance fed into mi_per_quadrature. A zero empirical error variance maps
/// to +infinity (perfect estimation), never an exception.
double empirical_mi(std::span<const std::pair<double, double>> pairs, double signal_var);

/// Ordinary least squares y = intercept + slope * x with the textbook
/// standard error of the slope. Requires n >= 3 and non-degenerate x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_variance = 0.0;
    std::uint64_t n = 0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace twqkd
