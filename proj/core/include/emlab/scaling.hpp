#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace emlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Standard error of the slope; 0 for an exact two-point fit.
  double slope_stderr = 0.0;
  double rms_residual = 0.0;
  std::size_t count = 0;
};

/// Ordinary least squares y = slope * x + intercept. Throws
/// std::invalid_argument for fewer than two points or constant x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ScalePoint {
  double eps;
  double value;
};

/// Regression estimate of the order limsup log log phi(eps) / -log eps.
struct OrderEstimate {
  double slope;
  double intercept;
  double stderr;
  /// (-log eps, log log phi) for every usable scale.
  std::vector<std::pair<double, double>> points;
  /// log log phi / -log eps at every usable scale.
  std::vector<double> quotients;
  std::size_t usable_scale_count = 0;
  /// Any of: dropped_scales, too_few_scales, constant_values,
  /// eps_not_decreasing.
  std::vector<std::string> flags;

  bool ok() const { return flags.empty() || (flags.size() == 1 && flags[0] == "dropped_scales"); }
  bool has_flag(const std::string& f) const;
};

/// Values <= 1 are dropped and flagged. With fewer than three usable scales
/// slope, intercept and stderr are NaN and the estimate is flagged.
OrderEstimate order_of(std::span<const ScalePoint> samples);

/// Same estimator for samples that carry log phi(eps) instead of phi(eps);
/// usable when phi itself overflows a double. Log values <= 0 are dropped.
OrderEstimate order_of_log(std::span<const ScalePoint> log_samples);

/// Slope of log value against -log eps (a polynomial growth exponent).
LineFit power_law_fit(std::span<const ScalePoint> samples);

std::string join_flags(const std::vector<std::string>& flags);

}  // namespace emlab
