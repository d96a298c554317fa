#include "emlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace emlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: x values are constant");
  LineFit fit;
  fit.count = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ssr += r * r;
  }
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(n));
  fit.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

bool OrderEstimate::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

OrderEstimate order_from_loglog(std::span<const ScalePoint> samples, bool values_are_logs) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  OrderEstimate est{nan, nan, nan, {}, {}, 0, {}};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].eps < samples[i - 1].eps)) {
      est.flags.push_back("eps_not_decreasing");
      break;
    }
  }
  bool dropped = false;
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    const double log_value = values_are_logs ? s.value : std::log(s.value);
    if (!(s.eps > 0.0) || !(log_value > 0.0) || !std::isfinite(log_value)) {
      dropped = true;
      continue;
    }
    const double x = -std::log(s.eps);
    const double y = std::log(log_value);
    xs.push_back(x);
    ys.push_back(y);
    est.points.emplace_back(x, y);
    est.quotients.push_back(x != 0.0 ? y / x : nan);
  }
  if (dropped) est.flags.insert(est.flags.begin(), "dropped_scales");
  est.usable_scale_count = xs.size();
  if (xs.size() < 3) {
    est.flags.push_back("too_few_scales");
    return est;
  }
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*hi - *lo == 0.0) {
    est.flags.push_back("constant_values");
  }
  try {
    const LineFit fit = fit_line(xs, ys);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.stderr = fit.slope_stderr;
  } catch (const std::invalid_argument&) {
    est.flags.push_back("too_few_scales");
  }
  return est;
}

}  // namespace

OrderEstimate order_of(std::span<const ScalePoint> samples) { return order_from_loglog(samples, false); }

OrderEstimate order_of_log(std::span<const ScalePoint> log_samples) { return order_from_loglog(log_samples, true); }

LineFit power_law_fit(std::span<const ScalePoint> samples) {
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (s.eps > 0.0 && s.value > 0.0) {
      xs.push_back(-std::log(s.eps));
      ys.push_back(std::log(s.value));
    }
  }
  return fit_line(xs, ys);
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

}  // namespace emlab
