#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace powerwalk {

/// Minimum number of sizes before a slope is fitted.
inline constexpr std::size_t kMinSlopePoints = 4;

struct LogLogFit {
  bool valid = false;  // false with fewer than kMinSlopePoints points
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square residual in log space
};

/// Ordinary least squares of ln y on ln x. Requires positive data.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct Band {
  double min = 0.0;
  double max = 0.0;
  double ratio = 0.0;  // max / min
};

Band band(const std::vector<double>& values);

/// One scaling claim evaluated over a sweep.
struct ScalingReport {
  std::string name;       // normalized quantity, e.g. "Q_O/sqrt(N)"
  std::vector<double> n;  // vertex counts
  std::vector<double> values;
  LogLogFit fit;
  Band stats;
};

ScalingReport make_scaling_report(std::string name, std::vector<double> n, std::vector<double> values);

}  // namespace powerwalk
