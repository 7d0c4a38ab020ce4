#include "powerwalk/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace powerwalk {

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  LogLogFit fit;
  if (x.size() < kMinSlopePoints) return fit;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_loglog: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.valid = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

Band band(const std::vector<double>& values) {
  Band b;
  if (values.empty()) return b;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  b.min = *lo;
  b.max = *hi;
  b.ratio = b.min > 0.0 ? b.max / b.min : INFINITY;
  return b;
}

ScalingReport make_scaling_report(std::string name, std::vector<double> n, std::vector<double> values) {
  ScalingReport r;
  r.name = std::move(name);
  r.fit = fit_loglog(n, values);
  r.stats = band(values);
  r.n = std::move(n);
  r.values = std::move(values);
  return r;
}

}  // namespace powerwalk
