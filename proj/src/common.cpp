#include "wickbridge/common.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "wickbridge/error.hpp"

namespace wickbridge {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidParameter("linspace: need at least two points");
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

std::vector<double> cum_trapezoid(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * dx * (f[i - 1] + f[i]);
  return out;
}

unsigned max_threads() {
  if (const char* env = std::getenv("WICKBRIDGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

std::string format_double(double v, int precision) {
  if (precision < 1) precision = 1;
  if (precision > 17) precision = 17;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

}  // namespace wickbridge
