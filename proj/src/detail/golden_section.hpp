#pragma once

#include <cmath>

namespace thermoq::detail {

struct ScalarMaximum {
  double x;
  double value;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi]; stops
// once the bracket is narrower than tolerance. The returned point is the best
// one evaluated, endpoints included.
template <class F>
ScalarMaximum golden_section_maximize(const F& f, double lo, double hi,
                                      double tolerance, int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMaximum best{lo, f(lo)};
  const double f_hi = f(hi);
  if (f_hi > best.value) best = {hi, f_hi};

  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

}  // namespace thermoq::detail
