#pragma once

// Partial sums of k^alpha and the dyadic frequency split.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bolab/spectral/norms.hpp"

namespace bolab {

struct PartialSum {
  double sum = 0.0;
  double asymptote = 0.0;
  double error = 0.0;      // sum - asymptote
  double scale = 1.0;      // N^{max(0, alpha)}
  double constant = 0.0;   // |error| / scale
};

/// sum_{k=1}^n k^alpha against n^{alpha+1}/(alpha+1). The sum is accumulated
/// in long double from the smallest terms up for alpha >= 0 and from k = n down
/// for alpha < 0.
inline PartialSum partial_sum_check(double alpha, std::int64_t n) {
  if (!(alpha > -1.0)) throw ValidationError("partial_sum_check requires alpha > -1");
  if (n < 1) throw ValidationError("partial_sum_check requires n >= 1");
  long double acc = 0.0L, comp = 0.0L;
  auto add = [&](long double v) {
    const long double y = v - comp;
    const long double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  };
  const long double a = alpha;
  if (alpha < 0.0)
    for (std::int64_t k = n; k >= 1; --k) add(std::pow(static_cast<long double>(k), a));
  else
    for (std::int64_t k = 1; k <= n; ++k) add(std::pow(static_cast<long double>(k), a));
  PartialSum r;
  const long double asym =
      std::pow(static_cast<long double>(n), a + 1.0L) / (a + 1.0L);
  r.sum = static_cast<double>(acc);
  r.asymptote = static_cast<double>(asym);
  r.error = static_cast<double>(acc - asym);
  r.scale = std::pow(static_cast<double>(n), std::max(0.0, alpha));
  r.constant = std::abs(r.error) / r.scale;
  return r;
}

struct DyadicSplit {
  double low = 0.0;    // ||Q_{<=M} f||_{H^s}
  double high = 0.0;   // ||Q_{>M} f||_{H^s}
  double bound = 0.0;  // <M>^{s-1/2} ||f||_{H^{1/2}}
};

/// H^s norms of |xi| <= M and |xi| > M. For s >= 1/2 the low part obeys
/// low <= <M>^{s-1/2} ||f||_{H^{1/2}}; this is checked here.
inline DyadicSplit dyadic_split_norm(const SpectralField& f, double s, int m) {
  if (m < 1) throw ValidationError("dyadic_split_norm requires M >= 1");
  DyadicSplit d;
  d.low = sobolev_norm(frequency_cut(f, m, true), s);
  d.high = sobolev_norm(frequency_cut(f, m, false), s);
  d.bound = std::pow(1.0 + double(m) * m, 0.5 * (s - 0.5)) * sobolev_norm(f, 0.5);
  if (s >= 0.5 && d.low > d.bound * (1.0 + 1e-12) + 1e-300)
    throw NumericalError("low-frequency multiplier bound violated: " +
                         fmt_g(d.low) + " > " + fmt_g(d.bound));
  return d;
}

}  // namespace bolab
