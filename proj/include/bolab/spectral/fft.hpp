#pragma once

// Thin wrapper over FFTW complex-to-complex transforms.
//
// Plans are created once per (length, direction) with FFTW_ESTIMATE and
// FFTW_UNALIGNED so they can be executed on any std::complex<double> buffer
// through the new-array interface, which FFTW documents as thread-safe.
// Only planning is serialized.

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bolab/error.hpp"

namespace bolab::fft {

using cplx = std::complex<double>;

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, static_cast<int>(dir));
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();
    std::vector<cplx> in(static_cast<std::size_t>(n)), out(in.size());
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), static_cast<int>(dir),
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw Error("FFTW failed to create a plan of length " +
                        std::to_string(n));
    auto [pos, _] = plans_.emplace(key, PlanPtr(p));
    return pos->second.get();
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPtr> plans_;
};

}  // namespace detail

/// Unnormalized DFT: out[k] = sum_n in[n] exp(-+ 2 pi i k n / N).
/// Forward uses the minus sign.
inline void transform(std::span<const cplx> in, std::span<cplx> out,
                      Direction dir) {
  if (in.size() != out.size())
    throw DimensionError("fft: input and output lengths differ");
  if (in.empty()) return;
  if (in.data() == out.data())
    throw PreconditionError("fft: in-place transforms are not supported");
  const int n = static_cast<int>(in.size());
  fftw_plan plan = detail::PlanCache::instance().get(n, dir);
  // FFTW does not modify the input of an out-of-place c2c transform.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

inline std::vector<cplx> transform(std::span<const cplx> in, Direction dir) {
  std::vector<cplx> out(in.size());
  transform(in, out, dir);
  return out;
}

}  // namespace bolab::fft
