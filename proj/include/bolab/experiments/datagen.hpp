#pragma once

// Initial data for the experiments.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bolab/spectral/norms.hpp"

namespace bolab {

enum class DataKind { single_mode, multi_mode, random_sobolev };

inline std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::single_mode:
      return "single_mode";
    case DataKind::multi_mode:
      return "multi_mode";
    case DataKind::random_sobolev:
      break;
  }
  return "random_sobolev";
}

inline DataKind parse_data_kind(const std::string& s) {
  if (s == "single_mode") return DataKind::single_mode;
  if (s == "multi_mode") return DataKind::multi_mode;
  if (s == "random_sobolev") return DataKind::random_sobolev;
  throw ValidationError("unknown data_gen.kind '" + s +
                        "' (expected single_mode, multi_mode, random_sobolev)");
}

struct DataGenSpec {
  DataKind kind = DataKind::random_sobolev;
  double s_target = 1.0;
  // Target H^{s_target} norm; <= 0 keeps the raw amplitude.
  double target_norm = 1.0;
  double amplitude = 1.0;
  double delta = 0.01;
  std::uint64_t seed = 0;
  int mode = 1;                  // single_mode
  std::vector<int> modes{1, 2};  // multi_mode

  void validate() const {
    if (!std::isfinite(s_target)) throw ValidationError("data_gen.s_target must be finite");
    if (!(delta >= 0.0)) throw ValidationError("data_gen.delta must be >= 0");
    if (!std::isfinite(target_norm) || !std::isfinite(amplitude))
      throw ValidationError("data_gen amplitude/target_norm must be finite");
    if (kind == DataKind::single_mode && mode < 1)
      throw ValidationError("data_gen.mode must be >= 1");
    if (kind == DataKind::multi_mode) {
      if (modes.empty()) throw ValidationError("data_gen.modes is empty");
      for (int m : modes)
        if (m < 1) throw ValidationError("data_gen.modes entries must be >= 1");
    }
  }
};

namespace detail {

inline void rescale_to(SpectralField& f, double s, double target) {
  if (!(target > 0.0)) return;
  const double n = sobolev_norm(f, s);
  if (n == 0.0) throw ValidationError("generated field is zero; cannot rescale");
  f *= target / n;
}

}  // namespace detail

/// u^(xi) = <xi>^{-s-1/2-delta} g_xi for 1 <= xi <= N/4, g_xi standard
/// complex Gaussian drawn in order of xi from mt19937_64(seed), Hermitian
/// extension, rescaled to target_norm in H^{s_target}.
inline SpectralField gen_random_sobolev(const DataGenSpec& spec,
                                        const GridSpec& grid) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField u(grid);
  const double p = -(spec.s_target + 0.5 + spec.delta);
  const int top = grid.n_modes() / 4;
  for (int xi = 1; xi <= top; ++xi) {
    const double re = normal(rng) / std::sqrt(2.0);
    const double im = normal(rng) / std::sqrt(2.0);
    const double w = std::pow(1.0 + double(xi) * xi, 0.5 * p);
    u.set(xi, spec.amplitude * w * cplx(re, im));
  }
  detail::rescale_to(u, spec.s_target, spec.target_norm);
  return u;
}

/// Dispatches on spec.kind. single_mode is amplitude cos(mode x);
/// multi_mode is sum over modes of amplitude <k>^{-s-1/2-delta} cos(kx).
inline SpectralField make_initial(const DataGenSpec& spec, const GridSpec& grid) {
  spec.validate();
  if (spec.kind == DataKind::random_sobolev) return gen_random_sobolev(spec, grid);
  SpectralField u(grid);
  auto put = [&](int k, double a) {
    if (k > grid.max_mode())
      throw ValidationError("mode " + std::to_string(k) + " not resolved at N=" +
                            std::to_string(grid.n_modes()));
    u.set(k, u[k] + cplx(kPi * a, 0.0));
  };
  if (spec.kind == DataKind::single_mode) {
    put(spec.mode, spec.amplitude);
  } else {
    const double p = -(spec.s_target + 0.5 + spec.delta);
    for (int k : spec.modes)
      put(k, spec.amplitude * std::pow(1.0 + double(k) * k, 0.5 * p));
  }
  if (spec.kind == DataKind::multi_mode)
    detail::rescale_to(u, spec.s_target, spec.target_norm);
  return u;
}

}  // namespace bolab
