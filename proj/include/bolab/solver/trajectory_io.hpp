#pragma once

// Binary trajectory container. All numbers little-endian.
//
//   bytes 0..7   magic "BOLABTRJ"
//   u32          format version (1)
//   u32          header length L
//   L bytes      UTF-8 JSON header
//   per snapshot f64 t, then 2*(N-1) f64: re, im for xi = -N/2+1 .. N/2-1

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "bolab/solver/solve.hpp"
#include "json.hpp"

namespace bolab {

inline constexpr char kTrajectoryMagic[8] = {'B', 'O', 'L', 'A',
                                             'B', 'T', 'R', 'J'};
inline constexpr std::uint32_t kTrajectoryFormat = 1;

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "trajectory I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ValidationError("trajectory file truncated");
  return v;
}

}  // namespace detail

inline nlohmann::json solver_config_json(const SolverConfig& c) {
  return {{"dt", c.dt},
          {"t_end", c.t_end},
          {"integrator", to_string(c.integrator)},
          {"dealias", to_string(c.dealias)},
          {"record_every", c.record_every},
          {"conservation_tolerance", c.conservation_tolerance},
          {"conservation_policy", to_string(c.conservation_policy)},
          {"nonlinear", c.nonlinear}};
}

inline void write_trajectory(const std::string& path, const Trajectory& tr,
                             const std::string& version) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  const GridSpec& g = tr.grid;
  const nlohmann::json header = {
      {"format", kTrajectoryFormat},
      {"version", version},
      {"n_modes", g.n_modes()},
      {"dealias_fraction",
       {g.dealias_fraction().num, g.dealias_fraction().den}},
      {"xi_min", -g.max_mode()},
      {"xi_max", g.max_mode()},
      {"snapshots", tr.size()},
      {"solver", solver_config_json(tr.config)}};
  const std::string h = header.dump();
  os.write(kTrajectoryMagic, 8);
  detail::put<std::uint32_t>(os, kTrajectoryFormat);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(h.size()));
  os.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    detail::put<double>(os, tr.times[i]);
    for (int xi = -g.max_mode(); xi <= g.max_mode(); ++xi) {
      const cplx v = tr.states[i][xi];
      detail::put<double>(os, v.real());
      detail::put<double>(os, v.imag());
    }
  }
  if (!os) throw ValidationError("write failed: " + path);
}

/// Reads times and states back; the solver config is restored from the
/// header, diagnostics are recomputed.
inline Trajectory read_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kTrajectoryMagic, 8) != 0)
    throw ValidationError(path + " is not a trajectory file");
  const auto fmt = detail::get<std::uint32_t>(is);
  if (fmt != kTrajectoryFormat)
    throw ValidationError("unsupported trajectory format " +
                          std::to_string(fmt));
  const auto len = detail::get<std::uint32_t>(is);
  std::string h(len, '\0');
  is.read(h.data(), len);
  if (!is) throw ValidationError("trajectory header truncated");
  const auto header = nlohmann::json::parse(h);
  const Fraction frac{header["dealias_fraction"][0].get<int>(),
                      header["dealias_fraction"][1].get<int>()};
  Trajectory tr;
  tr.grid = GridSpec(header["n_modes"].get<int>(), frac);
  const auto& sc = header["solver"];
  tr.config.dt = sc["dt"].get<double>();
  tr.config.t_end = sc["t_end"].get<double>();
  tr.config.integrator = parse_integrator(sc["integrator"].get<std::string>());
  tr.config.dealias = parse_dealias(sc["dealias"].get<std::string>());
  tr.config.record_every = sc["record_every"].get<int>();
  tr.config.conservation_tolerance = sc["conservation_tolerance"].get<double>();
  tr.config.conservation_policy =
      parse_policy(sc["conservation_policy"].get<std::string>());
  tr.config.nonlinear = sc["nonlinear"].get<bool>();
  const auto count = header["snapshots"].get<std::size_t>();
  const int kmax = tr.grid.max_mode();
  for (std::size_t i = 0; i < count; ++i) {
    const double t = detail::get<double>(is);
    SpectralField u(tr.grid, Reality::complex_valued);
    for (int xi = -kmax; xi <= kmax; ++xi) {
      const double re = detail::get<double>(is);
      const double im = detail::get<double>(is);
      u.set(xi, cplx(re, im));
    }
    detail::record(tr, t, u.as_real(0.0));
  }
  return tr;
}

}  // namespace bolab
