#pragma once

// Experiment configuration: JSON schema, dotted-path overrides, validation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bolab/experiments/datagen.hpp"
#include "bolab/solver/config.hpp"
#include "json.hpp"

namespace bolab {

enum class ExperimentKind { smoothing, growth, conservation, gauge_residual, bilinear };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::smoothing:
      return "smoothing";
    case ExperimentKind::growth:
      return "growth";
    case ExperimentKind::conservation:
      return "conservation";
    case ExperimentKind::gauge_residual:
      return "gauge_residual";
    case ExperimentKind::bilinear:
      break;
  }
  return "bilinear";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "smoothing") return ExperimentKind::smoothing;
  if (s == "growth") return ExperimentKind::growth;
  if (s == "conservation") return ExperimentKind::conservation;
  if (s == "gauge_residual") return ExperimentKind::gauge_residual;
  if (s == "bilinear") return ExperimentKind::bilinear;
  throw ValidationError("unknown kind '" + s +
                        "' (expected smoothing, growth, conservation, "
                        "gauge_residual, bilinear)");
}

enum class DtRule { fixed, inverse_square };

struct BilinearOptions {
  std::vector<std::pair<int, int>> pairs{{3, 3}, {4, 2}};
  std::vector<int> k_grid{4, 5, 6, 7, 8, 9};
  double delta = 0.01;
  int m_points = 256;
  double window_t = kPi / 2.0;
  double lambda_max = 32.0;
  int q_max = 4;
  bool adversarial = true;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::conservation;
  double s = 1.0;
  std::vector<double> a_grid;
  std::vector<int> n_grid{256};
  std::uint64_t seed = 0;
  int ensemble = 1;
  // <= 0: smoothing uses min(||u0||_{L2}^{-4}, 1); other kinds use 1.
  double t_end = 0.0;
  double snapshot_interval = 0.05;
  // Fraction of t_end where the growth fit window starts.
  double fit_from = 0.1;
  std::vector<double> norms{0.0, 0.5, 1.0};
  SolverConfig solver;
  DtRule dt_rule = DtRule::fixed;
  int dt_reference_n = 256;
  DataGenSpec data_gen;
  bool data_seed_set = false;
  BilinearOptions bilinear;

  /// Seed of ensemble member i.
  std::uint64_t member_seed(int i) const {
    return (data_seed_set ? data_gen.seed : seed) + static_cast<std::uint64_t>(i);
  }

  /// Time step for resolution n.
  double dt_for(int n) const {
    if (dt_rule == DtRule::fixed || n <= dt_reference_n) return solver.dt;
    const double r = double(dt_reference_n) / n;
    return solver.dt * r * r;
  }

  void validate() const;
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      std::string list;
      for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
      throw ValidationError("unknown key '" + (where.empty() ? key : where + "." + key) +
                            "' (allowed: " + list + ")");
    }
  }
}

template <class T>
void read(const nlohmann::json& j, const char* key, const std::string& where,
          T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("config key '" + where + key + "' has the wrong type");
  }
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
  solver.validate();
  data_gen.validate();
  if (n_grid.empty()) throw ValidationError("n_grid is empty");
  for (int n : n_grid) static_cast<void>(GridSpec{n});
  if (ensemble < 1) throw ValidationError("ensemble must be >= 1");
  if (!(snapshot_interval > 0.0)) throw ValidationError("snapshot_interval must be > 0");
  if (!(fit_from > 0.0 && fit_from < 1.0)) throw ValidationError("fit_from must lie in (0, 1)");
  if (dt_reference_n < 8) throw ValidationError("solver.dt_reference_n must be >= 8");
  if (kind == ExperimentKind::smoothing) {
    if (!(s > 1.0 / 6.0 && s <= 1.0))
      throw ValidationError("smoothing requires s in (1/6, 1], got s=" + fmt_g(s));
    if (a_grid.empty()) throw ValidationError("smoothing requires a non-empty a_grid");
    const double amax = std::min(s - 1.0 / 6.0, 1.0 / 3.0);
    for (double a : a_grid)
      if (!(a > 0.0 && a < amax))
        throw ValidationError("a=" + fmt_g(a) + " is outside the admissible range 0 < a < min{s - 1/6, 1/3} = " +
                              fmt_g(amax) + " for s=" + fmt_g(s));
  }
  if (kind == ExperimentKind::growth && !(s > 0.5 && s <= 1.0))
    throw ValidationError("growth requires s in (1/2, 1], got s=" + fmt_g(s));
  if (kind == ExperimentKind::bilinear) {
    const auto& b = bilinear;
    if (b.pairs.empty() || b.k_grid.empty())
      throw ValidationError("bilinear.pairs and bilinear.k_grid must be non-empty");
    for (auto [m, j] : b.pairs)
      if (m < 1 || j < 1 || m > 12 || j > 12)
        throw ValidationError("bilinear (m, j) entries must lie in [1, 12]");
    for (int k : b.k_grid)
      if (k < 1 || k > 14) throw ValidationError("bilinear k must lie in [1, 14]");
    if (!(b.delta > 0.0)) throw ValidationError("bilinear.delta must be > 0");
    if (b.m_points < 8 || b.m_points % 2)
      throw ValidationError("bilinear.m_points must be even and >= 8");
    if (!(b.window_t > 0.0)) throw ValidationError("bilinear.window_t must be > 0");
    if (!(b.lambda_max > 0.0)) throw ValidationError("bilinear.lambda_max must be > 0");
    if (b.q_max < 0) throw ValidationError("bilinear.q_max must be >= 0");
  }
}

/// Builds a config from JSON. Unknown keys at any level are an error.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  using detail::read;
  detail::check_keys(j, "",
                     {"kind", "s", "a_grid", "n_grid", "seed", "ensemble", "t_end",
                      "snapshot_interval", "fit_from", "norms", "solver", "data_gen",
                      "bilinear"});
  ExperimentConfig c;
  std::string kind = to_string(c.kind);
  read(j, "kind", "", kind);
  c.kind = parse_experiment_kind(kind);
  read(j, "s", "", c.s);
  read(j, "a_grid", "", c.a_grid);
  read(j, "n_grid", "", c.n_grid);
  read(j, "seed", "", c.seed);
  read(j, "ensemble", "", c.ensemble);
  read(j, "t_end", "", c.t_end);
  read(j, "snapshot_interval", "", c.snapshot_interval);
  read(j, "fit_from", "", c.fit_from);
  read(j, "norms", "", c.norms);

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    detail::check_keys(s, "solver",
                       {"dt", "integrator", "dealias", "conservation_tolerance",
                        "conservation_policy", "nonlinear", "dt_rule", "dt_reference_n"});
    read(s, "dt", "solver.", c.solver.dt);
    std::string v;
    if (s.contains("integrator")) {
      read(s, "integrator", "solver.", v);
      c.solver.integrator = parse_integrator(v);
    }
    if (s.contains("dealias")) {
      read(s, "dealias", "solver.", v);
      c.solver.dealias = parse_dealias(v);
    }
    read(s, "conservation_tolerance", "solver.", c.solver.conservation_tolerance);
    if (s.contains("conservation_policy")) {
      read(s, "conservation_policy", "solver.", v);
      c.solver.conservation_policy = parse_policy(v);
    }
    read(s, "nonlinear", "solver.", c.solver.nonlinear);
    if (s.contains("dt_rule")) {
      read(s, "dt_rule", "solver.", v);
      if (v == "fixed")
        c.dt_rule = DtRule::fixed;
      else if (v == "inverse_square")
        c.dt_rule = DtRule::inverse_square;
      else
        throw ValidationError("unknown solver.dt_rule '" + v +
                              "' (expected fixed or inverse_square)");
    }
    read(s, "dt_reference_n", "solver.", c.dt_reference_n);
  }

  c.data_gen.s_target = c.s;
  if (j.contains("data_gen")) {
    const auto& d = j["data_gen"];
    detail::check_keys(d, "data_gen",
                       {"kind", "s_target", "target_norm", "amplitude", "delta",
                        "seed", "mode", "modes"});
    std::string v;
    if (d.contains("kind")) {
      read(d, "kind", "data_gen.", v);
      c.data_gen.kind = parse_data_kind(v);
    }
    read(d, "s_target", "data_gen.", c.data_gen.s_target);
    read(d, "target_norm", "data_gen.", c.data_gen.target_norm);
    read(d, "amplitude", "data_gen.", c.data_gen.amplitude);
    read(d, "delta", "data_gen.", c.data_gen.delta);
    if (d.contains("seed")) {
      read(d, "seed", "data_gen.", c.data_gen.seed);
      c.data_seed_set = true;
    }
    read(d, "mode", "data_gen.", c.data_gen.mode);
    read(d, "modes", "data_gen.", c.data_gen.modes);
  }

  if (j.contains("bilinear")) {
    const auto& b = j["bilinear"];
    detail::check_keys(b, "bilinear",
                       {"pairs", "k_grid", "delta", "m_points", "window_t",
                        "lambda_max", "q_max", "adversarial"});
    read(b, "pairs", "bilinear.", c.bilinear.pairs);
    read(b, "k_grid", "bilinear.", c.bilinear.k_grid);
    read(b, "delta", "bilinear.", c.bilinear.delta);
    read(b, "m_points", "bilinear.", c.bilinear.m_points);
    read(b, "window_t", "bilinear.", c.bilinear.window_t);
    read(b, "lambda_max", "bilinear.", c.bilinear.lambda_max);
    read(b, "q_max", "bilinear.", c.bilinear.q_max);
    read(b, "adversarial", "bilinear.", c.bilinear.adversarial);
  }
  c.validate();
  return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.kind);
  j["s"] = c.s;
  j["a_grid"] = c.a_grid;
  j["n_grid"] = c.n_grid;
  j["seed"] = c.seed;
  j["ensemble"] = c.ensemble;
  j["t_end"] = c.t_end;
  j["snapshot_interval"] = c.snapshot_interval;
  j["fit_from"] = c.fit_from;
  j["norms"] = c.norms;
  j["solver"] = {{"dt", c.solver.dt},
                 {"integrator", to_string(c.solver.integrator)},
                 {"dealias", to_string(c.solver.dealias)},
                 {"conservation_tolerance", c.solver.conservation_tolerance},
                 {"conservation_policy", to_string(c.solver.conservation_policy)},
                 {"nonlinear", c.solver.nonlinear},
                 {"dt_rule", c.dt_rule == DtRule::fixed ? "fixed" : "inverse_square"},
                 {"dt_reference_n", c.dt_reference_n}};
  j["data_gen"] = {{"kind", to_string(c.data_gen.kind)},
                   {"s_target", c.data_gen.s_target},
                   {"target_norm", c.data_gen.target_norm},
                   {"amplitude", c.data_gen.amplitude},
                   {"delta", c.data_gen.delta},
                   {"mode", c.data_gen.mode},
                   {"modes", c.data_gen.modes}};
  if (c.data_seed_set) j["data_gen"]["seed"] = c.data_gen.seed;
  j["bilinear"] = {{"pairs", c.bilinear.pairs},
                   {"k_grid", c.bilinear.k_grid},
                   {"delta", c.bilinear.delta},
                   {"m_points", c.bilinear.m_points},
                   {"window_t", c.bilinear.window_t},
                   {"lambda_max", c.bilinear.lambda_max},
                   {"q_max", c.bilinear.q_max},
                   {"adversarial", c.bilinear.adversarial}};
  return j;
}

/// Applies "a.b.c=value" to j. The value is parsed as JSON when possible and
/// taken as a string otherwise.
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  nlohmann::json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ValidationError("override path '" + path + "' has an empty segment");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ValidationError("override path '" + path + "' crosses a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = nlohmann::json::object();
  }
  if (!node->is_object()) throw ValidationError("override path '" + path + "' crosses a non-object");
  (*node)[parts.back()] = value;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read config " + path);
  try {
    return nlohmann::json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace bolab
