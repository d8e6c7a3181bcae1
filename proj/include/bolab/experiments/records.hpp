#pragma once

// Per-snapshot diagnostics and CSV output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "bolab/gauge/gauge.hpp"

namespace bolab {

/// Shortest text that reads back to the same double.
inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_label(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw DimensionError("csv row has " + std::to_string(row.size()) +
                           " cells, header has " + std::to_string(header.size()));
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open " + path + " for writing");
    os << str();
    if (!os) throw ValidationError("write failed: " + path);
  }
};

struct DiagnosticsRecord {
  double t = 0.0;
  std::map<double, double> hs_norms;
  std::map<double, double> w_norms;
  std::map<double, double> residual_norms;
  ConservedTriple conserved;
  double energy_half = 0.0;
  double ungauge_ratio = std::nan("");

  bool all_finite() const {
    auto ok = [](const std::map<double, double>& m) {
      for (const auto& [_, v] : m)
        if (!std::isfinite(v)) return false;
      return true;
    };
    return std::isfinite(t) && ok(hs_norms) && ok(w_norms) && ok(residual_norms) &&
           std::isfinite(conserved.i1) && std::isfinite(conserved.i2) &&
           std::isfinite(conserved.e3) && std::isfinite(energy_half);
  }
};

struct DiagnosticsSpec {
  std::vector<double> norms;           // s' for ||u||_{H^s'} and ||w||_{H^s'}
  std::vector<double> residual_norms;  // s + a for ||r||_{H^{s+a}}
  double ungauge_s = 0.0;              // in (1/2, 1] to report the ratio
};

/// Diagnostics at every snapshot of a trajectory.
inline std::vector<DiagnosticsRecord> diagnose(const Trajectory& tr,
                                               const DiagnosticsSpec& spec) {
  std::vector<DiagnosticsRecord> out(tr.size());
  const bool want_w = !spec.norms.empty() || !spec.residual_norms.empty() ||
                      spec.ungauge_s > 0.5;
  std::vector<SpectralField> r;
  if (!spec.residual_norms.empty()) r = smoothing_residual(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const SpectralField& u = tr.states[i];
    DiagnosticsRecord& d = out[i];
    d.t = tr.times[i];
    d.conserved = tr.invariants[i];
    d.energy_half = tr.energy_half[i];
    SpectralField w(u.grid(), Reality::complex_valued);
    if (want_w) w = gauge_transform(u);
    for (double s : spec.norms) {
      d.hs_norms[s] = sobolev_norm(u, s);
      d.w_norms[s] = sobolev_norm(w, s);
    }
    for (double s : spec.residual_norms) d.residual_norms[s] = sobolev_norm(r[i], s);
    if (spec.ungauge_s > 0.5 && spec.ungauge_s <= 1.0)
      d.ungauge_ratio = ungauge_ratio(u, w, tr.initial(), spec.ungauge_s);
    if (!d.all_finite())
      throw NumericalError("non-finite diagnostic at t=" + fmt_g(d.t));
  }
  return out;
}

/// Header: t, the given leading columns, then u_hs_<s'>, w_hs_<s'>,
/// r_hs_<s+a>, i1, i2, e3, energy_half and (if reported) ungauge_ratio.
inline std::vector<std::string> diagnostics_header(
    const std::vector<std::string>& leading, const DiagnosticsSpec& spec) {
  std::vector<std::string> h{"t"};
  h.insert(h.end(), leading.begin(), leading.end());
  for (double s : spec.norms) h.push_back("u_hs_" + fmt_label(s));
  for (double s : spec.norms) h.push_back("w_hs_" + fmt_label(s));
  for (double s : spec.residual_norms) h.push_back("r_hs_" + fmt_label(s));
  for (const char* c : {"i1", "i2", "e3", "energy_half"}) h.emplace_back(c);
  if (spec.ungauge_s > 0.5 && spec.ungauge_s <= 1.0) h.emplace_back("ungauge_ratio");
  return h;
}

inline std::vector<std::string> diagnostics_row(
    const DiagnosticsRecord& d, const std::vector<std::string>& leading,
    const DiagnosticsSpec& spec) {
  std::vector<std::string> r{fmt_num(d.t)};
  r.insert(r.end(), leading.begin(), leading.end());
  for (double s : spec.norms) r.push_back(fmt_num(d.hs_norms.at(s)));
  for (double s : spec.norms) r.push_back(fmt_num(d.w_norms.at(s)));
  for (double s : spec.residual_norms) r.push_back(fmt_num(d.residual_norms.at(s)));
  r.push_back(fmt_num(d.conserved.i1));
  r.push_back(fmt_num(d.conserved.i2));
  r.push_back(fmt_num(d.conserved.e3));
  r.push_back(fmt_num(d.energy_half));
  if (spec.ungauge_s > 0.5 && spec.ungauge_s <= 1.0) r.push_back(fmt_num(d.ungauge_ratio));
  return r;
}

}  // namespace bolab
