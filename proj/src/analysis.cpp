// Copyright 2026 The ibcochlea Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ibcochlea/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ibcochlea/engine.hpp"
#include "ibcochlea/model.hpp"

namespace ibc {

CenterlineFrame centerline_frame(const LagrangianGrid& m) {
  if (m.n1 < 2 || m.n2 < 2) throw std::invalid_argument("centerline: grid '" + m.name + "' is too small");
  CenterlineFrame f;
  f.grid = m.name;
  f.n1 = m.n1;
  f.n2 = m.n2;
  const int j_lo = (m.n2 - 1) / 2;
  const int j_hi = m.n2 / 2;
  auto rest = [&](int i) { return (m.X_rest[m.index(i, j_lo)] + m.X_rest[m.index(i, j_hi)]) * 0.5; };

  double s = 0.0;
  for (int i = 0; i < m.n1; ++i) {
    if (i > 0) s += norm(rest(i) - rest(i - 1));
    f.s.push_back(s);
    const Vec3 t1 = rest(std::min(i + 1, m.n1 - 1)) - rest(std::max(i - 1, 0));
    const int jm = std::max(j_lo - 1, 0), jp = std::min(j_hi + 1, m.n2 - 1);
    const Vec3 t2 = m.X_rest[m.index(i, jp)] - m.X_rest[m.index(i, jm)];
    const Vec3 n = cross(t1, t2);
    const double len = norm(n);
    if (!(len > 0.0)) throw std::invalid_argument("centerline: degenerate rest geometry at station " + std::to_string(i));
    f.normal.push_back(n * (1.0 / len));
  }
  return f;
}

CenterlineProfile centerline(const Snapshot& snap, const LagrangianGrid& membrane, const CenterlineFrame& frame) {
  const GridPositions* g = snap.find(membrane.name);
  if (!g) throw std::invalid_argument("centerline: snapshot has no grid '" + membrane.name + "'");
  if (g->n1 != membrane.n1 || g->n2 != membrane.n2) {
    throw std::invalid_argument("centerline: grid '" + membrane.name + "' dimensions differ from the model");
  }
  CenterlineProfile p;
  p.step = snap.step;
  p.time = snap.time;
  p.s = frame.s;
  p.d.resize(frame.s.size());
  const int j_lo = (membrane.n2 - 1) / 2;
  const int j_hi = membrane.n2 / 2;
  for (int i = 0; i < membrane.n1; ++i) {
    const int a = membrane.index(i, j_lo), b = membrane.index(i, j_hi);
    const Vec3 disp = ((g->X[a] - membrane.X_rest[a]) + (g->X[b] - membrane.X_rest[b])) * 0.5;
    p.d[i] = dot(disp, frame.normal[i]);
  }
  return p;
}

CenterlineProfile centerline(const Snapshot& snap, const LagrangianGrid& membrane) {
  return centerline(snap, membrane, centerline_frame(membrane));
}

Envelope envelope(std::span<const CenterlineProfile> profiles, std::uint64_t start, std::uint64_t end) {
  if (start > end) throw std::invalid_argument("envelope: window start after end");
  Envelope env;
  env.window_start = start;
  env.window_end = end;
  bool any = false;
  for (const auto& p : profiles) {
    if (p.step < start || p.step > end) continue;
    if (!any) {
      env.s = p.s;
      env.e.assign(p.s.size(), 0.0);
      any = true;
    } else if (p.s.size() != env.s.size()) {
      throw std::invalid_argument("envelope: profiles have different station counts");
    }
    for (std::size_t i = 0; i < p.d.size(); ++i) env.e[i] = std::max(env.e[i], std::abs(p.d[i]));
  }
  if (!any) {
    throw std::invalid_argument("envelope: no snapshot in window [" + std::to_string(start) + ", " +
                                std::to_string(end) + "]");
  }
  return env;
}

std::size_t peak_index(const Envelope& env) {
  if (env.e.empty()) throw std::invalid_argument("peak_location: empty envelope");
  std::size_t best = 0;
  for (std::size_t i = 1; i < env.e.size(); ++i) {
    if (env.e[i] > env.e[best]) best = i;
  }
  return best;
}

double peak_location(const Envelope& env) { return env.s[peak_index(env)]; }

double post_peak_min_ratio(const Envelope& env) {
  const std::size_t k = peak_index(env);
  if (env.e[k] == 0.0) return 1.0;
  double m = 1.0;
  for (std::size_t i = k + 1; i < env.e.size(); ++i) m = std::min(m, env.e[i] / env.e[k]);
  return m;
}

LinearityReport linearity_report(const Envelope& a, const Envelope& b, double scale, double threshold_fraction) {
  if (a.e.size() != b.e.size()) throw std::invalid_argument("linearity: envelopes have different station counts");
  if (!(scale > 0.0)) throw std::invalid_argument("linearity: scale must be positive");
  LinearityReport r;
  r.scale = scale;
  r.threshold_fraction = threshold_fraction;
  r.s = a.s;
  const double peak = a.e.empty() ? 0.0 : *std::max_element(a.e.begin(), a.e.end());
  for (std::size_t i = 0; i < a.e.size(); ++i) {
    const double ratio = a.e[i] > 0.0 ? b.e[i] / a.e[i] : std::numeric_limits<double>::quiet_NaN();
    const bool used = a.e[i] > threshold_fraction * peak && a.e[i] > 0.0;
    r.ratio.push_back(ratio);
    r.considered.push_back(used);
    if (used) r.max_deviation = std::max(r.max_deviation, std::abs(ratio / scale - 1.0));
  }
  return r;
}

SweepReport frequency_sweep_report(std::vector<std::pair<double, Envelope>> runs) {
  std::sort(runs.begin(), runs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SweepReport r;
  for (const auto& [f, env] : runs) r.rows.push_back({f, peak_location(env)});
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (!(r.rows[i].frequency > r.rows[i - 1].frequency) || !(r.rows[i].peak < r.rows[i - 1].peak)) {
      r.monotone = false;
    }
  }
  return r;
}

void write_profile_csv(std::ostream& out, const CenterlineProfile& p) {
  out << "station_cm,displacement_cm\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.s.size(); ++i) out << p.s[i] << ',' << p.d[i] << '\n';
}

void write_envelope_csv(std::ostream& out, const Envelope& env) {
  out << "station_cm,envelope_cm\n" << std::setprecision(17);
  for (std::size_t i = 0; i < env.s.size(); ++i) out << env.s[i] << ',' << env.e[i] << '\n';
}

void write_linearity_csv(std::ostream& out, const LinearityReport& r) {
  out << "station_cm,ratio,considered\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.s.size(); ++i) out << r.s[i] << ',' << r.ratio[i] << ',' << r.considered[i] << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepReport& r) {
  out << "frequency_hz,peak_cm\n" << std::setprecision(17);
  for (const auto& row : r.rows) out << row.frequency << ',' << row.peak << '\n';
}

void write_svg_plot(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                    std::span<const PlotSeries> series) {
  constexpr double W = 720, H = 420, L = 80, R = 20, T = 40, B = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) { x0 = 0; x1 = 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << std::setprecision(4);
  out << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << x0 << "</text>\n";
  out << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\" font-size=\"11\">" << x1
      << "</text>\n";
  out << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"11\">" << y0 << "</text>\n";
  out << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\" font-size=\"11\">" << y1
      << "</text>\n";
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  out << std::setprecision(7);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
        << color << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

std::vector<CenterlineProfile> load_profiles(const std::filesystem::path& dir, const std::string& grid) {
  const ModelFiles model = read_model_file(dir / kModelCopyName);
  const LagrangianGrid* membrane = model.find(grid);
  if (!membrane) throw std::invalid_argument("model in " + dir.string() + " has no grid '" + grid + "'");
  const CenterlineFrame frame = centerline_frame(*membrane);
  std::vector<CenterlineProfile> out;
  for (const auto& path : list_snapshots(dir)) out.push_back(centerline(read_snapshot_file(path), *membrane, frame));
  return out;
}

}  // namespace ibc
