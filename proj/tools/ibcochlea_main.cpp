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

// ibcochlea command line: model generation, time stepping, benchmarking and
// membrane analysis.

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ibcochlea/analysis.hpp"
#include "ibcochlea/engine.hpp"
#include "ibcochlea/model.hpp"

namespace fs = std::filesystem;

namespace {

struct StepWindow {
  std::uint64_t start = 0;
  std::uint64_t end = std::numeric_limits<std::uint64_t>::max();
};

// "a:b", "a:" or ":b"; empty means every snapshot.
StepWindow parse_window(const std::string& text) {
  StepWindow w;
  if (text.empty()) return w;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must look like START:END, got '" + text + "'");
  const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
  try {
    if (!a.empty()) w.start = std::stoull(a);
    if (!b.empty()) w.end = std::stoull(b);
  } catch (const std::exception&) {
    throw std::invalid_argument("window must look like START:END, got '" + text + "'");
  }
  return w;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

// Writes `csv` to `path` and an SVG plot next to it.
template <typename Writer>
void emit(const fs::path& path, Writer&& write_csv, const std::string& title, const std::string& xlabel,
          const std::string& ylabel, const std::vector<ibc::PlotSeries>& series) {
  if (path.empty()) {
    write_csv(std::cout);
    return;
  }
  {
    auto out = open_out(path);
    write_csv(out);
  }
  fs::path svg = path;
  svg.replace_extension(".svg");
  auto out = open_out(svg);
  ibc::write_svg_plot(out, title, xlabel, ylabel, series);
}

ibc::Envelope envelope_of(const fs::path& dir, const std::string& grid, const StepWindow& w) {
  const auto profiles = ibc::load_profiles(dir, grid);
  return ibc::envelope(profiles, w.start, w.end);
}

std::vector<int> parse_threads(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const int t = std::stoi(item);
    if (t < 1) throw std::invalid_argument("thread counts must be positive");
    out.push_back(t);
  }
  if (out.empty()) throw std::invalid_argument("no thread counts given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immersed boundary model of a straight cochlear channel"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Generate a channel model from a key = value config");
  std::string build_config, build_out = "model.ibm";
  std::vector<std::string> build_overrides;
  bool build_print = false;
  build->add_option("--config", build_config, "Channel config (defaults used when omitted)");
  build->add_option("--set", build_overrides, "Override a config key, e.g. --set k0=2e6");
  build->add_option("--out", build_out, "Model file to write");
  build->add_flag("--print-config", build_print, "Print the effective config and exit");

  // run
  auto* run = app.add_subcommand("run", "Time-step a model, writing snapshots and a checkpoint");
  std::string run_model, run_out = "out", run_resume;
  double run_dt = 0.0;
  std::uint64_t run_steps = 0, run_every = 10;
  int run_threads = 0;
  double run_frequency = -1.0, run_amplitude = std::numeric_limits<double>::quiet_NaN();
  bool run_velocity = false, run_quiet = false;
  run->add_option("--model", run_model, "Model file");
  run->add_option("--resume", run_resume, "Checkpoint to continue from");
  run->add_option("--dt", run_dt, "Time step, s (required with --model)");
  run->add_option("--steps", run_steps, "Number of steps")->required();
  run->add_option("--snapshot-every", run_every, "Snapshot cadence in steps");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--threads", run_threads, "Worker threads (overrides OMP_NUM_THREADS)");
  run->add_option("--frequency", run_frequency, "Override drive frequency, Hz");
  run->add_option("--amplitude", run_amplitude, "Override drive amplitude, dyn");
  run->add_flag("--dump-velocity", run_velocity, "Include the velocity field in snapshots");
  run->add_flag("--quiet", run_quiet, "No progress output");

  // bench
  auto* bench = app.add_subcommand("bench", "Wall-clock time per step for several thread counts");
  std::string bench_model, bench_threads = "1,2,4,8", bench_out;
  double bench_dt = 2.5e-6;
  std::uint64_t bench_steps = 20;
  bench->add_option("--model", bench_model, "Model file")->required();
  bench->add_option("--dt", bench_dt, "Time step, s");
  bench->add_option("--steps", bench_steps, "Steps per thread count");
  bench->add_option("--threads", bench_threads, "Comma separated thread counts");
  bench->add_option("--out", bench_out, "CSV file (stdout when omitted)");

  // analysis
  std::string grid = "membrane", window_text, an_out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--grid", grid, "Membrane grid name");
    sub->add_option("--out", an_out, "CSV file; an SVG plot is written next to it (stdout when omitted)");
  };

  auto* cl = app.add_subcommand("centerline", "Normal displacement of the membrane centreline");
  std::string cl_dir;
  std::int64_t cl_step = -1;
  cl->add_option("dir", cl_dir, "Snapshot directory")->required();
  cl->add_option("--step", cl_step, "Snapshot step (latest when omitted)");
  add_common(cl);

  auto* env = app.add_subcommand("envelope", "Pointwise max of |displacement| over a step window");
  std::string env_dir;
  env->add_option("dir", env_dir, "Snapshot directory")->required();
  env->add_option("--window", window_text, "Step window START:END");
  add_common(env);

  auto* peak = app.add_subcommand("peak", "Station of the envelope maximum");
  std::string peak_dir;
  peak->add_option("dir", peak_dir, "Snapshot directory")->required();
  peak->add_option("--window", window_text, "Step window START:END");
  peak->add_option("--grid", grid, "Membrane grid name");

  auto* lin = app.add_subcommand("linearity", "Station-wise envelope ratio of two runs");
  std::string lin_a, lin_b;
  double lin_scale = 10.0, lin_threshold = 0.01;
  lin->add_option("dir_a", lin_a, "Baseline snapshot directory")->required();
  lin->add_option("dir_b", lin_b, "Scaled snapshot directory")->required();
  lin->add_option("--scale", lin_scale, "Expected ratio");
  lin->add_option("--threshold", lin_threshold, "Ignore stations below this fraction of the baseline peak");
  lin->add_option("--window", window_text, "Step window START:END");
  add_common(lin);

  auto* sweep = app.add_subcommand("sweep", "Peak station per drive frequency");
  std::vector<std::string> sweep_dirs;
  sweep->add_option("dirs", sweep_dirs, "Snapshot directories, one per frequency")->required();
  sweep->add_option("--window", window_text, "Step window START:END");
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      ibc::ChannelSpec spec = build_config.empty() ? ibc::ChannelSpec{} : ibc::load_channel_spec(build_config);
      if (!build_overrides.empty()) {
        std::stringstream ss;
        for (const auto& o : build_overrides) ss << o << '\n';
        spec = ibc::parse_channel_spec(ss, spec);
      }
      if (build_print) {
        ibc::write_channel_spec(std::cout, spec);
        return 0;
      }
      const ibc::ModelFiles model = ibc::build_channel(spec);
      ibc::write_model_file(build_out, model);
      std::cout << "wrote " << build_out << ": " << model.grids.size() << " grids, " << model.point_count()
                << " points, lambda " << ibc::membrane_lambda(spec) << " 1/cm\n";
      for (const auto& g : model.grids) {
        const auto [lo, hi] = ibc::spacing_range(g);
        std::cout << "  " << std::left << std::setw(14) << g.name << std::setw(10) << ibc::law_name(g.law) << g.n1
                  << " x " << g.n2 << ", " << g.free_count() << " free, spacing " << lo << " .. " << hi << '\n';
      }
      return 0;
    }

    if (run->parsed()) {
      if (run_threads > 0) omp_set_num_threads(run_threads);
      ibc::SimState state = [&] {
        if (!run_resume.empty()) return ibc::state_from_checkpoint(ibc::read_checkpoint_file(run_resume));
        if (run_model.empty()) throw std::invalid_argument("run needs --model or --resume");
        if (!(run_dt > 0.0)) throw std::invalid_argument("run needs a positive --dt");
        return ibc::make_state(ibc::read_model_file(run_model), run_dt);
      }();
      if (run_frequency >= 0.0) state.drive.signal.frequency = run_frequency;
      if (!std::isnan(run_amplitude)) state.drive.signal.amplitude = run_amplitude;
      ibc::Engine engine(std::move(state));
      ibc::RunOptions opts;
      opts.steps = run_steps;
      opts.snapshot_every = run_every;
      opts.out_dir = run_out;
      opts.dump_velocity = run_velocity;
      const std::uint64_t report = std::max<std::uint64_t>(1, run_steps / 20);
      if (!run_quiet) {
        opts.on_step = [&](const ibc::SimState& s, const ibc::StepReport& r) {
          if (s.n % report == 0) std::cerr << "step " << s.n << " t=" << s.time() << " cfl=" << r.cfl << '\n';
        };
      }
      const ibc::RunSummary sum = ibc::run(engine, opts);
      std::cout << "finished at step " << sum.final_step << ", " << sum.snapshots << " snapshots, max cfl "
                << sum.max_cfl << ", " << sum.seconds / std::max<std::uint64_t>(1, run_steps) << " s/step\n";
      if (sum.cfl_warnings > 0) std::cerr << "warning: " << sum.cfl_warnings << " steps exceeded the CFL limit\n";
      return 0;
    }

    if (bench->parsed()) {
      const auto threads = parse_threads(bench_threads);
      const auto rows = ibc::bench(ibc::read_model_file(bench_model), bench_dt, bench_steps, threads);
      if (bench_out.empty()) {
        ibc::write_bench_csv(std::cout, rows);
      } else {
        auto out = open_out(bench_out);
        ibc::write_bench_csv(out, rows);
      }
      return 0;
    }

    if (cl->parsed()) {
      const ibc::ModelFiles model = ibc::read_model_file(fs::path(cl_dir) / ibc::kModelCopyName);
      const ibc::LagrangianGrid* m = model.find(grid);
      if (!m) throw std::invalid_argument("no grid '" + grid + "' in " + cl_dir);
      const auto files = ibc::list_snapshots(cl_dir);
      if (files.empty()) throw std::invalid_argument("no snapshots in " + cl_dir);
      fs::path file = files.back();
      if (cl_step >= 0) file = fs::path(cl_dir) / ibc::snapshot_name(static_cast<std::uint64_t>(cl_step));
      const auto p = ibc::centerline(ibc::read_snapshot_file(file), *m);
      emit(an_out, [&](std::ostream& o) { ibc::write_profile_csv(o, p); },
           "centreline, step " + std::to_string(p.step), "station (cm)", "displacement (cm)",
           {{"step " + std::to_string(p.step), p.s, p.d}});
      return 0;
    }

    if (env->parsed()) {
      const auto e = envelope_of(env_dir, grid, parse_window(window_text));
      emit(an_out, [&](std::ostream& o) { ibc::write_envelope_csv(o, e); }, "envelope", "station (cm)",
           "max |displacement| (cm)", {{env_dir, e.s, e.e}});
      return 0;
    }

    if (peak->parsed()) {
      const auto e = envelope_of(peak_dir, grid, parse_window(window_text));
      std::cout << std::setprecision(17) << ibc::peak_location(e) << '\n';
      return 0;
    }

    if (lin->parsed()) {
      const StepWindow w = parse_window(window_text);
      const auto a = envelope_of(lin_a, grid, w), b = envelope_of(lin_b, grid, w);
      const auto r = ibc::linearity_report(a, b, lin_scale, lin_threshold);
      emit(an_out, [&](std::ostream& o) { ibc::write_linearity_csv(o, r); }, "envelope ratio", "station (cm)",
           "ratio", {{"b / a", r.s, r.ratio}});
      std::cerr << "max deviation from scale " << lin_scale << ": " << r.max_deviation << '\n';
      return 0;
    }

    if (sweep->parsed()) {
      const StepWindow w = parse_window(window_text);
      std::vector<std::pair<double, ibc::Envelope>> runs;
      std::vector<ibc::PlotSeries> series;
      for (const auto& d : sweep_dirs) {
        const double f = ibc::read_model_file(fs::path(d) / ibc::kModelCopyName).drive.signal.frequency;
        runs.emplace_back(f, envelope_of(d, grid, w));
        series.push_back({std::to_string(static_cast<long long>(f)) + " Hz", runs.back().second.s,
                          runs.back().second.e});
      }
      const auto r = ibc::frequency_sweep_report(runs);
      emit(an_out, [&](std::ostream& o) { ibc::write_sweep_csv(o, r); }, "envelopes by frequency",
           "station (cm)", "max |displacement| (cm)", series);
      std::cerr << (r.monotone ? "peak moves toward the base as frequency rises\n"
                               : "warning: peak stations are not strictly decreasing with frequency\n");
      return r.monotone ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
