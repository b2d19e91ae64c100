#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "enf/bench.hpp"
#include "enf/error.hpp"
#include "enf/matching.hpp"
#include "enf/pipeline.hpp"
#include "enf/signal_io.hpp"
#include "enf/synth.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace enf::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitDegenerate = 3;

bool g_json = false;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// Pipeline flags shared by extract and compare-windows. Unset flags keep the
// value from the mode preset.
struct PipelineFlags {
  std::string mode = "power";
  std::optional<std::string> window;
  std::optional<double> kaiser_beta;
  std::optional<int> harmonic;
  std::optional<double> nominal_hz;
  std::optional<std::size_t> taps;
  std::optional<double> passband_hz;
  std::optional<double> frame_seconds;
  std::optional<double> shift_seconds;
  std::optional<std::string> estimator;
  std::optional<std::size_t> capon_order;
  std::optional<std::string> capon_refine;
  std::optional<std::size_t> pad_factor;
  std::optional<double> skip_seconds;
  std::optional<double> working_rate_hz;
  bool no_interpolation = false;
  unsigned threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Recording type: power (3rd harmonic, 1001 taps) or speech (2nd, 4801)")
        ->check(CLI::IsMember({"power", "speech"}))
        ->capture_default_str();
    cmd->add_option("--window", window, "parzen | hamming | kaiser | rect");
    cmd->add_option("--kaiser-beta", kaiser_beta, "Kaiser shape parameter (default 8.6)");
    cmd->add_option("--harmonic", harmonic, "Harmonic of the nominal frequency to track");
    cmd->add_option("--nominal-hz", nominal_hz, "Nominal mains frequency (50 or 60)");
    cmd->add_option("--taps", taps, "Band-pass filter length (odd)");
    cmd->add_option("--passband-hz", passband_hz, "Total band-pass width around the harmonic");
    cmd->add_option("--frame-seconds", frame_seconds, "Frame length L in seconds");
    cmd->add_option("--shift-seconds", shift_seconds, "Frame shift in seconds");
    cmd->add_option("--estimator", estimator, "capon | stft");
    cmd->add_option("--capon-order", capon_order, "Capon filter order m (matrices are m+1 square)");
    cmd->add_option("--capon-refine", capon_refine, "none | quadratic | polished");
    cmd->add_option("--pad-factor", pad_factor, "Grid size Q as a multiple of the frame length");
    cmd->add_option("--skip-seconds", skip_seconds, "Drop this much leading signal");
    cmd->add_option("--working-rate", working_rate_hz, "Rate after decimation (input rate must be a multiple)");
    cmd->add_flag("--no-interpolation", no_interpolation, "STFT: report the grid bin without refinement");
    cmd->add_option("--threads", threads, "Worker threads; 0 uses ENF_THREADS or all cores");
  }

  PipelineConfig resolve(EstimatorKind default_estimator = EstimatorKind::capon) const {
    PipelineConfig c = PipelineConfig::preset(parse_recording_mode(mode));
    c.estimator = default_estimator;
    if (window) c.window = parse_window_kind(*window);
    if (kaiser_beta) c.kaiser_beta = *kaiser_beta;
    if (harmonic) c.harmonic = *harmonic;
    if (nominal_hz) c.nominal_hz = *nominal_hz;
    if (taps) c.taps = *taps;
    if (passband_hz) c.passband_hz = *passband_hz;
    if (frame_seconds) c.frame_len_s = *frame_seconds;
    if (shift_seconds) c.shift_s = *shift_seconds;
    if (estimator) c.estimator = parse_estimator_kind(*estimator);
    if (capon_order) c.capon_order = *capon_order;
    if (capon_refine) c.capon_refine = parse_capon_refine(*capon_refine);
    if (pad_factor) c.pad_factor = *pad_factor;
    if (skip_seconds) c.skip_seconds = *skip_seconds;
    if (working_rate_hz) c.working_rate_hz = *working_rate_hz;
    c.stft_interpolate = !no_interpolation;
    c.threads = threads;
    c.validate();
    return c;
  }
};

TrackFormat format_for(const fs::path& p) {
  return p.extension() == ".json" ? TrackFormat::json : TrackFormat::csv;
}

void write_manifests(const RunManifest& m) {
  for (const auto& out : m.outputs) {
    write_manifest(m, manifest_path_for(out));
  }
}

double mean_valid(const EnfTrack& t) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& e : t.entries) {
    if (e.valid) {
      s += e.freq_hz;
      ++n;
    }
  }
  return n ? s / static_cast<double>(n) : std::nan("");
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  fs::path input;
  fs::path output;
  PipelineFlags flags;
};

int run_extract(const ExtractArgs& a) {
  const auto config = a.flags.resolve();
  StageTimer timer;
  const auto signal = timer.time("read", [&] { return read_wav(a.input); });
  const auto track = timer.time("extract", [&] { return extract_enf(signal, config); });
  timer.time("write", [&] { write_track(track, a.output, format_for(a.output)); });

  RunManifest m;
  m.command = "extract";
  m.config = config_to_json(config);
  m.config["mode"] = a.flags.mode;
  m.inputs = {a.input};
  m.outputs = {a.output};
  m.stages = timer.to_json();
  write_manifests(m);

  if (g_json) {
    emit({{"output", a.output.string()},
          {"manifest", manifest_path_for(a.output).string()},
          {"frames", track.size()},
          {"valid_frames", track.valid_count()},
          {"mean_hz", mean_valid(track)},
          {"stages", m.stages}});
  } else {
    std::printf("%zu frames (%zu valid), mean %.5f Hz -> %s\n", track.size(), track.valid_count(),
                mean_valid(track), a.output.string().c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

json match_json(const MatchResult& r, std::size_t k, std::size_t k_ref) {
  return {{"best_lag", r.lag_one_based()},
          {"best_lag_zero_based", r.best_lag},
          {"correlation", r.correlation},
          {"centered", r.centered},
          {"n_used", r.n_used},
          {"extracted_frames", k},
          {"reference_frames", k_ref}};
}

struct MatchArgs {
  fs::path extracted;
  fs::path reference;
  bool centered = false;
  unsigned threads = 1;
};

int run_match(const MatchArgs& a) {
  const auto f = read_track(a.extracted);
  const auto g = read_track(a.reference);
  if (g.size() < f.size()) {
    throw InvalidArgument("reference track (" + std::to_string(g.size()) +
                          " frames) is shorter than the extracted track (" + std::to_string(f.size()) + ")");
  }
  const auto r = best_lag(f.frequencies(), g.frequencies(), a.centered, resolve_threads(a.threads));
  emit(match_json(r, f.size(), g.size()));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FisherArgs {
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t n = 0;
  double alpha = 0.05;
};

int run_fisher(const FisherArgs& a) {
  const auto t = fisher_test(a.c1, a.c2, a.n, a.alpha);
  emit({{"c1", a.c1},
        {"c2", a.c2},
        {"z1", t.z1},
        {"z2", t.z2},
        {"q", t.q},
        {"n", t.n},
        {"alpha", t.alpha},
        {"critical", t.critical},
        {"reject", t.reject}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  fs::path input;
  fs::path reference;
  fs::path output;
  fs::path plot_data;
  std::vector<std::string> windows{"parzen", "hamming", "kaiser", "rect"};
  std::vector<double> frame_lengths{1.0, 5.0, 10.0, 20.0};
  bool centered = false;
  PipelineFlags flags;
};

// Shortest round-trip text.
std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

int run_compare_windows(CompareArgs a) {
  if (a.plot_data.empty()) {
    a.plot_data = a.output;
    a.plot_data.replace_extension(".plot.csv");
  }
  const auto base = a.flags.resolve(EstimatorKind::stft);
  StageTimer timer;
  const auto signal = timer.time("read", [&] { return read_wav(a.input); });
  const auto ref = read_track(a.reference);
  const auto g = ref.frequencies();

  struct Cell {
    std::string window;
    double frame_s;
    MatchResult match;
  };
  std::vector<Cell> cells;
  for (const auto& wname : a.windows) {
    const auto kind = parse_window_kind(wname);
    for (double len : a.frame_lengths) {
      PipelineConfig c = base;
      c.window = kind;
      c.frame_len_s = len;
      c.validate();
      const auto label = std::string(to_string(kind)) + "/L=" + number(len);
      const auto track = timer.time("extract " + label, [&] { return extract_enf(signal, c); });
      if (g.size() < track.size()) {
        throw InvalidArgument("reference track is shorter than the extracted track for " + label);
      }
      cells.push_back({std::string(to_string(kind)), len,
                       best_lag(track.frequencies(), g, a.centered, resolve_threads(c.threads))});
    }
  }

  {
    std::ofstream out(a.output);
    if (!out) throw IoError("cannot write " + a.output.string());
    out << "window";
    for (double len : a.frame_lengths) out << ",L=" << number(len);
    out << '\n';
    std::size_t i = 0;
    for (const auto& w : a.windows) {
      out << to_string(parse_window_kind(w));
      for (std::size_t j = 0; j < a.frame_lengths.size(); ++j) out << ',' << number(cells[i++].match.correlation);
      out << '\n';
    }
    if (!out) throw IoError("failed writing " + a.output.string());
  }
  {
    std::ofstream out(a.plot_data);
    if (!out) throw IoError("cannot write " + a.plot_data.string());
    out << "series,frame_seconds,correlation,best_lag,n_used\n";
    for (const auto& c : cells) {
      out << c.window << ',' << number(c.frame_s) << ',' << number(c.match.correlation) << ','
          << c.match.lag_one_based() << ',' << c.match.n_used << '\n';
    }
    if (!out) throw IoError("failed writing " + a.plot_data.string());
  }

  RunManifest m;
  m.command = "compare-windows";
  m.config = config_to_json(base);
  m.config["mode"] = a.flags.mode;
  m.config["windows"] = a.windows;
  m.config["frame_lengths"] = a.frame_lengths;
  m.config["centered"] = a.centered;
  m.inputs = {a.input, a.reference};
  m.outputs = {a.output, a.plot_data};
  m.stages = timer.to_json();
  write_manifests(m);

  if (g_json) {
    json rows = json::array();
    for (const auto& c : cells) {
      rows.push_back({{"window", c.window}, {"frame_seconds", c.frame_s},
                      {"match", match_json(c.match, 0, g.size())}});
    }
    emit({{"matrix", a.output.string()}, {"plot_data", a.plot_data.string()}, {"cells", rows}});
  } else {
    std::ifstream in(a.output);
    std::cout << in.rdbuf();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::size_t order = 11;
  std::vector<std::size_t> grids{1764};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

int run_bench_cmd(const BenchArgs& a) {
  json rows = json::array();
  if (!g_json) std::printf("%6s %6s %7s %14s %14s %9s %12s\n", "M", "Q", "trials", "fast_s", "dense_s", "speedup", "max_rel_diff");
  for (std::size_t q : a.grids) {
    const auto r = run_bench(a.order, q, a.trials, a.seed);
    rows.push_back({{"order", r.order},
                    {"grid_size", r.grid_size},
                    {"trials", r.trials},
                    {"fast_median_s", r.fast_median_s},
                    {"dense_median_s", r.dense_median_s},
                    {"speedup", r.speedup},
                    {"max_rel_diff", r.max_rel_diff}});
    if (!g_json) {
      std::printf("%6zu %6zu %7zu %14.4e %14.4e %9.2f %12.2e\n", r.order, r.grid_size, r.trials, r.fast_median_s,
                  r.dense_median_s, r.speedup, r.max_rel_diff);
    }
  }
  if (g_json) emit({{"seed", a.seed}, {"results", rows}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  synth::PowerSignalSpec spec;
  fs::path output;
  fs::path reference;
  double peak = 0.9;
};

int run_synth(const SynthArgs& a) {
  if (!(a.peak > 0.0 && a.peak < 1.0)) throw InvalidArgument("--peak must lie in (0, 1)");
  if (a.spec.amplitudes.size() != a.spec.harmonics.size()) {
    throw InvalidArgument("--amplitudes needs one value per harmonic");
  }
  StageTimer timer;
  const auto fx = timer.time("synthesise", [&] { return synth::make_power_fixture(a.spec); });
  double peak = 0.0;
  for (double v : fx.signal.samples()) peak = std::max(peak, std::abs(v));
  const double gain = peak > 0.0 ? a.peak / peak : 1.0;
  std::vector<double> scaled(fx.signal.samples().begin(), fx.signal.samples().end());
  for (auto& v : scaled) v *= gain;
  timer.time("write wav", [&] { write_wav(SampledSignal(std::move(scaled), fx.signal.sample_rate_hz()), a.output); });

  RunManifest m;
  m.command = "synth";
  m.config = {{"duration_s", a.spec.duration_s},   {"sample_rate_hz", a.spec.sample_rate_hz},
              {"nominal_hz", a.spec.nominal_hz},   {"walk_bound_hz", a.spec.walk_bound_hz},
              {"walk_step_hz", a.spec.walk_step_hz}, {"harmonics", a.spec.harmonics},
              {"amplitudes", a.spec.amplitudes},   {"snr_db", a.spec.snr_db},
              {"seed", a.spec.seed},               {"gain", gain}};
  m.outputs = {a.output};
  if (!a.reference.empty()) {
    timer.time("write reference", [&] { write_track(fx.reference_log(), a.reference, format_for(a.reference)); });
    m.outputs.push_back(a.reference);
  }
  m.stages = timer.to_json();
  write_manifests(m);

  if (g_json) {
    emit({{"wav", a.output.string()}, {"reference", a.reference.string()}, {"gain", gain}, {"seed", a.spec.seed}});
  } else {
    std::printf("%.0f s at %g Hz -> %s\n", a.spec.duration_s, a.spec.sample_rate_hz, a.output.string().c_str());
  }
  return kExitOk;
}

int report_error(const std::string& kind, const std::string& what, int code) {
  std::cerr << "enf: " << kind << ": " << what << '\n';
  if (g_json) emit({{"error", what}, {"kind", kind}, {"exit_code", code}});
  return code;
}

}  // namespace
}  // namespace enf::cli

int main(int argc, char** argv) {
  using namespace enf;
  using namespace enf::cli;

  CLI::App app{"Electric network frequency extraction with a fast Capon estimator"};
  app.set_version_flag("--version", std::string(ENF_VERSION_STRING));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g_json, "Machine-readable JSON on stdout");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Estimate the ENF track of a WAV recording");
  extract->add_option("wav", ex.input, "Input PCM16 WAV")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex.output, "Track file (.csv or .json)")->required();
  ex.flags.attach(extract);

  MatchArgs ma;
  auto* match = app.add_subcommand("match", "Best-lag correlation of a track against a longer reference");
  match->add_option("extracted", ma.extracted, "Extracted track")->required()->check(CLI::ExistingFile);
  match->add_option("reference", ma.reference, "Reference track")->required()->check(CLI::ExistingFile);
  match->add_flag("--centered", ma.centered, "Subtract means before correlating (Pearson)");
  match->add_option("--threads", ma.threads, "Worker threads for the lag scan; 0 uses ENF_THREADS or all cores")
      ->capture_default_str();

  FisherArgs fa;
  auto* fisher = app.add_subcommand("fisher", "Fisher z-test between two correlation coefficients");
  fisher->add_option("c1", fa.c1)->required();
  fisher->add_option("c2", fa.c2)->required();
  fisher->add_option("n", fa.n, "Number of pairs")->required();
  fisher->add_option("--alpha", fa.alpha, "Significance level")->capture_default_str();

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare-windows", "Correlation table over windows and frame lengths");
  compare->add_option("wav", ca.input)->required()->check(CLI::ExistingFile);
  compare->add_option("reference", ca.reference, "Reference track, one value per second")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("-o,--output", ca.output, "CSV matrix: rows windows, columns frame lengths")->required();
  compare->add_option("--plot-data", ca.plot_data, "Long-form CSV for plotting (default <output>.plot.csv)");
  compare->add_option("--windows", ca.windows)->delimiter(',')->capture_default_str();
  compare->add_option("--frame-lengths", ca.frame_lengths, "Seconds")->delimiter(',')->capture_default_str();
  compare->add_flag("--centered", ca.centered, "Pearson instead of the uncentered coefficient");
  ca.flags.attach(compare);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time the structured Capon path against the dense path");
  bench->add_option("--order", ba.order, "Matrix order M")->capture_default_str();
  bench->add_option("--grid", ba.grids, "Grid sizes Q")->delimiter(',')->capture_default_str();
  bench->add_option("--trials", ba.trials)->capture_default_str();
  bench->add_option("--seed", ba.seed)->capture_default_str();

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic mains recording and its reference log");
  synth_cmd->add_option("-o,--output", sa.output, "WAV file")->required();
  synth_cmd->add_option("--reference", sa.reference, "Per-second ground-truth track (.csv or .json)");
  synth_cmd->add_option("--duration", sa.spec.duration_s, "Seconds")->capture_default_str();
  synth_cmd->add_option("--sample-rate", sa.spec.sample_rate_hz)->capture_default_str();
  synth_cmd->add_option("--nominal-hz", sa.spec.nominal_hz)->capture_default_str();
  synth_cmd->add_option("--walk-bound-hz", sa.spec.walk_bound_hz)->capture_default_str();
  synth_cmd->add_option("--walk-step-hz", sa.spec.walk_step_hz)->capture_default_str();
  synth_cmd->add_option("--harmonics", sa.spec.harmonics)->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--amplitudes", sa.spec.amplitudes)->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--snr-db", sa.spec.snr_db)->capture_default_str();
  synth_cmd->add_option("--seed", sa.spec.seed)->capture_default_str();
  synth_cmd->add_option("--peak", sa.peak, "Peak level after normalisation")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    if (*extract) return run_extract(ex);
    if (*match) return run_match(ma);
    if (*fisher) return run_fisher(fa);
    if (*compare) return run_compare_windows(ca);
    if (*bench) return run_bench_cmd(ba);
    if (*synth_cmd) return run_synth(sa);
  } catch (const DegenerateInput& e) {
    return report_error("degenerate input", e.what(), kExitDegenerate);
  } catch (const InvalidArgument& e) {
    return report_error("invalid argument", e.what(), kExitBadArguments);
  } catch (const ParseError& e) {
    return report_error("parse error", e.what(), kExitBadArguments);
  } catch (const UnsupportedFormat& e) {
    return report_error("unsupported format", e.what(), kExitBadArguments);
  } catch (const IoError& e) {
    return report_error("i/o error", e.what(), kExitBadArguments);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), kExitFailure);
  }
  return kExitFailure;
}
