#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "enf/bandpass.hpp"
#include "enf/bench.hpp"
#include "enf/capon.hpp"
#include "enf/error.hpp"
#include "enf/matching.hpp"
#include "enf/pipeline.hpp"
#include "enf/signal_io.hpp"
#include "enf/stft.hpp"
#include "enf/synth.hpp"
#include "enf/window.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw enf::InvalidArgument("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict track_to_dict(const enf::EnfTrack& t) {
  std::vector<std::int64_t> idx;
  std::vector<double> time, freq;
  for (const auto& e : t.entries) {
    idx.push_back(static_cast<std::int64_t>(e.frame_index));
    time.push_back(e.time_s);
    freq.push_back(e.valid ? e.freq_hz : std::numeric_limits<double>::quiet_NaN());
  }
  py::dict d;
  d["frame_index"] = py::array_t<std::int64_t>(static_cast<py::ssize_t>(idx.size()), idx.data());
  d["time_s"] = to_array(time);
  d["freq_hz"] = to_array(freq);
  d["frame_seconds"] = t.frame_len_s;
  d["shift_seconds"] = t.shift_s;
  d["harmonic"] = t.harmonic;
  d["nominal_hz"] = t.nominal_hz;
  return d;
}

enf::EnfTrack track_from_arrays(const Array& time_s, const Array& freq_hz) {
  const auto t = to_vector(time_s);
  const auto f = to_vector(freq_hz);
  if (t.size() != f.size()) throw enf::InvalidArgument("time and frequency arrays differ in length");
  enf::EnfTrack track;
  for (std::size_t i = 0; i < t.size(); ++i) track.entries.push_back({i, t[i], f[i], std::isfinite(f[i])});
  if (t.size() >= 2 && t[1] > t[0]) track.shift_s = t[1] - t[0];
  return track;
}

}  // namespace

PYBIND11_MODULE(_enf, m) {
  m.doc() = "ENF estimation: windows, filters, STFT and fast Capon spectra, matching";
  m.attr("__version__") = ENF_VERSION_STRING;

  auto base = py::register_exception<enf::Error>(m, "EnfError", PyExc_RuntimeError);
  py::register_exception<enf::InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
  py::register_exception<enf::ParseError>(m, "TrackParseError", PyExc_ValueError);
  py::register_exception<enf::UnsupportedFormat>(m, "UnsupportedFormatError", PyExc_ValueError);
  py::register_exception<enf::IoError>(m, "EnfIOError", PyExc_OSError);
  py::register_exception<enf::DegenerateInput>(m, "DegenerateInputError", base.ptr());

  py::enum_<enf::WindowKind>(m, "WindowKind")
      .value("parzen", enf::WindowKind::parzen)
      .value("hamming", enf::WindowKind::hamming)
      .value("kaiser", enf::WindowKind::kaiser)
      .value("rect", enf::WindowKind::rectangular);
  py::enum_<enf::EstimatorKind>(m, "EstimatorKind")
      .value("capon", enf::EstimatorKind::capon)
      .value("stft", enf::EstimatorKind::stft);
  py::enum_<enf::CaponRefine>(m, "CaponRefine")
      .value("none", enf::CaponRefine::none)
      .value("quadratic", enf::CaponRefine::quadratic)
      .value("polished", enf::CaponRefine::polished);

  py::class_<enf::PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_static("preset", [](const std::string& mode) {
        return enf::PipelineConfig::preset(enf::parse_recording_mode(mode));
      }, py::arg("mode"))
      .def_readwrite("nominal_hz", &enf::PipelineConfig::nominal_hz)
      .def_readwrite("harmonic", &enf::PipelineConfig::harmonic)
      .def_readwrite("working_rate_hz", &enf::PipelineConfig::working_rate_hz)
      .def_readwrite("skip_seconds", &enf::PipelineConfig::skip_seconds)
      .def_readwrite("frame_seconds", &enf::PipelineConfig::frame_len_s)
      .def_readwrite("shift_seconds", &enf::PipelineConfig::shift_s)
      .def_readwrite("window", &enf::PipelineConfig::window)
      .def_readwrite("kaiser_beta", &enf::PipelineConfig::kaiser_beta)
      .def_readwrite("estimator", &enf::PipelineConfig::estimator)
      .def_readwrite("taps", &enf::PipelineConfig::taps)
      .def_readwrite("passband_hz", &enf::PipelineConfig::passband_hz)
      .def_readwrite("capon_order", &enf::PipelineConfig::capon_order)
      .def_readwrite("pad_factor", &enf::PipelineConfig::pad_factor)
      .def_readwrite("capon_refine", &enf::PipelineConfig::capon_refine)
      .def_readwrite("stft_interpolate", &enf::PipelineConfig::stft_interpolate)
      .def_readwrite("threads", &enf::PipelineConfig::threads)
      .def("validate", &enf::PipelineConfig::validate);

  m.def("make_window", [](enf::WindowKind kind, std::size_t n, std::optional<double> beta) {
    const auto w = enf::make_window(kind, n, beta);
    return to_array(std::vector<double>(w.taps().begin(), w.taps().end()));
  }, py::arg("kind"), py::arg("n"), py::arg("beta") = py::none());

  m.def("read_wav", [](const std::string& path) {
    const auto s = enf::read_wav(path);
    return py::make_tuple(to_array({s.samples().begin(), s.samples().end()}), s.sample_rate_hz());
  }, py::arg("path"), "Returns (samples, sample_rate_hz); stereo is averaged.");

  m.def("write_wav", [](const std::string& path, const Array& samples, double rate) {
    enf::write_wav(enf::SampledSignal(to_vector(samples), rate), path);
  }, py::arg("path"), py::arg("samples"), py::arg("sample_rate_hz"));

  m.def("decimate", [](const Array& samples, double rate, int factor) {
    const auto out = enf::decimate(enf::SampledSignal(to_vector(samples), rate), factor);
    return py::make_tuple(to_array({out.samples().begin(), out.samples().end()}), out.sample_rate_hz(),
                          out.origin_offset_s());
  }, py::arg("samples"), py::arg("sample_rate_hz"), py::arg("factor"),
     "Returns (samples, sample_rate_hz, origin_offset_s).");

  m.def("design_bandpass", [](double fs, double center, double width, std::size_t taps) {
    return to_array(enf::design_bandpass(fs, center, width, taps).coeffs);
  }, py::arg("sample_rate_hz"), py::arg("center_hz"), py::arg("passband_hz"), py::arg("taps"));

  m.def("periodogram", [](const Array& frame, double fs, std::size_t pad) {
    return to_array(enf::periodogram(to_vector(frame), fs, pad).values);
  }, py::arg("frame"), py::arg("sample_rate_hz"), py::arg("pad_factor") = enf::kDefaultPadFactor);

  m.def("autocovariance", [](const Array& frame, std::size_t order) {
    return to_array(enf::estimate_autocovariance(to_vector(frame), order).first_column);
  }, py::arg("frame"), py::arg("order") = enf::kDefaultCaponOrder);

  m.def("levinson", [](const Array& rho) {
    const auto s = enf::levinson_solve(enf::ToeplitzCovariance{to_vector(rho)});
    return py::make_tuple(to_array(s.w), s.alpha);
  }, py::arg("rho"), "Returns (w, alpha).");

  m.def("capon_denominator", [](const Array& rho) {
    const auto s = enf::levinson_solve(enf::ToeplitzCovariance{to_vector(rho)});
    return to_array(enf::denom_coeffs(enf::gs_factors(s.w, s.alpha)).full());
  }, py::arg("rho"), "Diagonal sums x_{-(M-1)}..x_{M-1} of the inverse covariance.");

  m.def("capon_psd", [](const Array& rho, std::size_t grid_size, double fs) {
    const auto s = enf::levinson_solve(enf::ToeplitzCovariance{to_vector(rho)});
    return to_array(enf::capon_psd(enf::denom_coeffs(enf::gs_factors(s.w, s.alpha)), grid_size, fs).values);
  }, py::arg("rho"), py::arg("grid_size"), py::arg("sample_rate_hz"));

  m.def("capon_estimate_frame", [](const Array& frame, double fs, double lo, double hi, std::size_t order,
                                   std::size_t pad, enf::CaponRefine refine) -> std::optional<double> {
    const auto e = enf::capon_estimate_frame(to_vector(frame), fs, {lo, hi}, {order, pad, refine});
    if (!e) return std::nullopt;
    return e->freq_hz;
  }, py::arg("frame"), py::arg("sample_rate_hz"), py::arg("lo_hz"), py::arg("hi_hz"),
     py::arg("order") = enf::kDefaultCaponOrder, py::arg("pad_factor") = enf::kDefaultPadFactor,
     py::arg("refine") = enf::CaponRefine::polished, "None for a degenerate frame.");

  m.def("stft_estimate_frame", [](const Array& frame, double fs, double lo, double hi, std::size_t pad,
                                  bool interpolate) {
    return enf::stft_estimate_frame(to_vector(frame), fs, {lo, hi}, pad, interpolate).freq_hz;
  }, py::arg("frame"), py::arg("sample_rate_hz"), py::arg("lo_hz"), py::arg("hi_hz"),
     py::arg("pad_factor") = enf::kDefaultPadFactor, py::arg("interpolate") = true);

  m.def("extract_enf", [](const Array& samples, double rate, const enf::PipelineConfig& config) {
    auto x = to_vector(samples);
    enf::EnfTrack track;
    {
      py::gil_scoped_release release;
      track = enf::extract_enf(enf::SampledSignal(std::move(x), rate), config);
    }
    return track_to_dict(track);
  }, py::arg("samples"), py::arg("sample_rate_hz"), py::arg("config") = enf::PipelineConfig{},
     "Dict with frame_index, time_s, freq_hz (NaN for gaps) and track metadata.");

  m.def("read_track", [](const std::string& path) { return track_to_dict(enf::read_track(path)); },
        py::arg("path"));
  m.def("write_track", [](const std::string& path, const Array& time_s, const Array& freq_hz) {
    const std::string p(path);
    const auto fmt = p.size() > 5 && p.substr(p.size() - 5) == ".json" ? enf::TrackFormat::json
                                                                       : enf::TrackFormat::csv;
    enf::write_track(track_from_arrays(time_s, freq_hz), path, fmt);
  }, py::arg("path"), py::arg("time_s"), py::arg("freq_hz"));

  m.def("correlation", [](const Array& f, const Array& g, bool centered) {
    return enf::correlation(to_vector(f), to_vector(g), centered);
  }, py::arg("f"), py::arg("g"), py::arg("centered") = false);

  m.def("best_lag", [](const Array& f, const Array& g, bool centered, unsigned threads) {
    const auto r = enf::best_lag(to_vector(f), to_vector(g), centered, threads);
    py::dict d;
    d["best_lag"] = r.lag_one_based();
    d["best_lag_zero_based"] = r.best_lag;
    d["correlation"] = r.correlation;
    d["centered"] = r.centered;
    d["n_used"] = r.n_used;
    return d;
  }, py::arg("f"), py::arg("g"), py::arg("centered") = false, py::arg("threads") = 1);

  m.def("fisher_test", [](double c1, double c2, std::size_t n, double alpha) {
    const auto t = enf::fisher_test(c1, c2, n, alpha);
    py::dict d;
    d["z1"] = t.z1;
    d["z2"] = t.z2;
    d["q"] = t.q;
    d["n"] = t.n;
    d["alpha"] = t.alpha;
    d["critical"] = t.critical;
    d["reject"] = t.reject;
    return d;
  }, py::arg("c1"), py::arg("c2"), py::arg("n"), py::arg("alpha") = 0.05);

  m.def("power_fixture", [](double duration_s, std::uint64_t seed, double snr_db, double sample_rate_hz,
                            std::vector<int> harmonics, std::vector<double> amplitudes) {
    enf::synth::PowerSignalSpec spec;
    spec.duration_s = duration_s;
    spec.seed = seed;
    spec.snr_db = snr_db;
    spec.sample_rate_hz = sample_rate_hz;
    spec.harmonics = std::move(harmonics);
    spec.amplitudes = std::move(amplitudes);
    const auto fx = enf::synth::make_power_fixture(spec);
    const auto ref = fx.reference_log();
    return py::make_tuple(to_array({fx.signal.samples().begin(), fx.signal.samples().end()}),
                          fx.signal.sample_rate_hz(), to_array(ref.frequencies()));
  }, py::arg("duration_s") = 1800.0, py::arg("seed") = 2026, py::arg("snr_db") = 10.0,
     py::arg("sample_rate_hz") = 441.0, py::arg("harmonics") = std::vector<int>{3},
     py::arg("amplitudes") = std::vector<double>{1.0},
     "Returns (samples, sample_rate_hz, per-second ground truth).");

  m.def("bench", [](std::size_t order, std::size_t grid_size, std::size_t trials, std::uint64_t seed) {
    const auto r = enf::run_bench(order, grid_size, trials, seed);
    py::dict d;
    d["order"] = r.order;
    d["grid_size"] = r.grid_size;
    d["trials"] = r.trials;
    d["fast_median_s"] = r.fast_median_s;
    d["dense_median_s"] = r.dense_median_s;
    d["speedup"] = r.speedup;
    d["max_rel_diff"] = r.max_rel_diff;
    return d;
  }, py::arg("order") = 11, py::arg("grid_size") = 1764, py::arg("trials") = 100, py::arg("seed") = 1);
}
