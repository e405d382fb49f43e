#include "tmc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fft.hpp"
#include "tmc/errors.hpp"

namespace tmc {

void Geometry::validate() const {
  if (horizontal_offset < 0.0 || vertical_offset < 0.0)
    throw std::invalid_argument("geometry: offsets must be >= 0");
  if (coplanar_distance) {
    if (!(*coplanar_distance > 0.0))
      throw std::invalid_argument("geometry: coplanar distance must be > 0");
    if (horizontal_offset > 0.0 || vertical_offset > 0.0)
      throw std::invalid_argument("geometry: coplanar and offset placement are exclusive");
  } else if (horizontal_offset == 0.0 && vertical_offset == 0.0) {
    throw std::invalid_argument("geometry: no placement given");
  }
}

double separation(const Geometry& g) {
  g.validate();
  if (g.coplanar_distance) return *g.coplanar_distance;
  return std::hypot(g.horizontal_offset, g.vertical_offset);
}

void ChannelModel::validate() const {
  if (!(coupling_gain_ref > 0.0))
    throw std::invalid_argument("channel: coupling_gain_ref must be > 0");
  if (!(reference_separation > 0.0))
    throw std::invalid_argument("channel: reference_separation must be > 0");
  if (!(falloff_exponent > 0.0))
    throw std::invalid_argument("channel: falloff_exponent must be > 0");
  if (!(pole_frequency > 0.0))
    throw std::invalid_argument("channel: pole_frequency must be > 0");
  if (noise_rms < 0.0) throw std::invalid_argument("channel: noise_rms must be >= 0");
  if (material) material->validate();
}

namespace {

double geometric_gain(const ChannelModel& ch, const Geometry& g) {
  return ch.coupling_gain_ref *
         std::pow(ch.reference_separation / separation(g), ch.falloff_exponent);
}

// Shape of |H| with the geometric gain factored out; used by the fitter.
double gain_shape(const ChannelModel& ch, double frequency) {
  if (frequency == 0.0) return 0.0;
  double shape = 1.0;
  if (ch.derivative_coupling) {
    const double r = frequency / ch.pole_frequency;
    shape = r / std::sqrt(1.0 + r * r);
  }
  if (ch.material) shape *= attenuation_factor(*ch.material, std::abs(frequency));
  return shape;
}

}  // namespace

std::complex<double> transfer_function(const ChannelModel& ch, const Geometry& g,
                                       double frequency) {
  ch.validate();
  if (frequency < 0.0) return std::conj(transfer_function(ch, g, -frequency));
  if (frequency == 0.0) return {0.0, 0.0};

  std::complex<double> h(geometric_gain(ch, g), 0.0);
  if (ch.derivative_coupling) {
    const std::complex<double> jr(0.0, frequency / ch.pole_frequency);
    h *= jr / (1.0 + jr);
  }
  if (ch.material) h *= attenuation_factor(*ch.material, frequency);
  return h;
}

Waveform apply_channel(const Waveform& w, const ChannelModel& ch, const Geometry& g) {
  ch.validate();
  w.validate();
  if (w.empty()) throw std::invalid_argument("apply_channel: empty waveform");

  // Zero-pad to >= 2x length so the filter tail cannot wrap into the output.
  const std::size_t n = detail::next_pow2(2 * w.samples.size());
  auto bins = detail::rfft(w.samples, n);
  const double df = w.sample_rate / static_cast<double>(n);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    bins[k] *= transfer_function(ch, g, df * static_cast<double>(k));
  }
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples = detail::irfft(bins, n, w.samples.size());

  if (ch.noise_rms > 0.0) {
    std::mt19937_64 rng(ch.seed);
    std::normal_distribution<double> noise(0.0, ch.noise_rms);
    for (double& v : out.samples) v += noise(rng);
  }
  return out;
}

namespace {

struct FitEval {
  double gain = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

// Closed-form least-squares gain for a candidate pole frequency.
FitEval eval_pole(const std::vector<std::pair<double, double>>& points,
                  const ChannelModel& ch, double pole) {
  ChannelModel trial = ch;
  trial.pole_frequency = pole;
  double num = 0.0, den = 0.0;
  for (const auto& [f, y] : points) {
    const double h = gain_shape(trial, f);
    num += y * h;
    den += h * h;
  }
  FitEval ev;
  if (den <= 0.0) return ev;
  ev.gain = std::max(num / den, std::numeric_limits<double>::min());
  ev.sse = 0.0;
  for (const auto& [f, y] : points) {
    const double r = y - ev.gain * gain_shape(trial, f);
    ev.sse += r * r;
  }
  return ev;
}

}  // namespace

CalibrationResult calibrate(const std::vector<std::pair<double, double>>& gain_points,
                            const ChannelModel& ch) {
  if (gain_points.size() < 3) throw FitError("calibrate: need at least 3 points");
  double f_min = gain_points.front().first, f_max = f_min;
  for (const auto& [f, y] : gain_points) {
    if (!(f > 0.0)) throw FitError("calibrate: frequencies must be > 0");
    if (!(y >= 0.0) || !std::isfinite(y)) throw FitError("calibrate: bad gain value");
    f_min = std::min(f_min, f);
    f_max = std::max(f_max, f);
  }
  if (f_min == f_max) throw FitError("calibrate: all points share one frequency");

  // Coarse log grid over the pole, then golden-section refinement.
  const double lo = f_min / 50.0, hi = f_max * 4.0;
  const int grid = 96;
  double best_pole = lo;
  FitEval best;
  for (int i = 0; i < grid; ++i) {
    const double pole = lo * std::pow(hi / lo, static_cast<double>(i) / (grid - 1));
    const FitEval ev = eval_pole(gain_points, ch, pole);
    if (ev.sse < best.sse) {
      best = ev;
      best_pole = pole;
    }
  }

  const double step = std::pow(hi / lo, 1.0 / (grid - 1));
  double a = best_pole / step, b = best_pole * step;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  FitEval e1 = eval_pole(gain_points, ch, x1), e2 = eval_pole(gain_points, ch, x2);
  for (int it = 0; it < 80 && (b - a) > 1e-9 * best_pole; ++it) {
    if (e1.sse < e2.sse) {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - phi * (b - a);
      e1 = eval_pole(gain_points, ch, x1);
    } else {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + phi * (b - a);
      e2 = eval_pole(gain_points, ch, x2);
    }
  }
  const double refined = e1.sse < e2.sse ? x1 : x2;
  const FitEval ev = eval_pole(gain_points, ch, refined);
  if (ev.sse < best.sse) {
    best = ev;
    best_pole = refined;
  }

  CalibrationResult result;
  result.model = ch;
  result.model.pole_frequency = best_pole;
  result.model.coupling_gain_ref = best.gain;
  result.residual = std::sqrt(best.sse / static_cast<double>(gain_points.size()));
  return result;
}

}  // namespace tmc
