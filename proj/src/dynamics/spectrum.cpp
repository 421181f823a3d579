#include "rftrap/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "rftrap/constants.hpp"
#include "rftrap/error.hpp"

namespace rftrap::dynamics {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!in_ || !out_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(),
                                 FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_.get(); }
  std::complex<double> output(std::size_t i) const {
    return {out_.get()[i][0], out_.get()[i][1]};
  }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwDeleter> in_;
  std::unique_ptr<fftw_complex, FftwDeleter> out_;
  fftw_plan plan_;
};

double coordinate(const PhaseState& p, Axis axis) {
  switch (axis) {
    case Axis::X: return p.x;
    case Axis::Y: return p.y;
    case Axis::Z: return p.z;
  }
  return 0.0;
}

double hann(std::size_t i, std::size_t n) {
  return 0.5 - 0.5 * std::cos(2.0 * constants::pi * static_cast<double>(i) /
                              static_cast<double>(n - 1));
}

}  // namespace

Spectrum motional_spectrum(const Trajectory& traj, Axis axis,
                           const SpectrumOptions& options) {
  const std::size_t n = traj.samples.size();
  if (n < 16) throw TooShort("too short: fewer than 16 samples");
  const double dt = traj.dt_sample;
  if (traj.meta) {
    const double period = 2.0 * constants::pi / traj.meta->trap.rf_omega();
    if (period / dt < options.min_samples_per_rf - 1e-9) {
      std::ostringstream msg;
      msg << "too short: " << period / dt << " samples per RF period (need "
          << options.min_samples_per_rf << ")";
      throw TooShort(msg.str());
    }
  }

  RealFft fft(n);
  double mean = 0.0;
  for (const auto& p : traj.samples) mean += coordinate(p, axis);
  mean /= static_cast<double>(n);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = hann(i, n);
    wsum += w;
    fft.input()[i] = w * (coordinate(traj.samples[i], axis) - mean);
  }
  fft.execute();

  Spectrum s;
  const std::size_t nf = n / 2 + 1;
  s.resolution_hz = 1.0 / (static_cast<double>(n) * dt);
  s.freq_hz.resize(nf);
  s.power.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    s.freq_hz[i] = static_cast<double>(i) * s.resolution_hz;
    const double amp = 2.0 * std::abs(fft.output(i)) / wsum;
    s.power[i] = amp * amp;
  }

  const auto peaks = find_peaks(s, 1);
  if (peaks.empty()) throw TooShort("too short: no spectral line found");
  const double periods = peaks.front().freq_hz * static_cast<double>(n) * dt;
  if (periods < options.min_periods) {
    std::ostringstream msg;
    msg << "too short: " << periods << " periods of the dominant line (need "
        << options.min_periods << ")";
    throw TooShort(msg.str());
  }
  return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, std::size_t max_peaks,
                             double min_relative_power) {
  std::vector<Peak> peaks;
  const std::size_t nf = s.power.size();
  if (nf < 3) return peaks;
  const double pmax = *std::max_element(s.power.begin() + 1, s.power.end());
  if (!(pmax > 0.0)) return peaks;
  for (std::size_t i = 1; i + 1 < nf; ++i) {
    const double p = s.power[i];
    if (!(p > s.power[i - 1] && p >= s.power[i + 1])) continue;
    if (p < min_relative_power * pmax) continue;
    const double lm = std::log(std::max(s.power[i - 1], 1e-300));
    const double l0 = std::log(p);
    const double lp = std::log(std::max(s.power[i + 1], 1e-300));
    const double denom = lm - 2.0 * l0 + lp;
    double delta = 0.0;
    double lpeak = l0;
    if (denom < 0.0) {
      delta = std::clamp(0.5 * (lm - lp) / denom, -0.5, 0.5);
      lpeak = l0 - 0.25 * (lm - lp) * delta;
    }
    const double power = std::exp(lpeak);
    peaks.push_back({(static_cast<double>(i) + delta) * s.resolution_hz, power,
                     std::sqrt(power)});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.power > b.power; });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
  return peaks;
}

Peak peak_near(const Spectrum& s, double f_lo, double f_hi) {
  for (const Peak& p : find_peaks(s, s.power.size(), 0.0))
    if (p.freq_hz >= f_lo && p.freq_hz <= f_hi) return p;
  throw std::out_of_range("peak_near: no spectral line in range");
}

double amplitude_at(const Trajectory& traj, Axis axis, double freq_hz) {
  const std::size_t n = traj.samples.size();
  if (n < 3) throw TooShort("too short: fewer than 3 samples");
  std::complex<double> acc{0.0, 0.0};
  double wsum = 0.0;
  const double t0 = traj.samples.front().t;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = hann(i, n);
    const double phase =
        -2.0 * constants::pi * freq_hz * (traj.samples[i].t - t0);
    acc += w * coordinate(traj.samples[i], axis) *
           std::complex<double>(std::cos(phase), std::sin(phase));
    wsum += w;
  }
  return 2.0 * std::abs(acc) / wsum;
}

}  // namespace rftrap::dynamics
