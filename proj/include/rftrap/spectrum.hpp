#pragma once

#include <cstddef>
#include <vector>

#include "rftrap/dynamics.hpp"

namespace rftrap::dynamics {

enum class Axis { X, Y, Z };

struct SpectrumOptions {
  double min_periods = 50.0;          // of the dominant line
  double min_samples_per_rf = 16.0;   // checked when the trajectory has a trap
};

/// One-sided Hann-windowed magnitude spectrum. `power` is normalised so
/// that a pure cosine of amplitude A gives power A^2 at its bin.
struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<double> power;
  double resolution_hz = 0.0;
};

struct Peak {
  double freq_hz;
  double power;
  double amplitude;  // sqrt(power)
};

// Throws TooShort if the sampling or duration preconditions fail.
Spectrum motional_spectrum(const Trajectory& trajectory, Axis axis = Axis::X,
                           const SpectrumOptions& options = {});

// Local maxima sorted by descending power, positions refined by a parabola
// through the log-power of the three bins around each maximum.
std::vector<Peak> find_peaks(const Spectrum& spectrum, std::size_t max_peaks,
                             double min_relative_power = 1e-10);

// Strongest peak within [f_lo, f_hi]; throws std::out_of_range if none.
Peak peak_near(const Spectrum& spectrum, double f_lo, double f_hi);

// Hann-weighted projection amplitude of one coordinate at `freq_hz`.
double amplitude_at(const Trajectory& trajectory, Axis axis, double freq_hz);

}  // namespace rftrap::dynamics
