#pragma once

#include <string>
#include <string_view>

namespace rftrap::cli {

enum class Dimension {
  Dimensionless,
  Length,
  Voltage,
  Frequency,  // cycles per second; converted to rad/s by the caller
  Mass,
  Charge,
  Temperature,
  LinearDensity,
  Time,
  Velocity,
};

std::string_view dimension_name(Dimension d);

/// A number with the unit it was written in.
struct Quantity {
  double value = 0.0;
  std::string unit;
};

// Factor taking `unit` to SI for dimension `d`; throws std::invalid_argument
// naming the accepted units when the unit does not fit.
double unit_factor(Dimension d, std::string_view unit);

// Splits "800 V", "1.6e4/mm" or "10MHz" into number and unit.
// Throws std::invalid_argument on malformed text.
Quantity split_quantity(std::string_view text);

// 12 significant digits, '.' decimal point, no locale.
std::string format_number(double v);

// Shortest text that parses back to exactly `v`.
std::string format_exact(double v);

// `v` rounded to 12 significant digits.
double round12(double v);

}  // namespace rftrap::cli
