#include "rftrap/cli/quantity.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rftrap/constants.hpp"

namespace rftrap::cli {

namespace {

using Entry = std::pair<std::string_view, double>;

struct Table {
  Dimension dim;
  std::string_view name;
  std::array<Entry, 6> units;
  std::size_t count;
};

constexpr double kU = constants::atomic_mass_unit;
constexpr double kE = constants::elementary_charge;

// Each dimension accepts a handful of units; the first one is the SI base.
constexpr std::array<Table, 10> kTables{{
    {Dimension::Dimensionless, "dimensionless", {{{"1", 1.0}, {"", 1.0}}}, 2},
    {Dimension::Length, "length", {{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3},
                                    {"um", 1e-6}, {"nm", 1e-9}}}, 5},
    {Dimension::Voltage, "voltage", {{{"V", 1.0}, {"mV", 1e-3}, {"kV", 1e3}}}, 3},
    {Dimension::Frequency, "frequency", {{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6},
                                          {"GHz", 1e9}}}, 4},
    {Dimension::Mass, "mass", {{{"kg", 1.0}, {"u", kU}, {"Da", kU}}}, 3},
    {Dimension::Charge, "charge", {{{"C", 1.0}, {"e", kE}}}, 2},
    {Dimension::Temperature, "temperature", {{{"K", 1.0}, {"mK", 1e-3},
                                              {"uK", 1e-6}}}, 3},
    {Dimension::LinearDensity, "linear density", {{{"/m", 1.0}, {"/cm", 1e2},
                                                   {"/mm", 1e3}}}, 3},
    {Dimension::Time, "time", {{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6},
                                {"ns", 1e-9}}}, 4},
    {Dimension::Velocity, "velocity", {{{"m/s", 1.0}, {"mm/s", 1e-3},
                                        {"km/s", 1e3}}}, 3},
}};

const Table& table(Dimension d) {
  for (const auto& t : kTables)
    if (t.dim == d) return t;
  throw std::logic_error("unknown dimension");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view dimension_name(Dimension d) { return table(d).name; }

double unit_factor(Dimension d, std::string_view unit) {
  const Table& t = table(d);
  unit = trim(unit);
  for (std::size_t i = 0; i < t.count; ++i)
    if (t.units[i].first == unit) return t.units[i].second;
  std::string accepted;
  for (std::size_t i = 0; i < t.count; ++i) {
    if (t.units[i].first.empty()) continue;
    if (!accepted.empty()) accepted += ", ";
    accepted += t.units[i].first;
  }
  if (unit.empty())
    throw std::invalid_argument("missing unit for " + std::string(t.name) +
                                " (use one of: " + accepted + ")");
  throw std::invalid_argument("unit '" + std::string(unit) + "' is not a " +
                              std::string(t.name) + " unit (use one of: " +
                              accepted + ")");
}

Quantity split_quantity(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || !std::isfinite(v))
    throw std::invalid_argument("expected a number with a unit, got '" +
                                std::string(text) + "'");
  return {v, std::string(trim(std::string_view(ptr, last - ptr)))};
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                               std::chars_format::general, 12);
  return std::string(buf.data(), r.ptr);
}

std::string format_exact(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace rftrap::cli
