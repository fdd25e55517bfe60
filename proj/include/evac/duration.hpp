#ifndef EVAC_DURATION_HPP_
#define EVAC_DURATION_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "evac/errors.hpp"

namespace evac {

// Fixed-point simulation time in tenths of a minute. Link travel times,
// bus arrival countdowns and the step size all use this resolution, so
// event times and accumulated passenger-time stay exact integers.
class Duration {
 public:
  constexpr Duration() = default;

  static constexpr Duration from_tenths(std::int64_t t) { return Duration(t); }

  static Duration from_minutes(double minutes) {
    return Duration(static_cast<std::int64_t>(std::llround(minutes * 10.0)));
  }

  // Parses a decimal minute value ("5", "2.5", "0.1"). Finer than 0.1 is
  // rounded to the nearest tenth.
  static Duration parse(const std::string& text) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw ValueError("trailing characters in duration '" + text + "'");
      return from_minutes(v);
    } catch (const std::invalid_argument&) {
      throw ValueError("cannot parse duration '" + text + "'");
    } catch (const std::out_of_range&) {
      throw ValueError("duration out of range '" + text + "'");
    }
  }

  constexpr std::int64_t tenths() const { return tenths_; }
  constexpr double minutes() const { return static_cast<double>(tenths_) / 10.0; }

  // Exact decimal rendering: "5" or "2.5".
  std::string to_string() const {
    const std::int64_t whole = tenths_ / 10;
    const std::int64_t frac = std::llabs(tenths_ % 10);
    if (frac == 0) return std::to_string(whole);
    std::string s = (tenths_ < 0 && whole == 0) ? "-0" : std::to_string(whole);
    return s + "." + std::to_string(frac);
  }

  constexpr auto operator<=>(const Duration&) const = default;
  constexpr Duration operator+(Duration o) const { return Duration(tenths_ + o.tenths_); }
  constexpr Duration operator-(Duration o) const { return Duration(tenths_ - o.tenths_); }
  constexpr Duration& operator+=(Duration o) { tenths_ += o.tenths_; return *this; }
  constexpr Duration& operator-=(Duration o) { tenths_ -= o.tenths_; return *this; }

 private:
  explicit constexpr Duration(std::int64_t t) : tenths_(t) {}
  std::int64_t tenths_ = 0;
};

}  // namespace evac

#endif  // EVAC_DURATION_HPP_
