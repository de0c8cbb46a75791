#include "mobgen/schedule.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "mobgen/errors.hpp"

namespace mobgen {
namespace {

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ramp_text(const Ramp& r, const DayClock& clock) {
  return "(" + format_hhmm(r.start * clock.step_minutes) + ", " +
         format_hhmm(r.end * clock.step_minutes) + ", " + num(r.value) + ")";
}

}  // namespace

void DayClock::validate() const {
  if (steps_per_day <= 0) throw ConfigError("clock steps_per_day must be positive");
  if (!(step_minutes > 0.0)) throw ConfigError("clock step_minutes must be positive");
  if (std::abs(steps_per_day * step_minutes - 1440.0) > 1e-9)
    throw ConfigError("clock steps_per_day * step_minutes must equal 1440");
}

int DayClock::step_of_minutes(double minutes) const {
  return static_cast<int>(std::lround(minutes / step_minutes));
}

double parse_hhmm(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("expected HH:MM, got '" + std::string(text) + "'");
  int h = -1;
  int m = -1;
  const auto hs = text.substr(0, colon);
  const auto ms = text.substr(colon + 1);
  auto r1 = std::from_chars(hs.data(), hs.data() + hs.size(), h);
  auto r2 = std::from_chars(ms.data(), ms.data() + ms.size(), m);
  if (r1.ec != std::errc{} || r1.ptr != hs.data() + hs.size() || r2.ec != std::errc{} ||
      r2.ptr != ms.data() + ms.size() || h < 0 || m < 0 || m >= 60 || h > 24 ||
      (h == 24 && m != 0))
    throw ConfigError("invalid clock time '" + std::string(text) + "'");
  return h * 60.0 + m;
}

std::string format_hhmm(double minutes) {
  const int total = static_cast<int>(std::lround(minutes));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", total / 60, total % 60);
  return buf;
}

RampSchedule::RampSchedule(double baseline, std::vector<Ramp> ramps)
    : baseline_(baseline), ramps_(std::move(ramps)) {}

void RampSchedule::validate(const DayClock& clock) const {
  if (!(baseline_ > 0.0)) throw ConfigError("schedule baseline must be positive");
  for (std::size_t k = 0; k < ramps_.size(); ++k) {
    const Ramp& r = ramps_[k];
    if (!(r.value > 0.0))
      throw ConfigError("schedule ramp " + ramp_text(r, clock) + " has a non-positive value");
    if (r.start >= r.end)
      throw ConfigError("schedule ramp " + ramp_text(r, clock) + " must start before it ends");
    if (r.start < 0 || r.end > clock.steps_per_day)
      throw ConfigError("schedule ramp " + ramp_text(r, clock) + " lies outside one day");
    if (k > 0 && r.start < ramps_[k - 1].end)
      throw ConfigError("schedule ramps " + ramp_text(ramps_[k - 1], clock) + " and " +
                        ramp_text(r, clock) + " overlap or are out of order");
  }
  if (!ramps_.empty() && ramps_.back().value != baseline_)
    throw ConfigError("schedule does not close: final ramp " + ramp_text(ramps_.back(), clock) +
                      " must return to the baseline " + num(baseline_));
}

double RampSchedule::eval(int t, const DayClock& clock) const {
  const int T = clock.steps_per_day;
  t = ((t % T) + T) % T;
  double current = baseline_;
  for (const Ramp& r : ramps_) {
    if (t < r.start) return current;
    if (t <= r.end) {
      const double frac = static_cast<double>(t - r.start) / static_cast<double>(r.end - r.start);
      return t == r.end ? r.value : current + (r.value - current) * frac;
    }
    current = r.value;
  }
  return current;
}

RampSchedule RampSchedule::scaled(double factor) const {
  std::vector<Ramp> ramps = ramps_;
  for (auto& r : ramps) r.value *= factor;
  return RampSchedule(baseline_ * factor, std::move(ramps));
}

}  // namespace mobgen
