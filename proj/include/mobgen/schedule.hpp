#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mobgen {

/// Discretization of one day into `steps_per_day` bins of `step_minutes`.
struct DayClock {
  int steps_per_day = 48;
  double step_minutes = 30.0;

  /// Throws ConfigError unless steps_per_day * step_minutes == 1440.
  void validate() const;
  double step_seconds() const { return step_minutes * 60.0; }
  /// Snaps a clock time in minutes to the nearest step boundary.
  int step_of_minutes(double minutes) const;
};

/// Parses "HH:MM" (00:00 .. 24:00) into minutes after midnight.
double parse_hhmm(std::string_view text);
std::string format_hhmm(double minutes);

struct Ramp {
  int start = 0;  // time-step index
  int end = 0;    // time-step index, > start
  double value = 1.0;
};

/// Piecewise-linear ramp-and-hold profile over one day: baseline until the
/// first ramp, linear from the current value to `value` across [start, end],
/// held afterwards until the next ramp.
class RampSchedule {
 public:
  RampSchedule() = default;
  explicit RampSchedule(double baseline, std::vector<Ramp> ramps = {});

  static RampSchedule constant(double value) { return RampSchedule(value); }

  double baseline() const { return baseline_; }
  const std::vector<Ramp>& ramps() const { return ramps_; }

  /// Throws ConfigError naming the offending ramp(s) when the schedule is not
  /// positive, sorted, non-overlapping, within [0, T], and closed (final value
  /// equals the baseline so that day boundaries are continuous).
  void validate(const DayClock& clock) const;

  /// Value at time-step t (taken modulo T).
  double eval(int t, const DayClock& clock) const;

  /// Same schedule with every value (baseline and ramp targets) multiplied.
  RampSchedule scaled(double factor) const;

 private:
  double baseline_ = 1.0;
  std::vector<Ramp> ramps_;
};

}  // namespace mobgen
