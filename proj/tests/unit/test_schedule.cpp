#include <random>

#include "doctest.h"
#include "mobgen/errors.hpp"
#include "mobgen/schedule.hpp"

using namespace mobgen;

namespace {

const DayClock kClock{48, 30.0};

int at(const char* hhmm) { return kClock.step_of_minutes(parse_hhmm(hhmm)); }

RampSchedule example_inward() {
  return RampSchedule(1.0, {{at("06:00"), at("11:00"), 5.0}, {at("15:00"), at("20:00"), 1.0}});
}

std::string error_of(const RampSchedule& s) {
  try {
    s.validate(kClock);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("morning inward ramp example") {
  const RampSchedule s = example_inward();
  CHECK_NOTHROW(s.validate(kClock));
  CHECK(s.eval(at("11:00"), kClock) == 5.0);
  CHECK(s.eval(at("13:00"), kClock) == 5.0);
  CHECK(s.eval(at("20:00"), kClock) == 1.0);
  CHECK(s.eval(at("08:30"), kClock) == doctest::Approx(3.0));
  CHECK(s.eval(at("06:00"), kClock) == 1.0);
  CHECK(s.eval(at("03:00"), kClock) == 1.0);
  CHECK(s.eval(at("17:30"), kClock) == doctest::Approx(3.0));
  CHECK(s.eval(at("23:30"), kClock) == 1.0);
}

TEST_CASE("empty ramp list holds the baseline") {
  const RampSchedule s(2.5);
  for (int t = 0; t < 48; ++t) CHECK(s.eval(t, kClock) == 2.5);
  CHECK(RampSchedule::constant(0.7).eval(13, kClock) == 0.7);
}

TEST_CASE("clock times snap to step boundaries") {
  CHECK(parse_hhmm("06:00") == 360.0);
  CHECK(parse_hhmm("24:00") == 1440.0);
  CHECK(at("09:00") == 18);
  CHECK(at("24:00") == 48);
  CHECK(at("08:14") == 16);
  CHECK(at("08:16") == 17);
  CHECK(format_hhmm(18 * 30.0) == "09:00");
  for (const char* bad : {"9", "25:00", "24:30", "10:60", "ab:cd", "-1:00", "10:5x"})
    CHECK_THROWS_AS(parse_hhmm(bad), ConfigError);
}

TEST_CASE("clock validation") {
  CHECK_NOTHROW(DayClock{48, 30.0}.validate());
  CHECK_NOTHROW(DayClock{96, 15.0}.validate());
  CHECK_THROWS_AS((DayClock{48, 20.0}.validate()), ConfigError);
  CHECK_THROWS_AS((DayClock{0, 30.0}.validate()), ConfigError);
  CHECK(kClock.step_seconds() == 1800.0);
}

TEST_CASE("validation names the offending ramps") {
  const RampSchedule overlap(1.0, {{at("06:00"), at("09:00"), 2.0}, {at("08:00"), at("10:00"), 1.0}});
  const std::string msg = error_of(overlap);
  CHECK(msg.find("(06:00, 09:00, 2)") != std::string::npos);
  CHECK(msg.find("(08:00, 10:00, 1)") != std::string::npos);

  CHECK(error_of(RampSchedule(1.0, {{at("09:00"), at("09:00"), 1.0}})).find("before it ends") !=
        std::string::npos);
  CHECK(error_of(RampSchedule(1.0, {{at("06:00"), 60, 1.0}})).find("outside one day") != std::string::npos);
  CHECK(error_of(RampSchedule(1.0, {{at("06:00"), at("07:00"), -1.0}})).find("non-positive") !=
        std::string::npos);
  CHECK(error_of(RampSchedule(0.0)).find("baseline") != std::string::npos);
  CHECK(error_of(RampSchedule(1.0, {{at("06:00"), at("07:00"), 2.0}})).find("does not close") !=
        std::string::npos);
  // Touching ramps are allowed.
  CHECK(error_of(RampSchedule(1.0, {{at("06:00"), at("07:00"), 2.0}, {at("07:00"), at("08:00"), 1.0}})).empty());
}

TEST_CASE("scaled multiplies every value") {
  const RampSchedule s = example_inward().scaled(10.0);
  for (int t = 0; t < 48; ++t) CHECK(s.eval(t, kClock) == doctest::Approx(10.0 * example_inward().eval(t, kClock)));
}

TEST_CASE("random schedules: positivity, periodicity, continuity at ramp ends") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(0.1, 8.0);
  for (int trial = 0; trial < 300; ++trial) {
    // Random sorted, non-overlapping ramps closing on the baseline.
    const double base = val(rng);
    std::vector<int> cuts;
    const int k = static_cast<int>(rng() % 4) + 1;
    while (static_cast<int>(cuts.size()) < 2 * k) {
      const int c = static_cast<int>(rng() % 49);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Ramp> ramps;
    for (int r = 0; r < k; ++r) ramps.push_back({cuts[2 * r], cuts[2 * r + 1], r + 1 == k ? base : val(rng)});
    const RampSchedule s(base, ramps);
    REQUIRE_NOTHROW(s.validate(kClock));

    for (int t = 0; t < 48; ++t) {
      const double v = s.eval(t, kClock);
      CHECK(v > 0.0);
      CHECK(s.eval(t + 48, kClock) == v);
      CHECK(s.eval(t - 48, kClock) == v);
    }
    double prev = base;
    for (const Ramp& r : ramps) {
      if (r.end < 48) CHECK(s.eval(r.end, kClock) == r.value);
      CHECK(s.eval(r.start, kClock) == doctest::Approx(prev));
      // Linear interpolation at every interior step.
      for (int t = r.start; t <= r.end && t < 48; ++t)
        CHECK(s.eval(t, kClock) ==
              doctest::Approx(prev + (r.value - prev) * (t - r.start) / double(r.end - r.start)));
      prev = r.value;
    }
  }
}

}  // TEST_SUITE
