#include <gtest/gtest.h>

#include <vector>

#include "ddca/experiments.hpp"
#include "ddca/scenario.hpp"

using namespace ddca;

namespace {

std::vector<double> signal_times(const EventStream& s) {
  std::vector<double> out;
  for (const auto& sig : s.signals()) out.push_back(sig.time);
  return out;
}

EventStream signals_at(std::initializer_list<double> times) {
  EventStream s;
  s.events.emplace_back(AntigenEvent{0.0, "a"});
  for (double t : times) s.events.emplace_back(SignalInstance{t, 1.0, 1.0});
  s.events.emplace_back(AntigenEvent{10.0, "b"});
  std::stable_sort(s.events.begin(), s.events.end(), event_before);
  return s;
}

}  // namespace

TEST(Lcg, ReferenceSequence) {
  Lcg rng(1);
  EXPECT_EQ(rng.next(), 1ULL * 6364136223846793005ULL + 1442695040888963407ULL);
  Lcg zero(0);
  EXPECT_EQ(zero.next(), 1442695040888963407ULL);
  EXPECT_EQ(zero.uniform(), static_cast<double>((1442695040888963407ULL * 6364136223846793005ULL +
                                                 1442695040888963407ULL) >> 11) * 0x1.0p-53);
}

TEST(Scenario, SeededDeterminism) {
  const auto a = generate_scenario(portscan_default(1));
  const auto b = generate_scenario(portscan_default(1));
  const auto c = generate_scenario(portscan_default(2));
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(write_stream(a), write_stream(b));
  EXPECT_NE(a.events, c.events);
}

TEST(Scenario, DefaultShape) {
  const auto s = generate_scenario(portscan_default(1));
  const auto signals = s.signals();
  ASSERT_EQ(signals.size(), 38u);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    EXPECT_EQ(signals[i].time, static_cast<double>(i + 1));
    EXPECT_GE(signals[i].danger, 0.0);
    EXPECT_LE(signals[i].danger, 50.0);
  }
  EXPECT_TRUE(std::is_sorted(s.events.begin(), s.events.end(), event_before));
  EXPECT_GT(s.antigen_count(), 50000u);
  for (const auto& e : s.events) {
    if (const auto* a = std::get_if<AntigenEvent>(&e)) {
      if (a->antigen_type == "nmap" || a->antigen_type == "pts") {
        EXPECT_GE(a->time, 12.0);
        EXPECT_LE(a->time, 24.0);
      }
    }
  }
  // Written values survive the file format unchanged.
  EXPECT_EQ(parse_stream(write_stream(s)).stream.events, s.events);
}

TEST(Scenario, RejectsInvalidSpecs) {
  ScenarioSpec spec = portscan_default(1);
  spec.processes.clear();
  EXPECT_THROW(generate_scenario(spec), ConfigError);
  spec = portscan_default(1);
  spec.duration = 0.0;
  EXPECT_THROW(generate_scenario(spec), ConfigError);
  spec = portscan_default(1);
  spec.processes[0].active_end = 100.0;
  EXPECT_THROW(generate_scenario(spec), ConfigError);
}

TEST(Scenario, FullWindowAnomalyIsAlwaysMature) {
  ScenarioSpec spec = portscan_default(4);
  spec.scan_start = 0.0;
  spec.scan_end = spec.duration;
  spec.processes = {{"nmap", 50.0, 0.0, 38.0, ProcessRole::anomalous}, {"bash", 0.0, 0.0, 38.0, ProcessRole::normal}};
  const auto stream = generate_scenario(spec);
  const RunOutcome out = run_pipeline(stream, {});
  for (const auto& r : out.log.records) {
    if (!r.profile.empty()) {
      EXPECT_GT(r.k_value, 0.0);
    }
  }
  const auto* nmap = find_report(out.analysis, "nmap");
  ASSERT_NE(nmap, nullptr);
  EXPECT_EQ(nmap->mcav, 1.0);
}

TEST(Shift, ZeroIsIdentity) {
  const auto s = generate_scenario(portscan_default(1));
  const ShiftResult r = shift_signals(s, 0.0);
  EXPECT_EQ(r.stream.events, s.events);
  EXPECT_EQ(r.dropped, 0u);
}

TEST(Shift, DelayMovesSignalsOnly) {
  const ShiftResult r = shift_signals(signals_at({1.0, 2.0, 3.0}), 2.0);
  EXPECT_EQ(signal_times(r.stream), (std::vector<double>{3.0, 4.0, 5.0}));
  EXPECT_EQ(r.stream.antigen_count(), 2u);
  EXPECT_EQ(event_time(r.stream.events.front()), 0.0);
  EXPECT_EQ(event_time(r.stream.events.back()), 10.0);
}

TEST(Shift, AdvanceDropsNegativeTimes) {
  const auto s = generate_scenario(portscan_default(1));
  const ShiftResult r = shift_signals(s, -20.0);
  // 1..38 becomes -19..18; only strictly negative times are dropped, so t = 0 survives.
  EXPECT_EQ(r.dropped, 19u);
  const auto times = signal_times(r.stream);
  ASSERT_EQ(times.size(), 19u);
  EXPECT_EQ(times.front(), 0.0);
  EXPECT_EQ(times.back(), 18.0);
  EXPECT_EQ(r.stream.antigen_count(), s.antigen_count());
  EXPECT_TRUE(std::is_sorted(r.stream.events.begin(), r.stream.events.end(), event_before));
}

TEST(Shift, Composes) {
  const EventStream s = signals_at({1.0, 2.0, 3.0, 7.0});
  for (double a : {-1.0, 0.0, 2.0, 4.0}) {
    for (double b : {-1.0, 1.0, 3.0}) {
      const ShiftResult first = shift_signals(s, a);
      ASSERT_EQ(first.dropped, 0u);
      EXPECT_EQ(shift_signals(first.stream, b).stream.events, shift_signals(s, a + b).stream.events);
    }
  }
}
