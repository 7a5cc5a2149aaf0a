#include "eprb/dataset_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eprb/rng.hpp"

namespace eprb {

Histogram Histogram::centered(double bin_width, double range) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
  if (!(range > 0.0)) throw std::invalid_argument("range must be > 0");
  const auto half = static_cast<std::size_t>(std::floor(range / bin_width));
  Histogram h;
  h.bin_width = bin_width;
  h.origin = -static_cast<double>(half) * bin_width;
  h.counts.assign(2 * half + 1, 0);
  return h;
}

void Histogram::add(double value) {
  const double pos = std::floor((value - origin) / bin_width + 0.5);
  if (pos < 0.0) {
    ++underflow;
  } else if (pos >= static_cast<double>(counts.size())) {
    ++overflow;
  } else {
    ++counts[static_cast<std::size_t>(pos)];
  }
}

std::uint64_t Histogram::in_range() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::vector<double> Histogram::normalized() const {
  std::vector<double> out(counts.size(), 0.0);
  const auto peak = counts.empty()
                        ? std::uint64_t{0}
                        : *std::max_element(counts.begin(), counts.end());
  if (peak == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(peak);
  }
  return out;
}

std::size_t Histogram::peak_bin() const {
  std::size_t best = counts.size();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (best == counts.size() || counts[i] > counts[best]) {
      best = i;
      continue;
    }
    if (counts[i] < counts[best]) continue;
    const double ci = center(i), cb = center(best);
    if (std::abs(ci) < std::abs(cb) ||
        (std::abs(ci) == std::abs(cb) && ci < cb)) {
      best = i;
    }
  }
  if (best == counts.size()) throw std::domain_error("histogram is empty");
  return best;
}

Histogram time_diff_histogram(const RunData& run1, const RunData& run2,
                              double bin_width, double range) {
  if (!run1.is_time_sorted() || !run2.is_time_sorted()) {
    throw std::invalid_argument("time_diff_histogram needs time-sorted runs");
  }
  auto hist = Histogram::centered(bin_width, range);
  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  std::size_t lo = 0;
  for (const auto& a : e1) {
    while (lo < e2.size() && a.time_tag - e2[lo].time_tag > range) ++lo;
    for (std::size_t m = lo; m < e2.size(); ++m) {
      const double dt = a.time_tag - e2[m].time_tag;
      if (dt < -range) break;
      hist.add(dt);
    }
  }
  return hist;
}

double optimize_delta(const RunData& run1, const RunData& run2,
                      double bin_width, double range) {
  const auto hist = time_diff_histogram(run1, run2, bin_width, range);
  return hist.center(hist.peak_bin());
}

namespace {

void check_windows(const std::vector<double>& windows) {
  if (windows.empty()) throw std::invalid_argument("window list is empty");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!(windows[i] > 0.0)) {
      throw std::invalid_argument("windows must be positive");
    }
    if (i > 0 && windows[i] < windows[i - 1]) {
      throw std::invalid_argument("windows must be sorted ascending");
    }
  }
}

ScanPoint scan_point(double window, const CoincidenceTable& table) {
  const auto s = smax(correlations(table));
  return {window, s.s_value, s.max_abs_s, table.total()};
}

}  // namespace

std::vector<ScanPoint> scan_smax_vs_window(const RunData& run1,
                                           const RunData& run2, double delta,
                                           const std::vector<double>& windows,
                                           MatchMode mode) {
  check_windows(windows);
  std::vector<ScanPoint> out;
  out.reserve(windows.size());
  for (double w : windows) {
    out.push_back(scan_point(w, count_windowed(run1, run2, w, delta, mode)));
  }
  return out;
}

std::vector<ScanPoint> scan_smax_vs_window_paired(
    const RunData& run1, const RunData& run2, double tau,
    const std::vector<double>& windows) {
  check_windows(windows);
  std::vector<ScanPoint> out;
  out.reserve(windows.size());
  for (double w : windows) {
    out.push_back(scan_point(w, count_paired(run1, run2, tau, w)));
  }
  return out;
}

Histogram delay_histogram_by_setting(const RunData& run1, const RunData& run2,
                                     double delta, double window,
                                     std::uint32_t m, std::uint32_t m_prime,
                                     Outcome x, Outcome y, double bin_width) {
  if (m < 1 || m > run1.setting_count() || m_prime < 1 ||
      m_prime > run2.setting_count()) {
    throw std::invalid_argument("setting index outside the runs' tables");
  }
  auto hist = Histogram::centered(bin_width, window);
  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  std::uint64_t selected = 0;
  for (const auto& p : match_windowed(run1, run2, window, delta)) {
    const auto& a = e1[p.first];
    const auto& b = e2[p.second];
    if (a.setting_index != m || b.setting_index != m_prime ||
        a.outcome != x || b.outcome != y) {
      continue;
    }
    hist.add((a.time_tag - b.time_tag) - delta);
    ++selected;
  }
  if (selected == 0) {
    throw std::domain_error("no coincidences for the selected settings");
  }
  return hist;
}

StationRuns build_fixture(const FixtureSpec& spec, unsigned threads) {
  if (!(spec.mean_interarrival > 0.0)) {
    throw std::invalid_argument("mean_interarrival must be > 0");
  }
  if (!std::isfinite(spec.delta_injected)) {
    throw std::invalid_argument("delta_injected must be finite");
  }
  const auto runs = run_simulation(spec.sim, threads);
  const auto& d1 = runs.station_1.events();
  const auto& d2 = runs.station_2.events();

  // Offset keeps station-2 tags non-negative for positive shifts.
  RngStream clock(spec.sim.seed, StreamId::arrival_clock);
  double arrival = std::max(0.0, spec.delta_injected);
  std::vector<StationEvent> ev1 = d1, ev2 = d2;
  for (std::size_t n = 0; n < ev1.size(); ++n) {
    arrival += -spec.mean_interarrival * std::log1p(-clock.next_double());
    ev1[n].time_tag = arrival + d1[n].time_tag;
    ev2[n].time_tag = arrival + d2[n].time_tag - spec.delta_injected;
  }
  RunData r1(1, runs.station_1.settings(), std::move(ev1), spec.unit);
  RunData r2(2, runs.station_2.settings(), std::move(ev2), spec.unit);
  return {r1.sorted_by_time(), r2.sorted_by_time()};
}

StationRuns make_fixture(const FixtureSpec& spec, const std::string& out1,
                         const std::string& out2, FileFormat format,
                         unsigned threads) {
  auto runs = build_fixture(spec, threads);
  write_timetags(out1, runs.station_1, EventOrder::time, format);
  write_timetags(out2, runs.station_2, EventOrder::time, format);
  return runs;
}

}  // namespace eprb
