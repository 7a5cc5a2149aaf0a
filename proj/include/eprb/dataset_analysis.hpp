#pragma once

// Analysis of two-station time-tag recordings: time-difference histograms,
// clock-offset search, S_max against the coincidence window, per-setting
// delay distributions, and synthetic recordings with a known offset.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eprb/coincidence.hpp"
#include "eprb/simulation.hpp"
#include "eprb/timetag_io.hpp"
#include "eprb/types.hpp"

namespace eprb {

/// Fixed-width bins with centers at k * bin_width, so a difference of zero
/// sits on a bin center.
struct Histogram {
  double bin_width = 1.0;
  double origin = 0.0;  // center of bin 0
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  /// Bins centered at -J*w .. +J*w where J = floor(range / w).
  static Histogram centered(double bin_width, double range);

  double center(std::size_t i) const { return origin + bin_width * i; }
  void add(double value);
  std::uint64_t in_range() const;
  std::uint64_t samples() const { return in_range() + underflow + overflow; }
  /// Counts divided by the largest bin (all zero for an empty histogram).
  std::vector<double> normalized() const;
  /// Index of the largest bin; ties go to the smallest |center|, then the
  /// smaller center. Throws std::domain_error when every bin is empty.
  std::size_t peak_bin() const;
};

/// t1 - t2 for every pair of events within +-range of each other, found with
/// a sorted sweep. Both runs must be time sorted.
Histogram time_diff_histogram(const RunData& run1, const RunData& run2,
                              double bin_width, double range);

/// Center of the most populated time-difference bin: the offset that
/// maximizes coincidences. Throws std::domain_error on an empty histogram.
double optimize_delta(const RunData& run1, const RunData& run2,
                      double bin_width, double range);

struct ScanPoint {
  double window = 0.0;
  double s_max = 0.0;
  double max_abs_s = 0.0;
  std::uint64_t total_coincidences = 0;
};

/// Windowed matching with a fixed clock offset, one point per window.
std::vector<ScanPoint> scan_smax_vs_window(const RunData& run1,
                                           const RunData& run2, double delta,
                                           const std::vector<double>& windows,
                                           MatchMode mode = MatchMode::greedy);

/// Same scan for index-paired (simulated) runs using discretized tags.
std::vector<ScanPoint> scan_smax_vs_window_paired(
    const RunData& run1, const RunData& run2, double tau,
    const std::vector<double>& windows);

/// Histogram of t1 - t2 - delta over greedy windowed coincidences restricted
/// to settings (m, m') and the given outcome pair. Throws std::domain_error
/// if the selection holds no coincidence.
Histogram delay_histogram_by_setting(const RunData& run1, const RunData& run2,
                                     double delta, double window,
                                     std::uint32_t m, std::uint32_t m_prime,
                                     Outcome x, Outcome y, double bin_width);

struct FixtureSpec {
  SimConfig sim;
  double mean_interarrival = 30000.0;
  double delta_injected = 0.0;
  TimeUnit unit = TimeUnit::ns;
};

/// Simulated pairs placed on an exponential arrival clock. Station n's tag is
/// arrival + delay; station 2 is additionally moved by -delta_injected so
/// that t1 - t2 clusters at +delta_injected. Both runs are time sorted.
StationRuns build_fixture(const FixtureSpec& spec, unsigned threads = 1);

/// build_fixture written as two time-ordered files.
StationRuns make_fixture(const FixtureSpec& spec, const std::string& out1,
                         const std::string& out2,
                         FileFormat format = FileFormat::text,
                         unsigned threads = 1);

}  // namespace eprb
