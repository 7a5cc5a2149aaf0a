#pragma once

// Coincidence counting, correlation estimators and the CHSH combination.
//
// Three pairing rules are provided:
//   count_paired     events n of both stations, accepted iff their discretized
//                    tags differ by less than ceil(W / tau);
//   count_windowed   events matched purely by time, |t1 - t2 - delta| < W,
//                    for recordings that carry no pair index;
//   count_bell_limit every index pair, regardless of time tags.

#include <cstdint>
#include <vector>

#include "eprb/types.hpp"

namespace eprb {

/// Smallest integer k with k >= t / tau.
std::int64_t discretize(double t, double tau);

CoincidenceTable count_paired(const RunData& run1, const RunData& run2,
                              double tau, double window, unsigned threads = 1);

CoincidenceTable count_bell_limit(const RunData& run1, const RunData& run2);

enum class MatchMode {
  // Each event used at most once. Station-1 events are visited in time order
  // and take the closest unused station-2 event inside the window (earliest
  // on ties).
  greedy,
  // Every pair inside the window counts, events may repeat.
  all_pairs,
};

struct MatchedPair {
  std::size_t first;   // index into run1.events()
  std::size_t second;  // index into run2.events()

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// Pairs (n, m) with |t_n1 - t_m2 - delta| < window. Both runs must be time
/// sorted. Delta is the offset of the station-1 clock relative to station 2.
std::vector<MatchedPair> match_windowed(const RunData& run1,
                                        const RunData& run2, double window,
                                        double delta,
                                        MatchMode mode = MatchMode::greedy);

CoincidenceTable tabulate(const RunData& run1, const RunData& run2,
                          const std::vector<MatchedPair>& pairs);

CoincidenceTable count_windowed(const RunData& run1, const RunData& run2,
                                double window, double delta,
                                MatchMode mode = MatchMode::greedy);

CorrelationMatrix correlations(const CoincidenceTable& table);

/// Setting indices (1-based): a, b at station 1; c, d at station 2.
struct SettingQuad {
  std::uint32_t a = 1, b = 1, c = 1, d = 1;
  friend bool operator==(const SettingQuad&, const SettingQuad&) = default;
};

/// E(a,c) - E(a,d) + E(b,c) + E(b,d). Throws std::domain_error if any of the
/// four cells is undefined.
double chsh(const CorrelationMatrix& corr, const SettingQuad& q);

struct ChshResult {
  double s_value = 0.0;  // max of S as written
  SettingQuad arg_settings;
  double max_abs_s = 0.0;  // max of |S|
  SettingQuad arg_abs_settings;
};

/// Exhaustive maximization over every fully defined selection (O(M^4)).
/// Throws std::domain_error when no selection is fully defined. Ties keep the
/// lexicographically first (a, b, c, d).
ChshResult smax(const CorrelationMatrix& corr);

}  // namespace eprb
