#pragma once

// Reference implementations written without the sweep machinery of the
// library; used to check it on small inputs.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "eprb/coincidence.hpp"
#include "eprb/rng.hpp"
#include "eprb/types.hpp"

namespace oracle {

inline eprb::CoincidenceTable paired_all(const eprb::RunData& r1,
                                         const eprb::RunData& r2, double tau,
                                         double window) {
  eprb::CoincidenceTable t(r1.settings(), r2.settings());
  const long long k = static_cast<long long>(std::ceil(window / tau));
  for (std::size_t n = 0; n < r1.size(); ++n) {
    const auto& a = r1.events()[n];
    const auto& b = r2.events()[n];
    const long long ka = static_cast<long long>(std::ceil(a.time_tag / tau));
    const long long kb = static_cast<long long>(std::ceil(b.time_tag / tau));
    if (std::llabs(ka - kb) < k) {
      t.increment(a.outcome, b.outcome, a.setting_index, b.setting_index);
    }
  }
  return t;
}

// Full scan over station 2 for every station-1 event (time order), taking the
// closest unused partner; earliest index wins ties.
inline std::vector<eprb::MatchedPair> greedy_all_pairs(
    const eprb::RunData& r1, const eprb::RunData& r2, double window,
    double delta) {
  std::vector<eprb::MatchedPair> out;
  std::vector<bool> used(r2.size(), false);
  for (std::size_t n = 0; n < r1.size(); ++n) {
    std::size_t best = r2.size();
    double best_abs = 0;
    for (std::size_t m = 0; m < r2.size(); ++m) {
      if (used[m]) continue;
      const double d = std::abs((r1.events()[n].time_tag -
                                 r2.events()[m].time_tag) - delta);
      if (d >= window) continue;
      if (best == r2.size() || d < best_abs) {
        best = m;
        best_abs = d;
      }
    }
    if (best < r2.size()) {
      used[best] = true;
      out.push_back({n, best});
    }
  }
  return out;
}

inline std::vector<eprb::MatchedPair> literal_all_pairs(
    const eprb::RunData& r1, const eprb::RunData& r2, double window,
    double delta) {
  std::vector<eprb::MatchedPair> out;
  for (std::size_t n = 0; n < r1.size(); ++n) {
    for (std::size_t m = 0; m < r2.size(); ++m) {
      const double d = (r1.events()[n].time_tag - r2.events()[m].time_tag) - delta;
      if (std::abs(d) < window) out.push_back({n, m});
    }
  }
  return out;
}

inline eprb::CoincidenceTable tabulate(const eprb::RunData& r1,
                                       const eprb::RunData& r2,
                                       const std::vector<eprb::MatchedPair>& p) {
  eprb::CoincidenceTable t(r1.settings(), r2.settings());
  for (const auto& [n, m] : p) {
    const auto& a = r1.events()[n];
    const auto& b = r2.events()[m];
    t.increment(a.outcome, b.outcome, a.setting_index, b.setting_index);
  }
  return t;
}

inline double smax_abs(const eprb::CorrelationMatrix& c) {
  double best = -1;
  for (std::uint32_t a = 1; a <= c.m1(); ++a)
    for (std::uint32_t b = 1; b <= c.m1(); ++b)
      for (std::uint32_t x = 1; x <= c.m2(); ++x)
        for (std::uint32_t y = 1; y <= c.m2(); ++y) {
          const auto &ac = c.cell(a, x), &ad = c.cell(a, y), &bc = c.cell(b, x),
                     &bd = c.cell(b, y);
          if (!ac.defined() || !ad.defined() || !bc.defined() || !bd.defined())
            continue;
          const double s = ac.averages->e - ad.averages->e + bc.averages->e +
                           bd.averages->e;
          best = std::max(best, std::abs(s));
        }
  return best;
}

/// Random time-sorted run on a 1/1024 grid (exact arithmetic under integer
/// shifts), `m` settings.
inline eprb::RunData random_sorted_run(int station, std::size_t n,
                                       std::uint32_t m, double span,
                                       eprb::RngStream& rng) {
  std::vector<eprb::StationEvent> ev(n);
  for (auto& e : ev) {
    e.time_tag = std::floor(rng.next_double() * span * 1024.0) / 1024.0;
    e.setting_index = rng.next_index(m);
    e.outcome = rng.next_double() < 0.5 ? eprb::Outcome::plus : eprb::Outcome::minus;
  }
  std::vector<double> settings;
  for (std::uint32_t i = 0; i < m; ++i) settings.push_back(0.3 * i);
  return eprb::RunData(station, settings, std::move(ev)).sorted_by_time();
}

}  // namespace oracle
