#include "eprb/coincidence.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eprb {

namespace {

void require_aligned(const RunData& run1, const RunData& run2) {
  if (run1.size() != run2.size()) {
    throw std::invalid_argument(
        "index-paired counting needs runs of equal length (" +
        std::to_string(run1.size()) + " vs " + std::to_string(run2.size()) +
        ")");
  }
}

void require_sorted(const RunData& run, const char* which) {
  if (!run.is_time_sorted()) {
    throw std::invalid_argument(std::string(which) +
                                " is not sorted by time tag");
  }
}

CoincidenceTable empty_table(const RunData& run1, const RunData& run2) {
  return CoincidenceTable(run1.settings(), run2.settings());
}

void count_range(const RunData& run1, const RunData& run2, double tau,
                 std::int64_t k, std::size_t lo, std::size_t hi,
                 CoincidenceTable& out) {
  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  for (std::size_t n = lo; n < hi; ++n) {
    const auto k1 = discretize(e1[n].time_tag, tau);
    const auto k2 = discretize(e2[n].time_tag, tau);
    if (std::llabs(k1 - k2) < k) {
      out.increment(e1[n].outcome, e2[n].outcome, e1[n].setting_index,
                    e2[n].setting_index);
    }
  }
}

}  // namespace

std::int64_t discretize(double t, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("time tag must be >= 0");
  return static_cast<std::int64_t>(std::ceil(t / tau));
}

CoincidenceTable count_paired(const RunData& run1, const RunData& run2,
                              double tau, double window, unsigned threads) {
  require_aligned(run1, run2);
  if (!(window >= tau)) {
    throw std::invalid_argument("window must be >= tag resolution");
  }
  const std::int64_t k = discretize(window, tau);
  const std::size_t n = run1.size();

  auto table = empty_table(run1, run2);
  if (threads <= 1 || n < 4096) {
    count_range(run1, run2, tau, k, 0, n, table);
    return table;
  }
  std::vector<CoincidenceTable> partial(threads, table);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      count_range(run1, run2, tau, k, n * w / threads, n * (w + 1) / threads,
                  partial[w]);
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& p : partial) table.merge(p);
  return table;
}

CoincidenceTable count_bell_limit(const RunData& run1, const RunData& run2) {
  require_aligned(run1, run2);
  auto table = empty_table(run1, run2);
  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  for (std::size_t n = 0; n < e1.size(); ++n) {
    table.increment(e1[n].outcome, e2[n].outcome, e1[n].setting_index,
                    e2[n].setting_index);
  }
  return table;
}

std::vector<MatchedPair> match_windowed(const RunData& run1,
                                        const RunData& run2, double window,
                                        double delta, MatchMode mode) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be > 0");
  require_sorted(run1, "station 1 run");
  require_sorted(run2, "station 2 run");

  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  // diff(n, m) is non-increasing in m and non-decreasing in n for sorted runs.
  auto diff = [&](std::size_t n, std::size_t m) {
    return (e1[n].time_tag - e2[m].time_tag) - delta;
  };

  std::vector<MatchedPair> pairs;
  std::vector<char> used(e2.size(), 0);
  std::size_t lo = 0;
  for (std::size_t n = 0; n < e1.size(); ++n) {
    while (lo < e2.size() && diff(n, lo) >= window) ++lo;

    std::size_t best = e2.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t m = lo; m < e2.size(); ++m) {
      const double dt = diff(n, m);
      if (dt <= -window) break;
      if (mode == MatchMode::all_pairs) {
        pairs.push_back({n, m});
        continue;
      }
      if (used[m]) continue;
      if (std::abs(dt) < best_dist) {
        best_dist = std::abs(dt);
        best = m;
      }
    }
    if (mode == MatchMode::greedy && best < e2.size()) {
      used[best] = 1;
      pairs.push_back({n, best});
    }
  }
  return pairs;
}

CoincidenceTable tabulate(const RunData& run1, const RunData& run2,
                          const std::vector<MatchedPair>& pairs) {
  auto table = empty_table(run1, run2);
  const auto& e1 = run1.events();
  const auto& e2 = run2.events();
  for (const auto& p : pairs) {
    const auto& a = e1.at(p.first);
    const auto& b = e2.at(p.second);
    table.increment(a.outcome, b.outcome, a.setting_index, b.setting_index);
  }
  return table;
}

CoincidenceTable count_windowed(const RunData& run1, const RunData& run2,
                                double window, double delta, MatchMode mode) {
  return tabulate(run1, run2, match_windowed(run1, run2, window, delta, mode));
}

CorrelationMatrix correlations(const CoincidenceTable& table) {
  std::vector<CorrelationCell> cells;
  cells.reserve(table.m1() * table.m2());
  for (std::uint32_t m = 1; m <= table.m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= table.m2(); ++mp) {
      const auto pp = table.at(Outcome::plus, Outcome::plus, m, mp);
      const auto pm = table.at(Outcome::plus, Outcome::minus, m, mp);
      const auto mpl = table.at(Outcome::minus, Outcome::plus, m, mp);
      const auto mm = table.at(Outcome::minus, Outcome::minus, m, mp);
      CorrelationCell cell;
      cell.total = pp + pm + mpl + mm;
      if (cell.total > 0) {
        const double tot = static_cast<double>(cell.total);
        const auto signed_sum = [tot](double a, double b, double c, double d) {
          return (a + b - c - d) / tot;
        };
        cell.averages = Averages{
            signed_sum(pp, mm, pm, mpl),
            signed_sum(pp, pm, mpl, mm),
            signed_sum(pp, mpl, pm, mm),
        };
      }
      cells.push_back(cell);
    }
  }
  return CorrelationMatrix(table.settings_1(), table.settings_2(),
                           std::move(cells));
}

double chsh(const CorrelationMatrix& corr, const SettingQuad& q) {
  auto e = [&](std::uint32_t m, std::uint32_t mp) {
    const auto& cell = corr.cell(m, mp);
    if (!cell.defined()) {
      throw std::domain_error("correlation undefined at setting pair (" +
                              std::to_string(m) + ", " + std::to_string(mp) +
                              ")");
    }
    return cell.averages->e;
  };
  return e(q.a, q.c) - e(q.a, q.d) + e(q.b, q.c) + e(q.b, q.d);
}

ChshResult smax(const CorrelationMatrix& corr) {
  const std::size_t m1 = corr.m1();
  const std::size_t m2 = corr.m2();
  std::vector<double> e(m1 * m2, 0.0);
  std::vector<char> ok(m1 * m2, 0);
  for (std::uint32_t m = 1; m <= m1; ++m) {
    for (std::uint32_t mp = 1; mp <= m2; ++mp) {
      const auto& cell = corr.cell(m, mp);
      if (cell.defined()) {
        e[(m - 1) * m2 + mp - 1] = cell.averages->e;
        ok[(m - 1) * m2 + mp - 1] = 1;
      }
    }
  }

  ChshResult best;
  bool found = false;
  for (std::size_t a = 0; a < m1; ++a) {
    for (std::size_t b = 0; b < m1; ++b) {
      for (std::size_t c = 0; c < m2; ++c) {
        if (!ok[a * m2 + c] || !ok[b * m2 + c]) continue;
        for (std::size_t d = 0; d < m2; ++d) {
          if (!ok[a * m2 + d] || !ok[b * m2 + d]) continue;
          const double s =
              e[a * m2 + c] - e[a * m2 + d] + e[b * m2 + c] + e[b * m2 + d];
          const SettingQuad q{static_cast<std::uint32_t>(a + 1),
                              static_cast<std::uint32_t>(b + 1),
                              static_cast<std::uint32_t>(c + 1),
                              static_cast<std::uint32_t>(d + 1)};
          if (!found || s > best.s_value) {
            best.s_value = s;
            best.arg_settings = q;
          }
          if (!found || std::abs(s) > best.max_abs_s) {
            best.max_abs_s = std::abs(s);
            best.arg_abs_settings = q;
          }
          found = true;
        }
      }
    }
  }
  if (!found) {
    throw std::domain_error("no CHSH selection has four defined correlations");
  }
  return best;
}

}  // namespace eprb
