#include "eprb/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace eprb {

namespace {

double station_argument(double xi, double gamma, int station) {
  return xi - gamma + (station == 2 ? 0.5 * kPi : 0.0);
}

void check_station(int station) {
  if (station != 1 && station != 2) {
    throw InvariantError("station must be 1 or 2");
  }
}

std::vector<double> draw_angle_table(std::uint64_t seed, StreamId stream,
                                     std::uint32_t m) {
  RngStream rng(seed, stream);
  std::vector<double> table(m);
  for (auto& a : table) a = emit_pair(rng).xi();
  return table;
}

}  // namespace

EmissionRecord emit_pair(RngStream& rng) {
  double xi = kTwoPi * rng.next_double();
  // Rounding can land exactly on 2pi.
  if (xi >= kTwoPi) xi = std::nextafter(kTwoPi, 0.0);
  return EmissionRecord(xi);
}

std::pair<std::uint32_t, std::uint32_t> select_settings(RngStream& rng_a,
                                                        RngStream& rng_b,
                                                        std::uint32_t m) {
  if (m < 1) throw InvariantError("select_settings needs M >= 1");
  const auto first = rng_a.next_index(m);
  const auto second = rng_b.next_index(m);
  return {first, second};
}

Outcome detect(double xi, double gamma, int station) {
  check_station(station);
  return std::cos(2.0 * station_argument(xi, gamma, station)) > 0.0
             ? Outcome::plus
             : Outcome::minus;
}

double delay_scale(double xi, double gamma, int station, double d, double t0) {
  check_station(station);
  if (d == 0.0) return t0;
  const double s = std::abs(std::sin(2.0 * station_argument(xi, gamma, station)));
  return t0 * std::pow(s, d);
}

double draw_time_tag(double scale, RngStream& rng) {
  return scale * rng.next_double();
}

std::pair<std::vector<double>, std::vector<double>> resolve_settings(
    const SimConfig& cfg) {
  auto s1 = cfg.settings_1 ? *cfg.settings_1
                           : draw_angle_table(cfg.seed, StreamId::angle_table_1,
                                              cfg.m_settings);
  auto s2 = cfg.settings_2 ? *cfg.settings_2
                           : draw_angle_table(cfg.seed, StreamId::angle_table_2,
                                              cfg.m_settings);
  return {std::move(s1), std::move(s2)};
}

StationRuns simulate_range(const SimConfig& cfg,
                           const std::vector<double>& settings_1,
                           const std::vector<double>& settings_2,
                           std::uint64_t begin, std::uint64_t end) {
  std::vector<StationEvent> ev1, ev2;
  ev1.reserve(end - begin);
  ev2.reserve(end - begin);
  const auto m = static_cast<std::uint32_t>(settings_1.size());
  const auto m2 = static_cast<std::uint32_t>(settings_2.size());
  const double d = cfg.delay_exponent;
  const double t0 = cfg.t0_max_delay;

  for (std::uint64_t n = begin; n < end; ++n) {
    RngStream source(cfg.seed, StreamId::emission, n);
    RngStream pick_1(cfg.seed, StreamId::setting_1, n);
    RngStream pick_2(cfg.seed, StreamId::setting_2, n);
    RngStream clock_1(cfg.seed, StreamId::delay_1, n);
    RngStream clock_2(cfg.seed, StreamId::delay_2, n);

    const double xi = emit_pair(source).xi();
    const std::uint32_t m_1 = pick_1.next_index(m);
    const std::uint32_t m_2 = pick_2.next_index(m2);

    const double gamma_1 = settings_1[m_1 - 1];
    const double gamma_2 = settings_2[m_2 - 1];

    ev1.push_back({draw_time_tag(delay_scale(xi, gamma_1, 1, d, t0), clock_1),
                   m_1, detect(xi, gamma_1, 1)});
    ev2.push_back({draw_time_tag(delay_scale(xi, gamma_2, 2, d, t0), clock_2),
                   m_2, detect(xi, gamma_2, 2)});
  }
  return {RunData(1, settings_1, std::move(ev1), TimeUnit::t0),
          RunData(2, settings_2, std::move(ev2), TimeUnit::t0)};
}

StationRuns run_simulation(const SimConfig& raw, unsigned threads) {
  const SimConfig cfg = validate_config(raw);
  const auto [settings_1, settings_2] = resolve_settings(cfg);
  const std::uint64_t n = cfg.n_events;

  threads = std::max(1u, threads);
  if (threads == 1 || n < 4096) {
    return simulate_range(cfg, settings_1, settings_2, 0, n);
  }

  std::vector<std::optional<StationRuns>> parts(threads);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = n * w / threads;
    const std::uint64_t hi = n * (w + 1) / threads;
    workers.emplace_back([&, w, lo, hi] {
      parts[w] = simulate_range(cfg, settings_1, settings_2, lo, hi);
    });
  }
  for (auto& t : workers) t.join();

  std::vector<StationEvent> ev1, ev2;
  ev1.reserve(n);
  ev2.reserve(n);
  for (const auto& p : parts) {
    ev1.insert(ev1.end(), p->station_1.events().begin(),
               p->station_1.events().end());
    ev2.insert(ev2.end(), p->station_2.events().begin(),
               p->station_2.events().end());
  }
  return {RunData(1, settings_1, std::move(ev1), TimeUnit::t0),
          RunData(2, settings_2, std::move(ev2), TimeUnit::t0)};
}

}  // namespace eprb
