#include "eprb/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eprb {

Outcome outcome_from_int(int x) {
  if (x == 1) return Outcome::plus;
  if (x == -1) return Outcome::minus;
  throw InvariantError("outcome must be +1 or -1, got " + std::to_string(x));
}

std::string to_string(TimeUnit unit) {
  return unit == TimeUnit::ns ? "ns" : "T0";
}

TimeUnit time_unit_from_string(const std::string& s) {
  if (s == "ns") return TimeUnit::ns;
  if (s == "T0") return TimeUnit::t0;
  throw InvariantError("unknown time unit '" + s + "' (expected ns or T0)");
}

double degrees_to_radians(double deg) { return deg * (kPi / 180.0); }
double radians_to_degrees(double rad) { return rad * (180.0 / kPi); }

EmissionRecord::EmissionRecord(double xi) : xi_(xi) {
  if (!(xi >= 0.0 && xi < kTwoPi)) {
    throw InvariantError("emission angle must lie in [0, 2pi)");
  }
}

RunData::RunData(int station_id, std::vector<double> settings,
                 std::vector<StationEvent> events, TimeUnit unit)
    : station_id_(station_id),
      unit_(unit),
      settings_(std::move(settings)),
      events_(std::move(events)) {
  if (station_id_ != 1 && station_id_ != 2) {
    throw InvariantError("station_id must be 1 or 2");
  }
  if (settings_.empty()) {
    throw InvariantError("settings table must be non-empty");
  }
  for (std::size_t n = 0; n < events_.size(); ++n) {
    const auto& ev = events_[n];
    if (ev.setting_index < 1 || ev.setting_index > settings_.size()) {
      std::ostringstream msg;
      msg << "event " << n + 1 << ": setting_index " << ev.setting_index
          << " outside [1, " << settings_.size() << "]";
      throw InvariantError(msg.str());
    }
    if (!(ev.time_tag >= 0.0) || !std::isfinite(ev.time_tag)) {
      throw InvariantError("event " + std::to_string(n + 1) +
                           ": time_tag must be finite and >= 0");
    }
    if (ev.outcome != Outcome::plus && ev.outcome != Outcome::minus) {
      throw InvariantError("event " + std::to_string(n + 1) +
                           ": outcome must be +1 or -1");
    }
  }
}

bool RunData::is_time_sorted() const {
  return std::is_sorted(events_.begin(), events_.end(),
                        [](const StationEvent& a, const StationEvent& b) {
                          return a.time_tag < b.time_tag;
                        });
}

RunData RunData::sorted_by_time() const {
  auto events = events_;
  std::stable_sort(events.begin(), events.end(),
                   [](const StationEvent& a, const StationEvent& b) {
                     return a.time_tag < b.time_tag;
                   });
  return RunData(station_id_, settings_, std::move(events), unit_);
}

RunData RunData::shifted(double offset) const {
  auto events = events_;
  for (auto& ev : events) ev.time_tag += offset;
  return RunData(station_id_, settings_, std::move(events), unit_);
}

SimConfig validate_config(const SimConfig& cfg) {
  if (cfg.n_events < 1) throw ConfigError("n_events must be >= 1");
  if (cfg.m_settings < 1) throw ConfigError("m_settings must be >= 1");
  if (!(cfg.delay_exponent >= 0.0) || !std::isfinite(cfg.delay_exponent)) {
    throw ConfigError("delay_exponent must be >= 0");
  }
  if (!(cfg.t0_max_delay > 0.0) || !std::isfinite(cfg.t0_max_delay)) {
    throw ConfigError("t0_max_delay must be > 0");
  }
  if (!(cfg.tag_resolution > 0.0)) {
    throw ConfigError("tag_resolution must be > 0");
  }
  if (!(cfg.tag_resolution < cfg.t0_max_delay)) {
    throw ConfigError("tag_resolution must be < t0_max_delay");
  }
  if (!(cfg.window >= cfg.tag_resolution) || !std::isfinite(cfg.window)) {
    throw ConfigError("window must be ≥ tag_resolution");
  }
  for (const auto* list : {&cfg.settings_1, &cfg.settings_2}) {
    if (!list->has_value()) continue;
    const char* name = list == &cfg.settings_1 ? "settings_1" : "settings_2";
    if ((*list)->size() != cfg.m_settings) {
      throw ConfigError(std::string(name) + " must have m_settings entries");
    }
    for (double a : **list) {
      if (!std::isfinite(a)) {
        throw ConfigError(std::string(name) + " contains a non-finite angle");
      }
    }
  }
  return cfg;
}

CoincidenceTable::CoincidenceTable(std::vector<double> settings_1,
                                   std::vector<double> settings_2)
    : settings_1_(std::move(settings_1)),
      settings_2_(std::move(settings_2)),
      counts_(4 * settings_1_.size() * settings_2_.size(), 0) {
  if (settings_1_.empty() || settings_2_.empty()) {
    throw InvariantError("coincidence table needs non-empty settings");
  }
}

std::size_t CoincidenceTable::index(Outcome x, Outcome y, std::uint32_t m,
                                    std::uint32_t m_prime) const {
  if (m < 1 || m > m1() || m_prime < 1 || m_prime > m2()) {
    throw std::out_of_range("setting index outside coincidence table");
  }
  const std::size_t xi = x == Outcome::plus ? 0 : 1;
  const std::size_t yi = y == Outcome::plus ? 0 : 1;
  return (((m - 1) * m2() + (m_prime - 1)) * 2 + xi) * 2 + yi;
}

std::uint64_t CoincidenceTable::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t CoincidenceTable::pair_total(std::uint32_t m,
                                           std::uint32_t m_prime) const {
  const std::size_t base = index(Outcome::plus, Outcome::plus, m, m_prime);
  return counts_[base] + counts_[base + 1] + counts_[base + 2] +
         counts_[base + 3];
}

void CoincidenceTable::merge(const CoincidenceTable& other) {
  if (other.settings_1_ != settings_1_ || other.settings_2_ != settings_2_) {
    throw InvariantError("cannot merge tables over different settings");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

CorrelationMatrix::CorrelationMatrix(std::vector<double> settings_1,
                                     std::vector<double> settings_2,
                                     std::vector<CorrelationCell> cells)
    : settings_1_(std::move(settings_1)),
      settings_2_(std::move(settings_2)),
      cells_(std::move(cells)) {
  if (cells_.size() != settings_1_.size() * settings_2_.size()) {
    throw InvariantError("correlation matrix shape mismatch");
  }
  for (const auto& c : cells_) {
    if (c.defined() != (c.total > 0)) {
      throw InvariantError("a cell is defined iff its total is positive");
    }
    if (c.defined()) {
      const auto& a = *c.averages;
      if (std::abs(a.e) > 1.0 || std::abs(a.e1) > 1.0 ||
          std::abs(a.e2) > 1.0) {
        throw InvariantError("correlation outside [-1, 1]");
      }
    }
  }
}

const CorrelationCell& CorrelationMatrix::cell(std::uint32_t m,
                                               std::uint32_t m_prime) const {
  if (m < 1 || m > m1() || m_prime < 1 || m_prime > m2()) {
    throw std::out_of_range("setting index outside correlation matrix");
  }
  return cells_[(m - 1) * m2() + (m_prime - 1)];
}

CorrelationMatrix CorrelationMatrix::transposed() const {
  std::vector<CorrelationCell> cells(cells_.size());
  for (std::uint32_t m = 1; m <= m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= m2(); ++mp) {
      CorrelationCell c = cell(m, mp);
      if (c.averages) std::swap(c.averages->e1, c.averages->e2);
      cells[(mp - 1) * m1() + (m - 1)] = c;
    }
  }
  return CorrelationMatrix(settings_2_, settings_1_, std::move(cells));
}

}  // namespace eprb
