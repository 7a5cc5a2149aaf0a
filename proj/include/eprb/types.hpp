#pragma once

// Domain types shared by the simulator and the analysis pipeline.
//
// Angles are radians everywhere in memory. Setting indices are 1-based, as
// recorded by the stations; containers are 0-based internally.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eprb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a value violates a documented invariant of a domain type.
class InvariantError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by validate_config with the first violated bound.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Outcome : std::int8_t { minus = -1, plus = +1 };

inline int to_int(Outcome x) { return static_cast<int>(x); }
Outcome outcome_from_int(int x);

enum class TimeUnit { ns, t0 };

std::string to_string(TimeUnit unit);
TimeUnit time_unit_from_string(const std::string& s);

double degrees_to_radians(double deg);
double radians_to_degrees(double rad);

/// Hidden polarization carried by both photons of one pair.
class EmissionRecord {
public:
  explicit EmissionRecord(double xi);
  double xi() const { return xi_; }

private:
  double xi_;
};

struct StationEvent {
  double time_tag = 0.0;
  std::uint32_t setting_index = 1;
  Outcome outcome = Outcome::plus;

  friend bool operator==(const StationEvent&, const StationEvent&) = default;
};

/// All detection records of one station plus its table of modulator angles.
class RunData {
public:
  RunData(int station_id, std::vector<double> settings,
          std::vector<StationEvent> events, TimeUnit unit = TimeUnit::t0);

  int station_id() const { return station_id_; }
  TimeUnit unit() const { return unit_; }
  const std::vector<double>& settings() const { return settings_; }
  std::size_t setting_count() const { return settings_.size(); }
  double setting_angle(std::uint32_t setting_index) const {
    return settings_.at(setting_index - 1);
  }
  const std::vector<StationEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  bool is_time_sorted() const;

  /// Copy with events stably ordered by time tag.
  RunData sorted_by_time() const;
  /// Copy with every time tag shifted by `offset` (must stay non-negative).
  RunData shifted(double offset) const;

  friend bool operator==(const RunData&, const RunData&) = default;

private:
  int station_id_;
  TimeUnit unit_;
  std::vector<double> settings_;
  std::vector<StationEvent> events_;
};

struct SimConfig {
  std::uint64_t n_events = 1'000'000;
  std::uint32_t m_settings = 20;
  double delay_exponent = 2.0;
  double t0_max_delay = 1.0;
  double tag_resolution = 0.00025;
  double window = 0.00025;
  std::uint64_t seed = 42;
  std::optional<std::vector<double>> settings_1;
  std::optional<std::vector<double>> settings_2;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Returns `cfg` unchanged, or throws ConfigError naming the first violated
/// bound.
SimConfig validate_config(const SimConfig& cfg);

/// C_xy(alpha_m, beta_m') for both outcome signs and every setting pair.
class CoincidenceTable {
public:
  CoincidenceTable(std::vector<double> settings_1,
                   std::vector<double> settings_2);

  std::size_t m1() const { return settings_1_.size(); }
  std::size_t m2() const { return settings_2_.size(); }
  const std::vector<double>& settings_1() const { return settings_1_; }
  const std::vector<double>& settings_2() const { return settings_2_; }

  std::uint64_t at(Outcome x, Outcome y, std::uint32_t m,
                   std::uint32_t m_prime) const {
    return counts_[index(x, y, m, m_prime)];
  }
  void increment(Outcome x, Outcome y, std::uint32_t m, std::uint32_t m_prime,
                 std::uint64_t by = 1) {
    counts_[index(x, y, m, m_prime)] += by;
  }

  std::uint64_t total() const;
  std::uint64_t pair_total(std::uint32_t m, std::uint32_t m_prime) const;

  /// Adds counts of a table built over the same settings.
  void merge(const CoincidenceTable& other);

  friend bool operator==(const CoincidenceTable&,
                         const CoincidenceTable&) = default;

private:
  std::size_t index(Outcome x, Outcome y, std::uint32_t m,
                    std::uint32_t m_prime) const;

  std::vector<double> settings_1_;
  std::vector<double> settings_2_;
  std::vector<std::uint64_t> counts_;
};

struct Averages {
  double e = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
};

struct CorrelationCell {
  std::uint64_t total = 0;
  // Empty when total == 0; zero is a legitimate correlation.
  std::optional<Averages> averages;

  bool defined() const { return averages.has_value(); }
};

class CorrelationMatrix {
public:
  CorrelationMatrix(std::vector<double> settings_1,
                    std::vector<double> settings_2,
                    std::vector<CorrelationCell> cells);

  std::size_t m1() const { return settings_1_.size(); }
  std::size_t m2() const { return settings_2_.size(); }
  const std::vector<double>& settings_1() const { return settings_1_; }
  const std::vector<double>& settings_2() const { return settings_2_; }

  const CorrelationCell& cell(std::uint32_t m, std::uint32_t m_prime) const;

  /// Station roles exchanged: cell (m', m) of the result is cell (m, m') here
  /// with E1 and E2 swapped.
  CorrelationMatrix transposed() const;

private:
  std::vector<double> settings_1_;
  std::vector<double> settings_2_;
  std::vector<CorrelationCell> cells_;
};

}  // namespace eprb
