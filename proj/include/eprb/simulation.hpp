#pragma once

// Event-by-event generator for the two-station polarization experiment.
//
// Per pair: the source draws xi; each station picks its modulator angle from
// its own table, fires D+ or D- by the sign rule and tags the event with a
// delay drawn from [0, T0 |sin 2(xi - gamma + (i-1) pi/2)|^d]. No quantity of
// one station enters the other station's computation.

#include <cstdint>
#include <utility>

#include "eprb/rng.hpp"
#include "eprb/types.hpp"

namespace eprb {

EmissionRecord emit_pair(RngStream& rng);

/// Returns (m, m'), each uniform on [1, M], from two independent streams.
std::pair<std::uint32_t, std::uint32_t> select_settings(RngStream& rng_a,
                                                        RngStream& rng_b,
                                                        std::uint32_t m);

/// sign(cos 2(xi - gamma + (station-1) pi/2)); a zero cosine yields -1.
Outcome detect(double xi, double gamma, int station);

/// T0 |sin 2(xi - gamma + (station-1) pi/2)|^d with 0^0 taken as 1.
double delay_scale(double xi, double gamma, int station, double d, double t0);

/// Uniform on [0, scale]; exactly 0 when scale is 0.
double draw_time_tag(double scale, RngStream& rng);

struct StationRuns {
  RunData station_1;
  RunData station_2;
};

/// Angle tables actually used by a config: the explicit lists, or M angles
/// drawn uniformly from [0, 2pi) on per-station streams.
std::pair<std::vector<double>, std::vector<double>> resolve_settings(
    const SimConfig& cfg);

/// Events [begin, end) of the run described by cfg, with the given tables.
/// Concatenating consecutive ranges reproduces the full run exactly.
StationRuns simulate_range(const SimConfig& cfg,
                           const std::vector<double>& settings_1,
                           const std::vector<double>& settings_2,
                           std::uint64_t begin, std::uint64_t end);

/// Full run of cfg.n_events pairs. Output is independent of `threads`.
StationRuns run_simulation(const SimConfig& cfg, unsigned threads = 1);

}  // namespace eprb
