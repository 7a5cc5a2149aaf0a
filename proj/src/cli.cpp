#include "eprb/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "eprb/coincidence.hpp"
#include "eprb/dataset_analysis.hpp"
#include "eprb/export.hpp"
#include "eprb/quantum_ref.hpp"
#include "eprb/simulation.hpp"
#include "eprb/svg_plot.hpp"
#include "eprb/timetag_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace eprb {

json sim_config_to_json(const SimConfig& cfg) {
  json j{{"n_events", cfg.n_events},
         {"m_settings", cfg.m_settings},
         {"delay_exponent", cfg.delay_exponent},
         {"t0_max_delay", cfg.t0_max_delay},
         {"tag_resolution", cfg.tag_resolution},
         {"window", cfg.window},
         {"seed", cfg.seed}};
  if (cfg.settings_1) j["settings_1_rad"] = *cfg.settings_1;
  if (cfg.settings_2) j["settings_2_rad"] = *cfg.settings_2;
  return j;
}

SimConfig sim_config_from_json(const json& j, SimConfig cfg) {
  if (j.contains("n_events")) cfg.n_events = j.at("n_events").get<std::uint64_t>();
  if (j.contains("m_settings")) cfg.m_settings = j.at("m_settings").get<std::uint32_t>();
  if (j.contains("delay_exponent")) cfg.delay_exponent = j.at("delay_exponent").get<double>();
  if (j.contains("t0_max_delay")) cfg.t0_max_delay = j.at("t0_max_delay").get<double>();
  if (j.contains("tag_resolution")) cfg.tag_resolution = j.at("tag_resolution").get<double>();
  if (j.contains("window")) cfg.window = j.at("window").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  for (int station : {1, 2}) {
    auto& target = station == 1 ? cfg.settings_1 : cfg.settings_2;
    const std::string base = "settings_" + std::to_string(station);
    if (j.contains(base + "_rad")) {
      target = j.at(base + "_rad").get<std::vector<double>>();
    } else if (j.contains(base + "_deg")) {
      std::vector<double> rad;
      for (double d : j.at(base + "_deg").get<std::vector<double>>()) {
        rad.push_back(degrees_to_radians(d));
      }
      target = std::move(rad);
    }
  }
  return cfg;
}

namespace cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  bool json_summary = false;
  bool svg = false;
  unsigned threads = 1;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "64-bit random seed");
  cmd->add_flag("--json", c.json_summary, "print a JSON summary on stdout");
  cmd->add_flag("--svg", c.svg, "also write an SVG figure where applicable");
  cmd->add_option("--threads", c.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", c.out_dir, "output directory");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number '") + item + "' in " + what);
    }
  }
  return out;
}

std::vector<double> degree_list(const std::string& text, const char* what) {
  auto values = parse_list(text, what);
  for (auto& v : values) v = degrees_to_radians(v);
  return values;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json j = json::parse(in);
  // A manifest nests the reproducible configuration.
  return j.contains("config") ? j.at("config") : j;
}

fs::path prepare_dir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

template <class Writer>
std::string write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return path.string();
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& config, std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& outputs,
                    std::chrono::steady_clock::time_point started) {
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - started)
                          .count();
  json m{{"tool", "eprb"},
         {"version", kToolVersion},
         {"command", command},
         {"config", config},
         {"seed", seed ? json(*seed) : json(nullptr)},
         {"outputs", outputs},
         {"wall_clock_seconds", secs}};
  write_file(dir / (command + ".manifest.json"),
             [&](std::ostream& o) { o << m.dump(2) << '\n'; });
}

// Flags shared by simulate and fixture.
struct SimFlags {
  std::string config_path;
  std::optional<std::uint64_t> n;
  std::optional<std::uint32_t> m;
  std::optional<double> d, t0, tau, window;
  std::optional<std::string> settings_1, settings_2;
  bool binary = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config or manifest");
    cmd->add_option("--n", n, "number of emitted pairs N")->check(CLI::PositiveNumber);
    cmd->add_option("--m", m, "settings per station M")->check(CLI::PositiveNumber);
    cmd->add_option("--d", d, "delay exponent d");
    cmd->add_option("--t0", t0, "maximal delay T0 (time unit)");
    cmd->add_option("--tau", tau, "time-tag resolution");
    cmd->add_option("--window", window, "coincidence window W");
    cmd->add_option("--settings1", settings_1, "station 1 angles, degrees, comma separated");
    cmd->add_option("--settings2", settings_2, "station 2 angles, degrees, comma separated");
    cmd->add_flag("--binary", binary, "write the binary twin format");
  }

  SimConfig merged(const Common& common) const {
    SimConfig cfg;
    if (!config_path.empty()) cfg = sim_config_from_json(read_json_file(config_path), cfg);
    if (n) cfg.n_events = *n;
    if (m) cfg.m_settings = *m;
    if (d) cfg.delay_exponent = *d;
    if (t0) cfg.t0_max_delay = *t0;
    if (tau) cfg.tag_resolution = *tau;
    if (window) cfg.window = *window;
    if (common.seed) cfg.seed = *common.seed;
    if (settings_1) cfg.settings_1 = degree_list(*settings_1, "--settings1");
    if (settings_2) cfg.settings_2 = degree_list(*settings_2, "--settings2");
    // An explicit table fixes M when --m was not given.
    if (!m && cfg.settings_1) cfg.m_settings = static_cast<std::uint32_t>(cfg.settings_1->size());
    return validate_config(cfg);
  }
};

enum class Mode { paired, windowed, bell_limit };

// Flags shared by analyze, scan and compare.
struct AnalysisFlags {
  std::string file_1, file_2;
  bool paired = false, windowed = false, bell_limit = false, all_pairs = false;
  std::optional<double> window, tau, delta;
  bool auto_delta = false;
  double bin_width = 0.5;
  double range = 20.0;

  void attach(CLI::App* cmd, bool with_window) {
    cmd->add_option("file1", file_1, "station 1 time-tag file")->required();
    cmd->add_option("file2", file_2, "station 2 time-tag file")->required();
    auto* p = cmd->add_flag("--paired", paired, "index-paired counting with discretized tags");
    auto* w = cmd->add_flag("--windowed", windowed, "time-window matching (default)");
    auto* b = cmd->add_flag("--bell-limit", bell_limit, "count every index pair");
    p->excludes(w)->excludes(b);
    w->excludes(b);
    cmd->add_flag("--all-pairs", all_pairs, "windowed: count every pair inside W");
    if (with_window) cmd->add_option("--window", window, "coincidence window W");
    cmd->add_option("--tau", tau, "time-tag resolution (paired mode)");
    auto* dl = cmd->add_option("--delta", delta, "station-1 clock offset");
    auto* ad = cmd->add_flag("--auto-delta", auto_delta, "estimate the offset from the time-difference histogram");
    dl->excludes(ad);
    cmd->add_option("--bin-width", bin_width, "histogram bin for --auto-delta")->check(CLI::PositiveNumber);
    cmd->add_option("--range", range, "histogram half-range for --auto-delta")->check(CLI::PositiveNumber);
  }

  Mode mode() const {
    if (paired) return Mode::paired;
    if (bell_limit) return Mode::bell_limit;
    return Mode::windowed;
  }
};

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::paired: return "paired";
    case Mode::bell_limit: return "bell-limit";
    default: return "windowed";
  }
}

struct LoadedRuns {
  RunData run_1;
  RunData run_2;
  double delta = 0.0;
};

LoadedRuns load_for(const AnalysisFlags& f, Mode mode, std::ostream& err) {
  auto r1 = load_timetags(f.file_1, 1);
  auto r2 = load_timetags(f.file_2, 2);
  if (mode != Mode::windowed) return {std::move(r1), std::move(r2), 0.0};
  if (!r1.is_time_sorted()) r1 = r1.sorted_by_time();
  if (!r2.is_time_sorted()) r2 = r2.sorted_by_time();
  double delta = f.delta.value_or(0.0);
  if (f.auto_delta) {
    delta = optimize_delta(r1, r2, f.bin_width, f.range);
    err << "auto-delta: " << delta << '\n';
  }
  return {std::move(r1), std::move(r2), delta};
}

CoincidenceTable count_for(const AnalysisFlags& f, Mode mode,
                           const LoadedRuns& runs, unsigned threads) {
  switch (mode) {
    case Mode::paired:
      if (!f.tau || !f.window) throw UsageError("--paired needs --tau and --window");
      return count_paired(runs.run_1, runs.run_2, *f.tau, *f.window, threads);
    case Mode::bell_limit:
      return count_bell_limit(runs.run_1, runs.run_2);
    default:
      if (!f.window) throw UsageError("--windowed needs --window");
      return count_windowed(runs.run_1, runs.run_2, *f.window, runs.delta,
                            f.all_pairs ? MatchMode::all_pairs : MatchMode::greedy);
  }
}

json analysis_params(const AnalysisFlags& f, Mode mode, double delta) {
  json j{{"file1", f.file_1}, {"file2", f.file_2}, {"mode", mode_name(mode)}};
  if (f.window) j["window"] = *f.window;
  if (f.tau) j["tau"] = *f.tau;
  if (mode == Mode::windowed) {
    j["delta"] = delta;
    j["auto_delta"] = f.auto_delta;
    j["match"] = f.all_pairs ? "all_pairs" : "greedy";
    if (f.auto_delta) {
      j["bin_width"] = f.bin_width;
      j["range"] = f.range;
    }
  }
  return j;
}

std::string table_settings_text(const SettingQuad& q) {
  std::ostringstream s;
  s << "(a=" << q.a << ", b=" << q.b << ", c=" << q.c << ", d=" << q.d << ")";
  return s.str();
}

int cmd_simulate(const SimFlags& flags, const Common& common,
                 std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const SimConfig cfg = flags.merged(common);
  const auto runs = run_simulation(cfg, common.threads);
  const auto dir = prepare_dir(common.out_dir);
  const auto format = flags.binary ? FileFormat::binary : FileFormat::text;
  const std::string ext = flags.binary ? ".ttb" : ".tt";
  std::vector<std::string> outputs;
  for (const auto* run : {&runs.station_1, &runs.station_2}) {
    const auto path = dir / ("station" + std::to_string(run->station_id()) + ext);
    write_timetags(path.string(), *run, EventOrder::index, format);
    outputs.push_back(path.string());
  }
  write_manifest(dir, "simulate", sim_config_to_json(cfg), cfg.seed, outputs,
                 started);
  err << "simulated " << cfg.n_events << " pairs, M=" << cfg.m_settings
      << ", d=" << cfg.delay_exponent << ", seed=" << cfg.seed << '\n';
  if (common.json_summary) {
    out << json{{"command", "simulate"},
                {"config", sim_config_to_json(cfg)},
                {"outputs", outputs}}
               .dump()
        << '\n';
  }
  return 0;
}

int cmd_analyze(const AnalysisFlags& f, const Common& common,
                std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const Mode mode = f.mode();
  const auto runs = load_for(f, mode, err);
  const auto table = count_for(f, mode, runs, common.threads);
  const auto corr = correlations(table);
  const auto dir = prepare_dir(common.out_dir);

  std::vector<std::string> outputs;
  outputs.push_back(write_file(dir / "coincidences.csv", [&](std::ostream& o) {
    write_coincidences_csv(o, table);
  }));
  outputs.push_back(write_file(dir / "correlations.csv", [&](std::ostream& o) {
    write_correlations_csv(o, corr);
  }));
  const auto chsh_result = smax(corr);

  json report = to_json(table, corr);
  report["chsh"] = to_json(chsh_result);
  report["params"] = analysis_params(f, mode, runs.delta);
  outputs.push_back(write_file(dir / "analysis.json", [&](std::ostream& o) {
    o << report.dump(2) << '\n';
  }));
  write_manifest(dir, "analyze", report["params"], common.seed, outputs, started);

  err << "mode " << mode_name(mode) << ": " << table.total()
      << " coincidences, S_max=" << chsh_result.s_value << ' '
      << table_settings_text(chsh_result.arg_settings)
      << ", max|S|=" << chsh_result.max_abs_s << ' '
      << table_settings_text(chsh_result.arg_abs_settings) << '\n';
  if (common.json_summary) {
    json summary{{"command", "analyze"},
                 {"mode", mode_name(mode)},
                 {"total_coincidences", table.total()},
                 {"chsh", to_json(chsh_result)},
                 {"outputs", outputs}};
    if (mode == Mode::windowed) summary["delta"] = runs.delta;
    out << summary.dump() << '\n';
  }
  return 0;
}

std::vector<double> scan_windows(const std::optional<std::string>& list,
                                 const std::optional<std::string>& geometric) {
  std::vector<double> windows;
  if (list) windows = parse_list(*list, "--windows");
  if (geometric) {
    const auto g = parse_list(*geometric, "--geometric");
    if (g.size() != 3 || !(g[0] > 0) || !(g[1] >= g[0]) || !(g[2] > 1)) {
      throw UsageError("--geometric expects start,stop,factor with 0<start<=stop, factor>1");
    }
    for (double w = g[0]; w <= g[1] * (1 + 1e-12); w *= g[2]) windows.push_back(w);
    if (windows.back() < g[1] * (1 - 1e-12)) windows.push_back(g[1]);
  }
  if (windows.empty()) throw UsageError("scan needs a non-empty window list");
  std::sort(windows.begin(), windows.end());
  return windows;
}

int cmd_scan(const AnalysisFlags& f, const std::optional<std::string>& list,
             const std::optional<std::string>& geometric, const Common& common,
             std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const auto windows = scan_windows(list, geometric);
  Mode mode = f.mode();
  if (mode == Mode::bell_limit) throw UsageError("scan supports --paired or --windowed");
  const auto runs = load_for(f, mode, err);
  std::vector<ScanPoint> scan;
  if (mode == Mode::paired) {
    if (!f.tau) throw UsageError("--paired scan needs --tau");
    scan = scan_smax_vs_window_paired(runs.run_1, runs.run_2, *f.tau, windows);
  } else {
    scan = scan_smax_vs_window(runs.run_1, runs.run_2, runs.delta, windows,
                               f.all_pairs ? MatchMode::all_pairs : MatchMode::greedy);
  }

  const auto dir = prepare_dir(common.out_dir);
  std::vector<std::string> outputs;
  outputs.push_back(write_file(dir / "scan.csv", [&](std::ostream& o) {
    write_scan_csv(o, scan);
  }));
  if (common.svg) {
    LinePlot plot;
    plot.title = "max |S| against coincidence window";
    plot.x_label = "W";
    plot.y_label = "max |S|";
    plot.log_x = true;
    for (const auto& p : scan) {
      plot.x.push_back(p.window);
      plot.y.push_back(p.max_abs_s);
    }
    plot.references = {{2.0, "2"}, {quantum_smax(), "2√2"}};
    outputs.push_back(write_file(dir / "scan.svg", [&](std::ostream& o) {
      o << render_svg(plot);
    }));
  }
  auto params = analysis_params(f, mode, runs.delta);
  params["windows"] = windows;
  write_manifest(dir, "scan", params, common.seed, outputs, started);

  for (const auto& p : scan) {
    err << "W=" << p.window << " S_max=" << p.s_max << " max|S|=" << p.max_abs_s
        << " total=" << p.total_coincidences << '\n';
  }
  if (common.json_summary) {
    json points = json::array();
    for (const auto& p : scan) {
      points.push_back({{"W", p.window},
                        {"S_max", p.s_max},
                        {"max_abs_S", p.max_abs_s},
                        {"total_coincidences", p.total_coincidences}});
    }
    out << json{{"command", "scan"}, {"points", points}, {"outputs", outputs}}.dump()
        << '\n';
  }
  return 0;
}

int cmd_compare(const AnalysisFlags& f, const Common& common,
                std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const Mode mode = f.mode();
  const auto runs = load_for(f, mode, err);
  const auto corr = correlations(count_for(f, mode, runs, common.threads));
  const auto rows = compare_to_references(corr);
  const auto dir = prepare_dir(common.out_dir);
  std::vector<std::string> outputs;
  outputs.push_back(write_file(dir / "compare.csv", [&](std::ostream& o) {
    write_comparison_csv(o, rows);
  }));
  write_manifest(dir, "compare", analysis_params(f, mode, runs.delta),
                 common.seed, outputs, started);

  double ss_singlet = 0, ss_sawtooth = 0;
  for (const auto& r : rows) {
    ss_singlet += (r.e_measured - r.e_singlet) * (r.e_measured - r.e_singlet);
    ss_sawtooth += (r.e_measured - r.e_sawtooth) * (r.e_measured - r.e_sawtooth);
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  const double rms_singlet = std::sqrt(ss_singlet / n);
  const double rms_sawtooth = std::sqrt(ss_sawtooth / n);
  err << rows.size() << " defined setting pairs; rms residual singlet="
      << rms_singlet << " sawtooth=" << rms_sawtooth << '\n';
  if (common.json_summary) {
    out << json{{"command", "compare"},
                {"defined_pairs", rows.size()},
                {"rms_residual_singlet", rms_singlet},
                {"rms_residual_sawtooth", rms_sawtooth},
                {"outputs", outputs}}
               .dump()
        << '\n';
  }
  return 0;
}

int cmd_fixture(const SimFlags& flags, double mean_interarrival, double delta,
                const std::string& unit, const Common& common,
                std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  FixtureSpec spec;
  spec.sim = flags.merged(common);
  spec.mean_interarrival = mean_interarrival;
  spec.delta_injected = delta;
  spec.unit = time_unit_from_string(unit);
  if (!flags.config_path.empty()) {
    const auto j = read_json_file(flags.config_path);
    if (j.contains("mean_interarrival") && mean_interarrival == 30000.0) {
      spec.mean_interarrival = j.at("mean_interarrival").get<double>();
    }
  }

  const auto dir = prepare_dir(common.out_dir);
  const auto format = flags.binary ? FileFormat::binary : FileFormat::text;
  const std::string ext = flags.binary ? ".ttb" : ".tt";
  const auto p1 = (dir / ("fixture1" + ext)).string();
  const auto p2 = (dir / ("fixture2" + ext)).string();
  make_fixture(spec, p1, p2, format, common.threads);

  auto config = sim_config_to_json(spec.sim);
  config["mean_interarrival"] = spec.mean_interarrival;
  config["delta_injected"] = spec.delta_injected;
  config["unit"] = to_string(spec.unit);
  write_manifest(dir, "fixture", config, spec.sim.seed, {p1, p2}, started);
  err << "fixture: " << spec.sim.n_events << " pairs, delta=" << delta << ' '
      << unit << ", mean inter-arrival " << spec.mean_interarrival << '\n';
  if (common.json_summary) {
    out << json{{"command", "fixture"}, {"config", config}, {"outputs", {p1, p2}}}
               .dump()
        << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Event-by-event EPRB simulator and time-tag coincidence analysis",
               "eprb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  SimFlags sim_flags;
  AnalysisFlags analysis_flags;
  std::optional<std::string> window_list, geometric;
  double mean_interarrival = 30000.0;
  double fixture_delta = 0.0;
  std::string unit = "ns";

  auto* simulate = app.add_subcommand("simulate", "generate both stations' records");
  sim_flags.attach(simulate);
  add_common(simulate, common);

  auto* analyze = app.add_subcommand("analyze", "coincidences, correlations and CHSH");
  analysis_flags.attach(analyze, true);
  add_common(analyze, common);

  auto* scan = app.add_subcommand("scan", "S_max against the coincidence window");
  analysis_flags.attach(scan, false);
  scan->add_option("--windows", window_list, "comma-separated windows");
  scan->add_option("--geometric", geometric, "start,stop,factor");
  add_common(scan, common);

  auto* compare = app.add_subcommand("compare", "measured E against singlet and sawtooth");
  analysis_flags.attach(compare, true);
  add_common(compare, common);

  auto* fixture = app.add_subcommand("fixture", "synthetic recording with a known clock offset");
  sim_flags.attach(fixture);
  fixture->add_option("--mean-interarrival", mean_interarrival, "mean time between pairs")
      ->check(CLI::PositiveNumber);
  fixture->add_option("--delta", fixture_delta, "injected station-1 clock offset");
  fixture->add_option("--unit", unit, "time unit of the files")
      ->check(CLI::IsMember({"ns", "T0"}));
  add_common(fixture, common);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags, common, out, err);
    if (analyze->parsed()) return cmd_analyze(analysis_flags, common, out, err);
    if (scan->parsed()) {
      return cmd_scan(analysis_flags, window_list, geometric, common, out, err);
    }
    if (compare->parsed()) return cmd_compare(analysis_flags, common, out, err);
    if (fixture->parsed()) {
      // Fixtures carry their own time scale; tau/window only need to be
      // consistent with T0.
      return cmd_fixture(sim_flags, mean_interarrival, fixture_delta, unit,
                         common, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cli
}  // namespace eprb
