#include "eprb/timetag_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace eprb {

namespace {

constexpr const char* kTextMagic = "#eprb-timetags v1";
constexpr std::array<char, 8> kBinaryMagic{'E', 'P', 'R', 'B',
                                           'T', 'T', 'B', '1'};

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() &&
         std::isfinite(out);
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string expect_header(std::istream& in, std::size_t line,
                          const std::string& key) {
  std::string text;
  if (!std::getline(in, text)) fail_at(line, "missing #" + key + " header");
  text = trim_cr(text);
  const std::string prefix = "#" + key + " ";
  if (text.rfind(prefix, 0) != 0) {
    fail_at(line, "expected '" + prefix + "...', got '" + text + "'");
  }
  return text.substr(prefix.size());
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// Little-endian scalar I/O.
template <class T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw ParseError(std::string("binary file truncated reading ") + what);
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

void check_writable(const RunData& run, EventOrder order) {
  if (order == EventOrder::time && !run.is_time_sorted()) {
    throw std::invalid_argument(
        "time-ordered file requested for a run that is not sorted by time");
  }
}

}  // namespace

std::string format_time_tag(double t) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.9f", t);
  std::string s(buf.data(), static_cast<std::size_t>(len));
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string format_angle_degrees(double radians) {
  const double deg = radians_to_degrees(radians);
  // Search a few ulps around the direct conversion for a literal that maps
  // back to the same radian value; prefer the shortest one.
  std::string best;
  double lo = deg, hi = deg;
  for (int step = 0; step < 8; ++step) {
    for (double cand : {lo, hi}) {
      if (degrees_to_radians(cand) != radians) continue;
      auto s = shortest(cand);
      if (best.empty() || s.size() < best.size()) best = std::move(s);
    }
    lo = std::nextafter(lo, -INFINITY);
    hi = std::nextafter(hi, INFINITY);
  }
  return best.empty() ? shortest(deg) : best;
}

void write_timetags_text(std::ostream& out, const RunData& run,
                         EventOrder order) {
  check_writable(run, order);
  out << kTextMagic << '\n';
  out << "#station " << run.station_id() << '\n';
  out << "#unit " << to_string(run.unit()) << '\n';
  out << "#settings ";
  for (std::size_t i = 0; i < run.settings().size(); ++i) {
    if (i) out << ',';
    out << format_angle_degrees(run.settings()[i]);
  }
  out << '\n';
  if (order == EventOrder::index) out << "#order index\n";
  for (const auto& ev : run.events()) {
    out << format_time_tag(ev.time_tag) << '\t' << ev.setting_index << '\t'
        << (ev.outcome == Outcome::plus ? "+1" : "-1") << '\n';
  }
}

TimeTagFile parse_timetags_text(std::istream& in) {
  std::string text;
  if (!std::getline(in, text) || trim_cr(text) != kTextMagic) {
    fail_at(1, std::string("expected '") + kTextMagic + "'");
  }

  int station = 0;
  const auto station_text = expect_header(in, 2, "station");
  if (!parse_int(station_text, station) || (station != 1 && station != 2)) {
    fail_at(2, "station must be 1 or 2");
  }

  TimeUnit unit;
  try {
    unit = time_unit_from_string(expect_header(in, 3, "unit"));
  } catch (const InvariantError& e) {
    fail_at(3, e.what());
  }

  std::vector<double> settings;
  {
    std::stringstream list(expect_header(in, 4, "settings"));
    std::string item;
    while (std::getline(list, item, ',')) {
      double deg = 0.0;
      if (!parse_double(item, deg)) fail_at(4, "bad angle '" + item + "'");
      settings.push_back(degrees_to_radians(deg));
    }
    if (settings.empty()) fail_at(4, "settings list is empty");
  }

  EventOrder order = EventOrder::time;
  std::vector<StationEvent> events;
  std::size_t line = 4;
  double last_time = 0.0;
  while (std::getline(in, text)) {
    ++line;
    text = trim_cr(text);
    if (events.empty() && text.rfind("#order ", 0) == 0) {
      const auto value = text.substr(7);
      if (value == "index") {
        order = EventOrder::index;
      } else if (value != "time") {
        fail_at(line, "order must be 'time' or 'index'");
      }
      continue;
    }
    if (text.empty()) fail_at(line, "empty line");

    const std::size_t record = events.size() + 1;
    const auto where = "record " + std::to_string(record) + ": ";
    const auto tab1 = text.find('\t');
    const auto tab2 =
        tab1 == std::string::npos ? tab1 : text.find('\t', tab1 + 1);
    if (tab2 == std::string::npos ||
        text.find('\t', tab2 + 1) != std::string::npos) {
      fail_at(line, where + "expected 3 tab-separated fields");
    }
    const std::string_view view(text);
    StationEvent ev;
    if (!parse_double(view.substr(0, tab1), ev.time_tag) || ev.time_tag < 0) {
      fail_at(line, where + "bad time tag");
    }
    if (!parse_int(view.substr(tab1 + 1, tab2 - tab1 - 1), ev.setting_index) ||
        ev.setting_index < 1 || ev.setting_index > settings.size()) {
      fail_at(line, where + "setting_index outside [1, " +
                        std::to_string(settings.size()) + "]");
    }
    const auto outcome = view.substr(tab2 + 1);
    if (outcome == "+1") {
      ev.outcome = Outcome::plus;
    } else if (outcome == "-1") {
      ev.outcome = Outcome::minus;
    } else {
      fail_at(line, where + "outcome must be +1 or -1");
    }
    if (order == EventOrder::time && !events.empty() &&
        ev.time_tag < last_time) {
      fail_at(line, where + "time tags are not sorted");
    }
    last_time = ev.time_tag;
    events.push_back(ev);
  }
  return {order, RunData(station, std::move(settings), std::move(events), unit)};
}

void write_timetags_binary(std::ostream& out, const RunData& run,
                           EventOrder order) {
  check_writable(run, order);
  out.write(kBinaryMagic.data(), kBinaryMagic.size());
  put<std::uint32_t>(out, 1);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(run.station_id()));
  put<std::uint8_t>(out, run.unit() == TimeUnit::ns ? 0 : 1);
  put<std::uint8_t>(out, order == EventOrder::time ? 0 : 1);
  put<std::uint8_t>(out, 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(run.settings().size()));
  for (double a : run.settings()) put<double>(out, a);
  put<std::uint64_t>(out, run.size());
  for (const auto& ev : run.events()) {
    put<double>(out, ev.time_tag);
    put<std::uint32_t>(out, ev.setting_index);
    put<std::int8_t>(out, static_cast<std::int8_t>(ev.outcome));
    put<std::uint8_t>(out, 0);
    put<std::uint16_t>(out, 0);
  }
}

TimeTagFile parse_timetags_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kBinaryMagic) {
    throw ParseError("not an eprb binary time-tag file");
  }
  if (get<std::uint32_t>(in, "version") != 1) {
    throw ParseError("unsupported binary version");
  }
  const int station = get<std::uint8_t>(in, "station");
  const auto unit_code = get<std::uint8_t>(in, "unit");
  const auto order_code = get<std::uint8_t>(in, "order");
  get<std::uint8_t>(in, "reserved");
  if (station != 1 && station != 2) throw ParseError("station must be 1 or 2");
  if (unit_code > 1 || order_code > 1) throw ParseError("bad header flags");

  const auto m = get<std::uint32_t>(in, "setting count");
  if (m == 0) throw ParseError("settings list is empty");
  std::vector<double> settings(m);
  for (auto& a : settings) a = get<double>(in, "settings");

  const auto n = get<std::uint64_t>(in, "record count");
  std::vector<StationEvent> events;
  events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 24)));
  const auto order = order_code == 0 ? EventOrder::time : EventOrder::index;
  for (std::uint64_t r = 1; r <= n; ++r) {
    const auto where = "record " + std::to_string(r) + ": ";
    StationEvent ev;
    ev.time_tag = get<double>(in, "record");
    ev.setting_index = get<std::uint32_t>(in, "record");
    const int outcome = get<std::int8_t>(in, "record");
    get<std::uint8_t>(in, "record");
    get<std::uint16_t>(in, "record");
    if (!(ev.time_tag >= 0.0) || !std::isfinite(ev.time_tag)) {
      throw ParseError(where + "bad time tag");
    }
    if (ev.setting_index < 1 || ev.setting_index > m) {
      throw ParseError(where + "setting_index outside [1, " +
                       std::to_string(m) + "]");
    }
    if (outcome != 1 && outcome != -1) {
      throw ParseError(where + "outcome must be +1 or -1");
    }
    ev.outcome = outcome_from_int(outcome);
    if (order == EventOrder::time && !events.empty() &&
        ev.time_tag < events.back().time_tag) {
      throw ParseError(where + "time tags are not sorted");
    }
    events.push_back(ev);
  }
  return {order, RunData(station, std::move(settings), std::move(events),
                         unit_code == 0 ? TimeUnit::ns : TimeUnit::t0)};
}

void write_timetags(const std::string& path, const RunData& run,
                    EventOrder order, FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == FileFormat::text) {
    write_timetags_text(out, run, order);
  } else {
    write_timetags_binary(out, run, order);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

TimeTagFile read_timetag_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 8 && head == kBinaryMagic;
  in.clear();
  in.seekg(0);
  try {
    return binary ? parse_timetags_binary(in) : parse_timetags_text(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RunData load_timetags(const std::string& path, int expected_station) {
  auto file = read_timetag_file(path);
  if (file.run.station_id() != expected_station) {
    throw std::invalid_argument(path + ": file is station " +
                                std::to_string(file.run.station_id()) +
                                ", expected station " +
                                std::to_string(expected_station));
  }
  return std::move(file.run);
}

}  // namespace eprb
