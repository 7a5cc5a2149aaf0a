#pragma once

// Station recordings on disk.
//
// Text layout (one file per station):
//
//   #eprb-timetags v1
//   #station 1
//   #unit ns
//   #settings 0,45
//   #order index          (optional; default is time)
//   1234.500000000<TAB>2<TAB>+1
//
// Times carry at most 9 fractional digits. With `#order time` (the default)
// records must be non-decreasing in time; `#order index` marks simulator
// output whose line n of both stations belongs to the same emitted pair.
//
// The binary twin starts with the magic "EPRBTTB1" and stores every double
// bit-exactly, little-endian.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "eprb/types.hpp"

namespace eprb {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class EventOrder { time, index };
enum class FileFormat { text, binary };

struct TimeTagFile {
  EventOrder order = EventOrder::time;
  RunData run;
};

void write_timetags_text(std::ostream& out, const RunData& run,
                         EventOrder order);
TimeTagFile parse_timetags_text(std::istream& in);

void write_timetags_binary(std::ostream& out, const RunData& run,
                           EventOrder order);
TimeTagFile parse_timetags_binary(std::istream& in);

void write_timetags(const std::string& path, const RunData& run,
                    EventOrder order, FileFormat format = FileFormat::text);

/// Reads either layout (detected from the first bytes).
TimeTagFile read_timetag_file(const std::string& path);

/// Reads and validates one station's file. Throws ParseError on malformed
/// content or unsorted time-ordered records, and std::invalid_argument on a
/// station mismatch.
RunData load_timetags(const std::string& path, int expected_station);

/// Decimal with at most 9 fractional digits, trailing zeros trimmed.
std::string format_time_tag(double t);
/// Shortest degree literal that converts back to exactly `radians`.
std::string format_angle_degrees(double radians);

}  // namespace eprb
