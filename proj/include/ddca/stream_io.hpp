#pragma once

// Event stream text format.
//
//   time,kind,antigen_type,danger,safe
//   0.25,antigen,nmap,,
//   1,signal,,15,21.8
//
// Numbers are written as the shortest fixed-point decimal that reads back
// to the same double, so write -> parse is bit-exact. Out-of-range signal
// values are clamped into [0, max] on read and counted.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ddca/errors.hpp"
#include "ddca/events.hpp"

namespace ddca {

inline constexpr std::string_view kStreamHeader = "time,kind,antigen_type,danger,safe";

inline std::string format_decimal(double value) {
  // Fixed notation of a finite double needs at most ~330 characters.
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw InvariantError("cannot format number");
  return std::string(buf, ptr);
}

inline std::optional<double> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline bool valid_antigen_label(std::string_view label) {
  return !label.empty() && label.find_first_of(",\r\n") == std::string_view::npos;
}

struct ParseReport {
  EventStream stream;
  std::size_t clamp_warnings = 0;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double clamp_signal(double v, double max, std::size_t& warnings) {
  if (v < 0.0) {
    ++warnings;
    return 0.0;
  }
  if (v > max) {
    ++warnings;
    return max;
  }
  return v;
}

}  // namespace detail

/// Parses the line format. Equal-time groups are reordered so antigens
/// precede signals; a decreasing timestamp is an error.
inline ParseReport parse_stream(std::string_view text, double normalization_max = kDefaultNormalizationMax) {
  ParseReport report;
  report.stream.metadata.normalization_max = normalization_max;
  if (text.empty()) return report;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  std::optional<Seconds> last_time;
  auto& events = report.stream.events;

  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!header_seen) {
      if (line != kStreamHeader) throw DataError("missing header '" + std::string(kStreamHeader) + "'", line_no);
      header_seen = true;
      continue;
    }
    if (line.empty()) throw DataError("empty line", line_no);

    const auto fields = detail::split_fields(line);
    if (fields.size() != 5) throw DataError("expected 5 fields, found " + std::to_string(fields.size()), line_no);

    const auto time = parse_decimal(fields[0]);
    if (!time || *time < 0.0) throw DataError("invalid time '" + std::string(fields[0]) + "'", line_no);
    if (last_time && *time < *last_time) throw DataError("timestamp decreases", line_no);
    last_time = time;

    if (fields[1] == "antigen") {
      if (!valid_antigen_label(fields[2])) throw DataError("antigen row needs a type label", line_no);
      if (!fields[3].empty() || !fields[4].empty()) throw DataError("antigen row must leave signal fields empty", line_no);
      events.emplace_back(AntigenEvent{*time, std::string(fields[2])});
    } else if (fields[1] == "signal") {
      if (!fields[2].empty()) throw DataError("signal row must leave antigen_type empty", line_no);
      const auto danger = parse_decimal(fields[3]);
      const auto safe = parse_decimal(fields[4]);
      if (!danger) throw DataError("invalid danger value '" + std::string(fields[3]) + "'", line_no);
      if (!safe) throw DataError("invalid safe value '" + std::string(fields[4]) + "'", line_no);
      events.emplace_back(SignalInstance{*time, detail::clamp_signal(*danger, normalization_max, report.clamp_warnings),
                                         detail::clamp_signal(*safe, normalization_max, report.clamp_warnings)});
    } else {
      throw DataError("unknown event kind '" + std::string(fields[1]) + "'", line_no);
    }
  }

  std::stable_sort(events.begin(), events.end(), event_before);
  return report;
}

inline std::string write_stream(const EventStream& stream) {
  std::string out;
  out.reserve(32 * (stream.events.size() + 1));
  out += kStreamHeader;
  out += '\n';
  for (const auto& e : stream.events) {
    if (const auto* a = std::get_if<AntigenEvent>(&e)) {
      if (!valid_antigen_label(a->antigen_type)) throw DataError("antigen label cannot be written: '" + a->antigen_type + "'");
      out += format_decimal(a->time);
      out += ",antigen,";
      out += a->antigen_type;
      out += ",,\n";
    } else {
      const auto& s = std::get<SignalInstance>(e);
      out += format_decimal(s.time);
      out += ",signal,,";
      out += format_decimal(s.danger);
      out += ',';
      out += format_decimal(s.safe);
      out += '\n';
    }
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("read failed on '" + path.string() + "'");
  return std::move(ss).str();
}

inline ParseReport read_stream_file(const std::filesystem::path& path,
                                    double normalization_max = kDefaultNormalizationMax) {
  ParseReport report = parse_stream(read_text_file(path), normalization_max);
  report.stream.metadata.source = path.string();
  return report;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error("write failed on '" + path.string() + "'");
}

}  // namespace ddca
