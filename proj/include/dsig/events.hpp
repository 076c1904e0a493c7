#pragma once

// Tab-separated event streams ("time<TAB>event_type<TAB>value", ';' comments)
// and their conversion to a forward-filled discrete path.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/path.hpp"
#include "dsig/text.hpp"
#include "dsig/words.hpp"

namespace dsig {

struct EventRecord {
  double time = 0.0;
  std::size_t event_type = 0;
  double value = 0.0;
};

struct EventStream {
  Alphabet alphabet;
  std::vector<EventRecord> records;  // nondecreasing time, file order within equal times
};

/// Parses an event stream. Without a supplied alphabet, event types are collected in
/// order of first appearance; with one, unknown types are an error.
inline EventStream parse_event_stream(std::string_view content, std::optional<Alphabet> alphabet = std::nullopt) {
  EventStream s;
  const bool open_alphabet = !alphabet.has_value();
  if (alphabet) s.alphabet = std::move(*alphabet);
  std::size_t line_no = 0;
  for (auto raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim_right(raw);
    if (line.empty() || line.front() == ';') continue;
    const auto fields = text::split(line, '\t');
    const auto where = " on line " + std::to_string(line_no);
    if (fields.size() != 3)
      throw DataError("expected 3 tab-separated fields, found " + std::to_string(fields.size()) + where);
    EventRecord r;
    if (!text::parse_double(fields[0], r.time)) throw DataError("non-numeric time '" + std::string(fields[0]) + "'" + where);
    if (!text::parse_double(fields[2], r.value))
      throw DataError("non-numeric value '" + std::string(fields[2]) + "'" + where);
    const auto type = text::trim(fields[1]);
    r.event_type = open_alphabet ? s.alphabet.intern(type) : s.alphabet.index_of(type);
    s.records.push_back(r);
  }
  std::stable_sort(s.records.begin(), s.records.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.time < b.time; });
  return s;
}

inline EventStream read_event_stream(const std::filesystem::path& file, std::optional<Alphabet> alphabet = std::nullopt) {
  return parse_event_stream(text::read_file(file), std::move(alphabet));
}

/// One row per distinct timestamp; components not observed at a timestamp keep their
/// latest value. Every component must be observed at the earliest timestamp.
inline DiscretePath forward_fill(const EventStream& s) {
  if (s.records.empty()) throw DataError("cannot build a path from an empty event stream");
  const std::size_t d = s.alphabet.size();
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> current(d, 0.0);
  std::vector<bool> seen(d, false);

  std::size_t k = 0;
  while (k < s.records.size()) {
    const double t = s.records[k].time;
    for (; k < s.records.size() && s.records[k].time == t; ++k) {
      current[s.records[k].event_type] = s.records[k].value;
      seen[s.records[k].event_type] = true;
    }
    if (times.empty()) {
      for (std::size_t i = 0; i < d; ++i) {
        if (!seen[i])
          throw DataError("event type '" + s.alphabet.label(i) + "' has no value at the first timestamp " +
                          text::shortest(t));
      }
    }
    times.push_back(t);
    values.insert(values.end(), current.begin(), current.end());
  }
  return DiscretePath(s.alphabet, std::move(times), std::move(values));
}

}  // namespace dsig
