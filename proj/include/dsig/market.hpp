#pragma once

// Order-book snapshots to one-minute session grids and the four-component
// normalized session path (log mid-price, spread, imbalance, accumulated volume).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/path.hpp"
#include "dsig/text.hpp"
#include "dsig/words.hpp"

namespace dsig {

struct MarketSnapshot {
  double time = 0.0;        // minutes since midnight
  double ask = 0.0;         // best ask price
  double bid = 0.0;         // best bid price
  double ask_shares = 0.0;  // total ask-side shares
  double bid_shares = 0.0;  // total bid-side shares
  double volume = 0.0;      // accumulated execution volume

  friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;
};

inline void validate_snapshot(const MarketSnapshot& s) {
  const bool finite = std::isfinite(s.time) && std::isfinite(s.ask) && std::isfinite(s.bid) &&
                      std::isfinite(s.ask_shares) && std::isfinite(s.bid_shares) && std::isfinite(s.volume);
  if (!finite) throw DataError("snapshot contains non-finite fields");
  if (!(s.bid > 0.0) || !(s.ask >= s.bid))
    throw DataError("snapshot at " + text::shortest(s.time) + " violates ask >= bid > 0");
  if (!(s.ask_shares > 0.0) || !(s.bid_shares > 0.0))
    throw DataError("snapshot at " + text::shortest(s.time) + " has non-positive book shares");
  if (s.volume < 0.0) throw DataError("snapshot at " + text::shortest(s.time) + " has negative volume");
}

enum class SessionLabel { morning = 0, afternoon = 1 };

inline std::string_view to_string(SessionLabel l) { return l == SessionLabel::morning ? "morning" : "afternoon"; }
inline std::string_view file_suffix(SessionLabel l) { return l == SessionLabel::morning ? ".am" : ".pm"; }

inline std::optional<SessionLabel> parse_session_label(std::string_view s) {
  if (s == "am" || s == "morning" || s == "0") return SessionLabel::morning;
  if (s == "pm" || s == "afternoon" || s == "1") return SessionLabel::afternoon;
  return std::nullopt;
}

/// ".am" marks a morning session file, ".pm" an afternoon one.
inline std::optional<SessionLabel> label_from_filename(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".am") return SessionLabel::morning;
  if (ext == ".pm") return SessionLabel::afternoon;
  return std::nullopt;
}

/// Session open/close in whole minutes since midnight; the grid has close - open + 1 points.
struct SessionSpec {
  int open = 540;
  int close = 690;

  static constexpr SessionSpec morning() { return {540, 690}; }
  static constexpr SessionSpec afternoon() { return {750, 900}; }
  static constexpr SessionSpec for_label(SessionLabel l) {
    return l == SessionLabel::morning ? morning() : afternoon();
  }

  int minutes() const noexcept { return close - open; }
};

struct Discarded {
  std::string reason;
};

using SubsampleOutcome = std::variant<std::vector<MarketSnapshot>, Discarded>;

/// One snapshot per grid minute n = open..close:
///  - open: the first snapshot of minute block [open, open+1);
///  - interior n: the last snapshot of block [n-1, n), or the previous pick if that block is empty;
///  - close: the last snapshot in [close-1, close], or the previous pick if there is none.
/// The session is discarded when the first block is empty or its last snapshot has zero volume.
inline SubsampleOutcome subsample_session(const std::vector<MarketSnapshot>& snapshots, const SessionSpec& spec) {
  if (spec.close <= spec.open) throw ConfigError("session close must be after open");
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const double t = snapshots[k].time;
    if (k > 0 && t < snapshots[k - 1].time) throw DataError("snapshots are not sorted by time");
    if (t < spec.open || t > spec.close)
      throw DataError("snapshot time " + text::shortest(t) + " outside session [" + std::to_string(spec.open) + ", " +
                      std::to_string(spec.close) + "]");
  }

  // block_end[b] = one past the last snapshot with time < open + b + 1.
  const auto minutes = static_cast<std::size_t>(spec.minutes());
  std::vector<std::size_t> block_end(minutes);
  std::size_t k = 0;
  for (std::size_t b = 0; b < minutes; ++b) {
    const double limit = spec.open + static_cast<double>(b) + 1.0;
    while (k < snapshots.size() && snapshots[k].time < limit) ++k;
    block_end[b] = k;
  }
  auto block_begin = [&](std::size_t b) { return b == 0 ? std::size_t{0} : block_end[b - 1]; };

  if (block_end[0] == 0) return Discarded{"no snapshot in the first minute"};
  if (snapshots[block_end[0] - 1].volume == 0.0)
    return Discarded{"zero execution volume at the end of the first minute"};

  std::vector<MarketSnapshot> out;
  out.reserve(minutes + 1);
  out.push_back(snapshots.front());
  for (std::size_t b = 1; b < minutes; ++b) {
    const auto lo = block_begin(b - 1), hi = block_end[b - 1];
    out.push_back(lo == hi ? out.back() : snapshots[hi - 1]);
  }
  // Closed final block: everything from minute close-1 up to and including the close.
  if (snapshots.size() > block_begin(minutes - 1)) {
    out.push_back(snapshots.back());
  } else {
    out.push_back(out.back());
  }
  return out;
}

/// How the session mean <x> is formed. `population` divides by the number of grid
/// points N+1. `divide_by_minutes` divides the N+1-term sum by N.
enum class MeanConvention { population, divide_by_minutes };

inline constexpr std::size_t kSessionComponents = 4;

inline Alphabet session_alphabet() { return Alphabet::numbered(kSessionComponents); }

struct SessionPath {
  DiscretePath path;  // times n/N, components X1..X4
  SessionLabel label = SessionLabel::morning;
};

/// Builds the normalized session path from N+1 grid snapshots.
inline SessionPath normalize_and_featurize(const std::vector<MarketSnapshot>& selected, SessionLabel label,
                                           MeanConvention convention = MeanConvention::population) {
  if (selected.size() < 2) throw DataError("a session needs at least two grid points");
  const std::size_t points = selected.size();
  const double minutes = static_cast<double>(points - 1);
  for (const auto& s : selected) validate_snapshot(s);
  const double final_volume = selected.back().volume;
  if (!(final_volume > 0.0)) throw DataError("final accumulated volume is zero");

  std::vector<double> log_mid(points), spread(points);
  for (std::size_t n = 0; n < points; ++n) {
    log_mid[n] = std::log((selected[n].ask + selected[n].bid) / 2.0);
    spread[n] = selected[n].ask - selected[n].bid;
  }

  const double divisor = convention == MeanConvention::population ? static_cast<double>(points) : minutes;
  auto standardize = [&](const std::vector<double>& x, std::string_view name) {
    double sum = 0.0;
    for (double v : x) sum += v;
    double mean = sum / divisor, var = 0.0;
    if (convention == MeanConvention::population) {
      // Centred second pass: same value as <x^2> - <x>^2, without the cancellation.
      for (double v : x) var += (v - mean) * (v - mean);
      var /= divisor;
    } else {
      double sum_sq = 0.0;
      for (double v : x) sum_sq += v * v;
      var = sum_sq / divisor - mean * mean;
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi || !(var > 0.0) || !std::isfinite(var))
      throw NumericError("degenerate " + std::string(name) + ": <x^2> - <x>^2 = " + text::shortest(var) +
                         " is not positive");
    const double sd = std::sqrt(var);
    std::vector<double> out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = (x[n] - mean) / sd;
    return out;
  };
  const auto x1 = standardize(log_mid, "X1 (log mid-price)");
  const auto x2 = standardize(spread, "X2 (spread)");

  std::vector<double> times(points), values(points * kSessionComponents);
  for (std::size_t n = 0; n < points; ++n) {
    const auto& s = selected[n];
    times[n] = static_cast<double>(n) / minutes;
    double* row = &values[n * kSessionComponents];
    row[0] = x1[n];
    row[1] = x2[n];
    row[2] = (s.ask_shares - s.bid_shares) / (s.ask_shares + s.bid_shares);
    row[3] = s.volume / final_volume;
  }
  return SessionPath{DiscretePath(session_alphabet(), std::move(times), std::move(values)), label};
}

// Snapshot files: header "time ask bid ask_shares bid_shares volume", tab-separated,
// ';' comments allowed. One session per file.

inline constexpr std::string_view kSnapshotHeader = "time\task\tbid\task_shares\tbid_shares\tvolume";

inline std::vector<MarketSnapshot> parse_snapshots(std::string_view content) {
  std::vector<MarketSnapshot> out;
  std::size_t line_no = 0;
  for (auto raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim_right(raw);
    if (line.empty() || line.front() == ';') continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 6)
      throw DataError("snapshot line " + std::to_string(line_no) + ": expected 6 fields, found " +
                      std::to_string(fields.size()));
    double v[6];
    bool numeric = true;
    for (std::size_t i = 0; i < 6; ++i) numeric = numeric && text::parse_double(fields[i], v[i]);
    if (!numeric) {
      if (out.empty() && text::trim(fields[0]) == "time") continue;  // header
      throw DataError("snapshot line " + std::to_string(line_no) + ": non-numeric field");
    }
    MarketSnapshot s{v[0], v[1], v[2], v[3], v[4], v[5]};
    validate_snapshot(s);
    out.push_back(s);
  }
  return out;
}

inline std::vector<MarketSnapshot> read_snapshots(const std::filesystem::path& file) {
  try {
    return parse_snapshots(text::read_file(file));
  } catch (const DataError& e) {
    throw DataError(file.filename().string() + ": " + e.what());
  }
}

inline void write_snapshots(std::ostream& os, const std::vector<MarketSnapshot>& snapshots) {
  os << kSnapshotHeader << '\n';
  for (const auto& s : snapshots) {
    os << text::shortest(s.time) << '\t' << text::shortest(s.ask) << '\t' << text::shortest(s.bid) << '\t'
       << text::shortest(s.ask_shares) << '\t' << text::shortest(s.bid_shares) << '\t' << text::shortest(s.volume)
       << '\n';
  }
}

/// Columns t, X1..X4.
inline void write_session_path(std::ostream& os, const SessionPath& sp) {
  os << "t\tX1\tX2\tX3\tX4\n";
  const auto& p = sp.path;
  for (std::size_t n = 0; n < p.size(); ++n) {
    os << text::precise(p.time(n));
    for (double v : p.row(n)) os << '\t' << text::precise(v);
    os << '\n';
  }
}

inline DiscretePath parse_session_path(std::string_view content) {
  std::vector<double> times, values;
  bool header = true;
  for (auto raw : text::split(content, '\n')) {
    const auto line = text::trim_right(raw);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = text::split(line, '\t');
    if (fields.size() != 1 + kSessionComponents) throw DataError("session path rows need 5 columns");
    double v;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!text::parse_double(fields[i], v)) throw DataError("non-numeric session path field");
      (i == 0 ? times : values).push_back(v);
    }
  }
  return DiscretePath(session_alphabet(), std::move(times), std::move(values));
}

}  // namespace dsig
