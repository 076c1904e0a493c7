#pragma once

// Deterministic synthetic order-book sessions standing in for exchange data.
// Morning and afternoon sessions differ in how volume accumulates (opening share
// and curve exponent) and in how the spread relaxes after the open.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/market.hpp"
#include "dsig/text.hpp"

namespace dsig {

struct ClassProfile {
  double open_volume_min = 0.05;  // share of the day's volume traded in the opening auction
  double open_volume_max = 0.12;
  double volume_exponent = 0.75;  // V(u) ~ open + (1 - open) u^exponent, u in [0, 1]
  double spread_open_excess = 4.0;  // extra spread ticks at the open, relaxing over the session
  double spread_relaxation = 0.08;  // per-minute mean-reversion speed of the spread
};

struct SyntheticConfig {
  std::size_t sessions_per_class = 200;
  int minutes = 150;
  std::uint64_t seed = 1;
  double tick = 1.0;
  double base_spread_ticks = 1.5;
  double spread_noise = 0.6;        // ticks per sqrt(minute)
  double price_volatility = 1e-3;   // log-price per sqrt(minute)
  double imbalance_noise = 0.4;     // log-normal sd of book shares
  double volume_noise = 0.02;
  double empty_minute_probability = 0.05;
  std::size_t max_snapshots_per_minute = 4;
  ClassProfile morning{0.05, 0.12, 0.75, 4.0, 0.08};
  ClassProfile afternoon{0.005, 0.035, 1.35, 1.0, 0.03};

  void validate() const {
    if (sessions_per_class == 0) throw ConfigError("sessions per class must be positive");
    if (minutes < 2) throw ConfigError("sessions need at least two minutes");
    if (!(tick > 0.0)) throw ConfigError("tick size must be positive");
    if (max_snapshots_per_minute == 0) throw ConfigError("need at least one snapshot per minute");
  }

  SessionSpec spec(SessionLabel label) const {
    const int open = SessionSpec::for_label(label).open;
    return {open, open + minutes};
  }
};

struct SyntheticSession {
  std::string name;
  SessionLabel label = SessionLabel::morning;
  std::vector<MarketSnapshot> snapshots;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

inline std::vector<MarketSnapshot> generate_session(const SyntheticConfig& cfg, SessionLabel label,
                                                    std::uint64_t session_seed) {
  cfg.validate();
  const auto& profile = label == SessionLabel::morning ? cfg.morning : cfg.afternoon;
  const SessionSpec spec = cfg.spec(label);
  std::mt19937_64 rng(session_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Snapshot times: one right after the open, then 0..max per minute.
  std::vector<double> times{spec.open + 0.02 * unit(rng)};
  for (int b = 0; b < spec.minutes(); ++b) {
    if (b > 0 && unit(rng) < cfg.empty_minute_probability) continue;
    const auto count = static_cast<std::size_t>(unit(rng) * static_cast<double>(cfg.max_snapshots_per_minute + 1));
    for (std::size_t c = 0; c < count; ++c) times.push_back(spec.open + b + unit(rng));
  }
  if (unit(rng) < 0.5) times.push_back(static_cast<double>(spec.close));
  std::sort(times.begin(), times.end());

  const double open_share = profile.open_volume_min + (profile.open_volume_max - profile.open_volume_min) * unit(rng);
  const double total_volume = std::round(1e6 * (0.5 + unit(rng)));
  const double base_shares = 5e4 * (0.5 + unit(rng));
  double log_mid = std::log(1000.0 + 4000.0 * unit(rng));
  double spread_excess = profile.spread_open_excess;
  double spread_noise = 0.0;
  double volume = 0.0;
  double prev_t = times.front();

  std::vector<MarketSnapshot> out;
  out.reserve(times.size());
  for (double t : times) {
    const double dt = std::max(t - prev_t, 0.0);
    prev_t = t;
    log_mid += cfg.price_volatility * std::sqrt(dt) * gauss(rng);
    spread_excess *= std::exp(-profile.spread_relaxation * dt);
    spread_noise += -0.5 * spread_noise * dt + cfg.spread_noise * std::sqrt(dt) * gauss(rng);
    const double spread_ticks = std::max(1.0, std::round(cfg.base_spread_ticks + spread_excess + spread_noise));

    const double mid = std::exp(log_mid);
    const double bid = std::max(cfg.tick, std::round((mid - 0.5 * spread_ticks * cfg.tick) / cfg.tick) * cfg.tick);
    const double ask = bid + spread_ticks * cfg.tick;

    const double u = std::clamp((t - spec.open) / spec.minutes(), 0.0, 1.0);
    const double target = total_volume * (open_share + (1.0 - open_share) * std::pow(u, profile.volume_exponent));
    const double noisy = target * (1.0 + cfg.volume_noise * gauss(rng));
    volume = std::max(volume, std::round(noisy / 100.0) * 100.0);
    if (out.empty()) volume = std::max(volume, 100.0);

    auto shares = [&] { return std::max(100.0, std::round(base_shares * std::exp(cfg.imbalance_noise * gauss(rng)))); };
    const double ask_shares = shares();
    const double bid_shares = shares();
    out.push_back({t, ask, bid, ask_shares, bid_shares, volume});
  }
  return out;
}

/// sessions_per_class sessions of each label, interleaved morning/afternoon.
inline std::vector<SyntheticSession> generate_sessions(const SyntheticConfig& cfg) {
  cfg.validate();
  std::vector<SyntheticSession> out;
  out.reserve(2 * cfg.sessions_per_class);
  for (std::size_t k = 0; k < 2 * cfg.sessions_per_class; ++k) {
    const auto label = k % 2 == 0 ? SessionLabel::morning : SessionLabel::afternoon;
    char name[32];
    std::snprintf(name, sizeof name, "session_%05zu", k);
    const std::uint64_t session_seed = detail::splitmix64(cfg.seed * 0x100000001B3ull + k);
    out.push_back({std::string(name) + std::string(file_suffix(label)), label,
                   generate_session(cfg, label, session_seed)});
  }
  return out;
}

/// One snapshot file per session plus manifest.tsv (file, label, snapshots, final_volume).
inline void write_sessions(const std::filesystem::path& dir, const std::vector<SyntheticSession>& sessions) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ostringstream manifest;
  manifest << "file\tlabel\tsnapshots\tfinal_volume\n";
  for (const auto& s : sessions) {
    std::ostringstream body;
    write_snapshots(body, s.snapshots);
    text::write_file(dir / s.name, body.str());
    manifest << s.name << '\t' << to_string(s.label) << '\t' << s.snapshots.size() << '\t'
             << text::shortest(s.snapshots.empty() ? 0.0 : s.snapshots.back().volume) << '\n';
  }
  text::write_file(dir / "manifest.tsv", manifest.str());
}

}  // namespace dsig
