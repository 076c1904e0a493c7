#pragma once

// Morning/afternoon classification: sessions -> normalized paths -> signature (or raw)
// features -> seeded shuffle and split -> standardization -> logistic regression.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/features.hpp"
#include "dsig/logistic.hpp"
#include "dsig/market.hpp"
#include "dsig/parallel.hpp"
#include "dsig/signature.hpp"
#include "dsig/synth.hpp"
#include "dsig/text.hpp"
#include "dsig/words.hpp"

namespace dsig {

/// Which words become features. Empty `restrict_to` means the whole alphabet;
/// `half` unset means "half universe iff mu == 0".
struct FeatureSelector {
  std::vector<std::string> restrict_to;
  std::optional<std::string> pattern;  // e.g. "4-,4+"
  std::size_t max_len = 3;
  std::optional<bool> half;
  bool raw = false;

  WordUniverse universe(DecayRate mu) const {
    const Alphabet a = session_alphabet();
    std::vector<std::size_t> bases;
    for (const auto& label : restrict_to) bases.push_back(a.index_of(label));
    if (bases.empty()) {
      bases.resize(a.size());
      std::iota(bases.begin(), bases.end(), std::size_t{0});
    }
    std::optional<LetterPattern> p;
    if (pattern) p = parse_pattern(*pattern, a);
    return enumerate_words(a, bases, max_len, half.value_or(mu.is_flat()), p);
  }
};

struct ExperimentConfig {
  FeatureSelector features;
  double mu = 0.0;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
  LogisticSettings optimizer;
  bool shuffle_labels = false;  // null experiment: permute labels across sessions
  MeanConvention mean_convention = MeanConvention::population;
  int minutes = 150;  // session length; sessions open at 540 (morning) or 750 (afternoon)
  std::optional<std::size_t> threads;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
    if (!features.raw && features.max_len < 1) throw ConfigError("maximum word length must be at least 1");
    if (minutes < 2) throw ConfigError("sessions need at least two minutes");
    static_cast<void>(DecayRate(mu));
  }
};

struct LabeledSession {
  std::string name;
  SessionLabel label = SessionLabel::morning;
  std::vector<MarketSnapshot> snapshots;
};

struct DiscardedSession {
  std::string name;
  std::string reason;
};

struct ExperimentReport {
  std::size_t sessions_total = 0;
  std::size_t sessions_used = 0;
  std::vector<DiscardedSession> discarded;
  std::size_t feature_count = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<std::string> columns;
  std::vector<double> coefficients;
  double intercept = 0.0;
};

/// Subsamples and normalizes every session (in parallel), then extracts features.
/// Sessions that are discarded or numerically degenerate are recorded, not fatal.
inline FeatureMatrix build_feature_matrix(const std::vector<LabeledSession>& sessions, const ExperimentConfig& cfg,
                                          std::vector<DiscardedSession>& discarded) {
  const DecayRate mu(cfg.mu);
  const WordUniverse universe = cfg.features.raw ? WordUniverse{} : cfg.features.universe(mu);
  const auto plan = std::make_shared<const EvaluationPlan>(universe);

  struct Slot {
    std::optional<std::vector<double>> row;
    std::string reason;
    std::size_t points = 0;
  };
  std::vector<Slot> slots(sessions.size());
  parallel_for(sessions.size(), resolve_thread_count(cfg.threads), [&](std::size_t k) {
    const auto& s = sessions[k];
    try {
      const SessionSpec base = SessionSpec::for_label(s.label);
      const auto outcome = subsample_session(s.snapshots, {base.open, base.open + cfg.minutes});
      if (const auto* d = std::get_if<Discarded>(&outcome)) {
        slots[k].reason = d->reason;
        return;
      }
      const auto path = normalize_and_featurize(std::get<0>(outcome), s.label, cfg.mean_convention);
      slots[k].points = path.path.size();
      if (cfg.features.raw) {
        slots[k].row = raw_feature_row(path);
      } else {
        SignatureTable table(plan, mu, path.path.row(0), path.path.time(0));
        for (std::size_t n = 1; n < path.path.size(); ++n) table.extend(path.path.time(n), path.path.row(n));
        slots[k].row = table.result().feature_values();
      }
    } catch (const Error& e) {
      slots[k].reason = e.what();
    }
  });

  FeatureMatrix m;
  for (std::size_t k = 0; k < sessions.size(); ++k) {
    if (!slots[k].row) {
      discarded.push_back({sessions[k].name, slots[k].reason});
      continue;
    }
    if (cfg.features.raw && m.columns.empty()) m.columns = raw_feature_names(slots[k].points);
    m.rows.push_back(std::move(*slots[k].row));
    m.labels.push_back(static_cast<int>(sessions[k].label));
    m.row_names.push_back(sessions[k].name);
  }
  if (!cfg.features.raw) m.columns = feature_names(universe, session_alphabet());
  m.validate();
  return m;
}

/// Shuffles whole sessions with the seed, splits, standardizes on the training rows
/// and fits the logistic model.
inline ExperimentReport run_experiment(const std::vector<LabeledSession>& sessions, const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.sessions_total = sessions.size();
  FeatureMatrix m = build_feature_matrix(sessions, cfg, report.discarded);
  report.sessions_used = m.size();
  report.columns = m.columns;
  report.feature_count = m.columns.size();

  std::size_t per_class[2] = {0, 0};
  for (int y : m.labels) ++per_class[y];
  if (per_class[0] < 2 || per_class[1] < 2)
    throw DataError("experiment needs at least two usable sessions per class (have " + std::to_string(per_class[0]) +
                    " morning, " + std::to_string(per_class[1]) + " afternoon)");

  std::mt19937_64 rng(cfg.seed);
  if (cfg.shuffle_labels) {
    std::mt19937_64 label_rng(detail::splitmix64(cfg.seed ^ 0x6C6162656C73ull));
    std::shuffle(m.labels.begin(), m.labels.end(), label_rng);
  }
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const auto train_count = static_cast<std::size_t>(cfg.train_fraction * static_cast<double>(m.size()));
  if (train_count == 0 || train_count >= m.size()) throw ConfigError("train fraction leaves an empty split");
  Rows train_x, test_x;
  std::vector<int> train_y, test_y;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& x = k < train_count ? train_x : test_x;
    auto& y = k < train_count ? train_y : test_y;
    x.push_back(m.rows[order[k]]);
    y.push_back(m.labels[order[k]]);
  }
  const bool train_has_both = std::count(train_y.begin(), train_y.end(), 1) > 0 &&
                              std::count(train_y.begin(), train_y.end(), 0) > 0;
  if (!train_has_both) throw DataError("training split contains only one class");

  const auto scaler = Standardizer::fit(train_x);
  train_x = scaler.apply(train_x);
  test_x = scaler.apply(test_x);
  const auto model = logistic_fit(train_x, train_y, cfg.optimizer);

  report.train_rows = train_x.size();
  report.test_rows = test_x.size();
  report.train_accuracy = accuracy(model, train_x, train_y);
  report.test_accuracy = accuracy(model, test_x, test_y);
  report.coefficients = model.weights;
  report.intercept = model.intercept;
  return report;
}

inline std::vector<LabeledSession> to_labeled(const std::vector<SyntheticSession>& sessions) {
  std::vector<LabeledSession> out;
  out.reserve(sessions.size());
  for (const auto& s : sessions) out.push_back({s.name, s.label, s.snapshots});
  return out;
}

/// Every *.am / *.pm file in `dir`, sorted by file name.
inline std::vector<LabeledSession> load_sessions(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw DataError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && label_from_filename(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LabeledSession> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back({f.filename().string(), *label_from_filename(f), read_snapshots(f)});
  return out;
}

/// metric/value summary with a header row.
inline void write_report_tsv(std::ostream& os, const ExperimentReport& r) {
  os << "metric\tvalue\n";
  os << "sessions_total\t" << r.sessions_total << '\n';
  os << "sessions_used\t" << r.sessions_used << '\n';
  os << "sessions_discarded\t" << r.discarded.size() << '\n';
  os << "feature_count\t" << r.feature_count << '\n';
  os << "train_rows\t" << r.train_rows << '\n';
  os << "test_rows\t" << r.test_rows << '\n';
  os << "train_accuracy\t" << text::precise(r.train_accuracy) << '\n';
  os << "test_accuracy\t" << text::precise(r.test_accuracy) << '\n';
}

inline void write_coefficients_tsv(std::ostream& os, const ExperimentReport& r) {
  os << "feature\tcoefficient\n";
  os << "(intercept)\t" << text::precise(r.intercept) << '\n';
  for (std::size_t j = 0; j < r.columns.size(); ++j) os << r.columns[j] << '\t' << text::precise(r.coefficients[j]) << '\n';
}

inline void write_discarded_tsv(std::ostream& os, const ExperimentReport& r) {
  os << "session\treason\n";
  for (const auto& d : r.discarded) os << d.name << '\t' << d.reason << '\n';
}

inline void print_report(std::ostream& os, const ExperimentReport& r) {
  char line[128];
  os << "sessions: " << r.sessions_used << " used of " << r.sessions_total << " (" << r.discarded.size()
     << " discarded)\n";
  os << "features: " << r.feature_count << "\n";
  os << "split:    " << r.train_rows << " train / " << r.test_rows << " test\n";
  std::snprintf(line, sizeof line, "accuracy: train %.2f%%, test %.2f%%\n", 100.0 * r.train_accuracy,
                100.0 * r.test_accuracy);
  os << line;
  for (const auto& d : r.discarded) os << "  discarded " << d.name << ": " << d.reason << "\n";
}

}  // namespace dsig
