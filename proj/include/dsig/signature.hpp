#pragma once

// Forward dynamic-programming evaluation of discrete signatures.
//
// For a prefix-closed word set, one time step t_{n-1} -> t_n updates every word
// from its own previous value and its prefix's value:
//
//   head  S_n[w.i-] = e_n * (S_{n-1}[w.i-] + dX^i * S_{n-1}[w])
//   tail  S_n[w.i+] = e_n *  S_{n-1}[w.i+] + dX^i * S_n[w]
//
// with e_n = exp(-mu (t_n - t_{n-1})) and dX^i = X^i_{t_n} - X^i_{t_{n-1}}. Words
// are swept shortest first, so a tail update always sees its prefix's new value.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/path.hpp"
#include "dsig/text.hpp"
#include "dsig/words.hpp"

namespace dsig {

/// Prefix closure of a requested universe, laid out for the per-step sweep.
class EvaluationPlan {
 public:
  explicit EvaluationPlan(const WordUniverse& requested) {
    std::map<Word, std::size_t> index;
    index.emplace(Word{}, 0);
    for (const auto& w : requested.words()) {
      Word cur = w;
      while (!cur.is_empty() && !index.contains(cur)) {
        index.emplace(cur, 0);
        cur = cur.prefix();
      }
    }
    // std::map iterates in canonical order, so every prefix precedes its extensions.
    words_.reserve(index.size());
    for (auto& [w, slot] : index) {
      slot = words_.size();
      words_.push_back(w);
    }
    cells_.resize(words_.size());
    for (std::size_t k = 1; k < words_.size(); ++k) {
      const auto& w = words_[k];
      cells_[k] = Cell{index.at(w.prefix()), w.back().base, w.back().sign};
    }
    emitted_.reserve(requested.size());
    for (const auto& w : requested.words()) emitted_.push_back(index.at(w));
    requested_ = requested.words();
    for (const auto& w : words_) {
      for (const auto& l : w.letters()) max_base_ = std::max(max_base_, l.base + 1);
    }
  }

  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Word>& words() const noexcept { return words_; }
  const std::vector<Word>& requested() const noexcept { return requested_; }
  const std::vector<std::size_t>& emitted() const noexcept { return emitted_; }
  std::size_t required_dim() const noexcept { return max_base_; }

  std::optional<std::size_t> slot(const Word& w) const {
    const auto it = std::lower_bound(words_.begin(), words_.end(), w);
    if (it == words_.end() || *it != w) return std::nullopt;
    return static_cast<std::size_t>(it - words_.begin());
  }

  struct Cell {
    std::size_t parent = 0;
    std::size_t base = 0;
    Sign sign = Sign::head;
  };
  const std::vector<Cell>& cells() const noexcept { return cells_; }

 private:
  std::vector<Word> words_;
  std::vector<Cell> cells_;  // cells_[0] (empty word) unused
  std::vector<Word> requested_;
  std::vector<std::size_t> emitted_;
  std::size_t max_base_ = 0;
};

/// Signature values over [t_m, t_n] for the words of a universe, in universe order.
struct SignatureResult {
  double start_time = 0.0;
  double end_time = 0.0;
  double mu = 0.0;
  std::vector<Word> words;
  std::vector<double> values;

  std::optional<double> find(const Word& w) const {
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (words[k] == w) return values[k];
    }
    return std::nullopt;
  }

  double at(const Word& w) const {
    if (auto v = find(w)) return *v;
    throw DataError("word not present in signature result");
  }

  /// Values of every nonempty word, in order.
  std::vector<double> feature_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (!words[k].is_empty()) out.push_back(values[k]);
    }
    return out;
  }
};

/// Running signature S^mu(X)_{t_m, t_n} for a fixed start m, advanced one observation at a time.
class SignatureTable {
 public:
  SignatureTable(std::shared_ptr<const EvaluationPlan> plan, DecayRate mu, std::span<const double> start_row,
                 double start_time, std::size_t start_index = 0)
      : plan_(std::move(plan)),
        mu_(mu),
        start_index_(start_index),
        current_index_(start_index),
        start_time_(start_time),
        current_time_(start_time),
        last_row_(start_row.begin(), start_row.end()),
        increments_(start_row.size()),
        values_(plan_->size(), 0.0),
        next_(plan_->size(), 0.0) {
    if (plan_->required_dim() > last_row_.size())
      throw DataError("universe uses letters outside the path alphabet");
    values_[0] = 1.0;
  }

  SignatureTable(const WordUniverse& universe, DecayRate mu, std::span<const double> start_row, double start_time,
                 std::size_t start_index = 0)
      : SignatureTable(std::make_shared<const EvaluationPlan>(universe), mu, start_row, start_time, start_index) {}

  /// Advances to a new observation. The new time must be later than the current one.
  void extend(double time, std::span<const double> row) {
    if (row.size() != last_row_.size()) throw DataError("observation has the wrong number of components");
    if (!(time > current_time_)) throw DataError("observation times must be strictly increasing");
    for (double v : row) {
      if (!std::isfinite(v)) throw DataError("non-finite observation value");
    }
    for (std::size_t i = 0; i < row.size(); ++i) increments_[i] = row[i] - last_row_[i];
    step(increments_, mu_.step_weight(current_time_, time));
    std::copy(row.begin(), row.end(), last_row_.begin());
    current_time_ = time;
    ++current_index_;
  }

  double value(const Word& w) const {
    if (auto k = plan_->slot(w)) return values_[*k];
    throw DataError("word not tracked by this signature table");
  }

  SignatureResult result() const {
    SignatureResult r{start_time_, current_time_, mu_.value(), plan_->requested(), {}};
    r.values.reserve(plan_->emitted().size());
    for (auto k : plan_->emitted()) r.values.push_back(values_[k]);
    return r;
  }

  const EvaluationPlan& plan() const noexcept { return *plan_; }
  DecayRate decay() const noexcept { return mu_; }
  std::size_t start_index() const noexcept { return start_index_; }
  std::size_t current_index() const noexcept { return current_index_; }
  double start_time() const noexcept { return start_time_; }
  double current_time() const noexcept { return current_time_; }
  std::size_t steps() const noexcept { return current_index_ - start_index_; }
  /// Number of cell updates performed so far: plan size times steps.
  std::uint64_t update_count() const noexcept { return updates_; }

 private:
  friend SignatureResult compute_signature(const DiscretePath&, std::size_t, std::size_t, DecayRate,
                                           const WordUniverse&, std::uint64_t*);

  void step(std::span<const double> dx, double weight) {
    const auto& cells = plan_->cells();
    next_[0] = 1.0;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto& c = cells[k];
      if (c.sign == Sign::head) {
        next_[k] = weight * (values_[k] + dx[c.base] * values_[c.parent]);
      } else {
        next_[k] = weight * values_[k] + dx[c.base] * next_[c.parent];
      }
    }
    values_.swap(next_);
    updates_ += cells.size();
  }

  std::shared_ptr<const EvaluationPlan> plan_;
  DecayRate mu_;
  std::size_t start_index_;
  std::size_t current_index_;
  double start_time_;
  double current_time_;
  std::vector<double> last_row_;
  std::vector<double> increments_;
  std::vector<double> values_;  // at current_index_
  std::vector<double> next_;    // scratch; holds the previous step after a swap
  std::uint64_t updates_ = 0;
};

/// Functional form of SignatureTable::extend.
inline SignatureTable extend_table(SignatureTable table, double time, std::span<const double> row) {
  table.extend(time, row);
  return table;
}

inline void check_universe_fits(const WordUniverse& universe, const DiscretePath& path) {
  if (universe.max_base() > path.dim()) throw DataError("universe uses letters outside the path alphabet");
}

/// S^mu(X)_{t_m, t_n}(w) for every w in `universe`. Costs plan size times (n - m) updates;
/// pass `update_count` to receive the exact number.
inline SignatureResult compute_signature(const DiscretePath& path, std::size_t m, std::size_t n, DecayRate mu,
                                         const WordUniverse& universe, std::uint64_t* update_count = nullptr) {
  if (m > n) throw DataError("signature start index " + std::to_string(m) + " exceeds end index " + std::to_string(n));
  if (n > path.last_index())
    throw DataError("signature end index " + std::to_string(n) + " beyond last observation " +
                    std::to_string(path.last_index()));
  check_universe_fits(universe, path);

  SignatureTable table(universe, mu, path.row(m), path.time(m), m);
  std::vector<double> dx(path.dim());
  for (std::size_t l = m + 1; l <= n; ++l) {
    const auto prev = path.row(l - 1);
    const auto cur = path.row(l);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = cur[i] - prev[i];
    table.step(dx, mu.step_weight(path.time(l - 1), path.time(l)));
    std::copy(cur.begin(), cur.end(), table.last_row_.begin());
    table.current_time_ = path.time(l);
    table.current_index_ = l;
  }
  if (update_count) *update_count = table.update_count();
  return table.result();
}

/// Whole path, [t_0, t_N].
inline SignatureResult compute_signature(const DiscretePath& path, DecayRate mu, const WordUniverse& universe) {
  return compute_signature(path, 0, path.last_index(), mu, universe);
}

enum class Anchor { head, tail };

/// S^mu[i^a i^+] - S^mu[i^a i^-] for anchor a: the (weighted) quadratic variation of
/// component i over [t_m, t_n].
inline double quadratic_variation(const DiscretePath& path, std::size_t i, std::size_t m, std::size_t n, DecayRate mu,
                                  Anchor anchor) {
  if (m >= n) throw DataError("quadratic variation needs start index < end index");
  if (i >= path.dim()) throw DataError("component index outside the path alphabet");
  const Letter first = anchor == Anchor::head ? Letter::head(i) : Letter::tail(i);
  const Word with_tail{first, Letter::tail(i)};
  const Word with_head{first, Letter::head(i)};
  const auto r = compute_signature(path, m, n, mu, WordUniverse::from_words({with_head, with_tail}));
  return r.at(with_tail) - r.at(with_head);
}

/// True when flipping the sign of w's first letter leaves the flat signature unchanged.
inline bool first_letter_sign_invariance_check(const DiscretePath& path, std::size_t m, std::size_t n,
                                               const Word& w) {
  if (w.is_empty()) throw ConfigError("first-letter sign check needs a nonempty word");
  const Word other = w.with_first_sign(flipped(w.front().sign));
  const auto r = compute_signature(path, m, n, DecayRate::flat(), WordUniverse::from_words({w, other}));
  return r.at(w) == r.at(other);
}

/// Header row of rendered words, then one row of values at 17 significant digits.
inline void write_signature_tsv(std::ostream& os, const SignatureResult& r, const Alphabet& a) {
  for (std::size_t k = 0; k < r.words.size(); ++k) {
    if (k) os << '\t';
    os << render_word(r.words[k], a);
  }
  os << '\n';
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (k) os << '\t';
    os << text::precise(r.values[k]);
  }
  os << '\n';
}

/// Reads the two-row form written by write_signature_tsv. Times and mu are not stored.
inline SignatureResult read_signature_tsv(std::string_view content, const Alphabet& a) {
  std::vector<std::string_view> lines;
  for (auto line : text::split(content, '\n')) {
    if (!text::trim(line).empty()) lines.push_back(text::trim_right(line));
  }
  if (lines.size() != 2) throw DataError("signature TSV must have a header row and one value row");
  SignatureResult r;
  for (auto f : text::split(lines[0], '\t')) r.words.push_back(parse_word(f, a));
  for (auto f : text::split(lines[1], '\t')) {
    double v;
    if (!text::parse_double(f, v)) throw DataError("non-numeric signature value '" + std::string(f) + "'");
    r.values.push_back(v);
  }
  if (r.words.size() != r.values.size()) throw DataError("signature TSV header and values differ in length");
  return r;
}

}  // namespace dsig
