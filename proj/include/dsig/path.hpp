#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/words.hpp"

namespace dsig {

/// Non-negative exponential decay rate, in inverse time units. Zero gives the flat signature.
class DecayRate {
 public:
  constexpr DecayRate() = default;
  explicit DecayRate(double mu) : mu_(mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("decay rate must be finite and >= 0");
  }

  static DecayRate flat() { return DecayRate(); }
  static DecayRate from_half_life(double h) { return DecayRate(std::log(2.0) / h); }

  double value() const noexcept { return mu_; }
  bool is_flat() const noexcept { return mu_ == 0.0; }

  /// e^{-mu * dt}. Every code path that needs a step weight goes through here.
  double step_weight(double t_prev, double t_next) const noexcept { return std::exp(-mu_ * (t_next - t_prev)); }

 private:
  double mu_ = 0.0;
};

/// Values of a d-dimensional path observed at strictly increasing times t_0 < ... < t_N.
class DiscretePath {
 public:
  DiscretePath() = default;

  /// `values` is row-major: row n holds the d components observed at times[n].
  DiscretePath(Alphabet alphabet, std::vector<double> times, std::vector<double> values)
      : alphabet_(std::move(alphabet)), times_(std::move(times)), values_(std::move(values)) {
    if (alphabet_.empty()) throw DataError("path needs at least one component");
    if (times_.empty()) throw DataError("path needs at least one observation time");
    if (values_.size() != times_.size() * alphabet_.size())
      throw DataError("path values do not match " + std::to_string(times_.size()) + " times x " +
                      std::to_string(alphabet_.size()) + " components");
    for (std::size_t n = 0; n < times_.size(); ++n) {
      if (!std::isfinite(times_[n])) throw DataError("non-finite observation time");
      if (n > 0 && !(times_[n] > times_[n - 1]))
        throw DataError("observation times must be strictly increasing (index " + std::to_string(n) + ")");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw DataError("non-finite path value");
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t dim() const noexcept { return alphabet_.size(); }
  std::size_t size() const noexcept { return times_.size(); }
  /// Index of the final observation, N.
  std::size_t last_index() const noexcept { return times_.size() - 1; }

  const std::vector<double>& times() const noexcept { return times_; }
  double time(std::size_t n) const { return times_.at(n); }

  std::span<const double> row(std::size_t n) const {
    return std::span<const double>(values_).subspan(n * dim(), dim());
  }
  double value(std::size_t n, std::size_t i) const { return values_[n * dim() + i]; }

  /// X^i_{t_{n+1}} - X^i_{t_n}
  double increment(std::size_t n, std::size_t i) const { return value(n + 1, i) - value(n, i); }

  std::optional<std::size_t> index_of_time(double t) const {
    for (std::size_t n = 0; n < times_.size(); ++n) {
      const double tol = 1e-9 * std::max(1.0, std::abs(times_[n]));
      if (std::abs(times_[n] - t) <= tol) return n;
    }
    return std::nullopt;
  }

 private:
  Alphabet alphabet_;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace dsig
