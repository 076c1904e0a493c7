#pragma once

// Binary logistic regression trained by full-batch gradient descent, and the
// per-column standardization applied before fitting.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dsig/error.hpp"

namespace dsig {

using Rows = std::vector<std::vector<double>>;

/// Column means and standard deviations estimated on training rows.
class Standardizer {
 public:
  Standardizer() = default;

  static Standardizer fit(const Rows& rows) {
    if (rows.empty()) throw DataError("cannot standardize zero rows");
    const std::size_t cols = rows.front().size();
    Standardizer s;
    s.mean_.assign(cols, 0.0);
    s.scale_.assign(cols, 0.0);
    const double count = static_cast<double>(rows.size());
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < cols; ++j) s.mean_[j] += r[j];
    }
    for (auto& m : s.mean_) m /= count;
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double d = r[j] - s.mean_[j];
        s.scale_[j] += d * d;
      }
    }
    for (auto& v : s.scale_) {
      v = std::sqrt(v / count);
      if (!(v > 0.0)) v = 1.0;  // constant column: centre only
    }
    return s;
  }

  std::vector<double> apply(std::span<const double> row) const {
    if (row.size() != mean_.size()) throw DataError("row width differs from standardization width");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean_[j]) / scale_[j];
    return out;
  }

  Rows apply(const Rows& rows) const {
    Rows out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(apply(r));
    return out;
  }

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& scale() const noexcept { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct LogisticSettings {
  double learning_rate = 0.1;
  std::size_t iterations = 5000;
  double l2 = 1e-4;  // penalty (l2 / 2) * |w|^2, intercept excluded
};

struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;

  double margin(std::span<const double> row) const {
    double z = intercept;
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * row[j];
    return z;
  }

  /// P(label = 1 | row).
  double predict(std::span<const double> row) const { return 1.0 / (1.0 + std::exp(-margin(row))); }

  int classify(std::span<const double> row) const { return predict(row) >= 0.5 ? 1 : 0; }
};

inline double logistic_predict(const LogisticModel& model, std::span<const double> row) { return model.predict(row); }

namespace detail {
// log(1 + e^z) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
}  // namespace detail

/// Mean negative log-likelihood plus (l2/2)|w|^2.
inline double logistic_loss(const LogisticModel& model, const Rows& x, std::span<const int> y, double l2) {
  double total = 0.0;
  for (std::size_t r = 0; r < x.size(); ++r) {
    const double z = model.margin(x[r]);
    total += detail::softplus(z) - (y[r] == 1 ? z : 0.0);
  }
  double penalty = 0.0;
  for (double w : model.weights) penalty += w * w;
  return total / static_cast<double>(x.size()) + 0.5 * l2 * penalty;
}

struct LogisticGradient {
  std::vector<double> weights;
  double intercept = 0.0;
};

inline LogisticGradient logistic_gradient(const LogisticModel& model, const Rows& x, std::span<const int> y,
                                          double l2) {
  LogisticGradient g{std::vector<double>(model.weights.size(), 0.0), 0.0};
  for (std::size_t r = 0; r < x.size(); ++r) {
    const double residual = model.predict(x[r]) - static_cast<double>(y[r]);
    for (std::size_t j = 0; j < g.weights.size(); ++j) g.weights[j] += residual * x[r][j];
    g.intercept += residual;
  }
  const double inv = 1.0 / static_cast<double>(x.size());
  for (std::size_t j = 0; j < g.weights.size(); ++j) g.weights[j] = g.weights[j] * inv + l2 * model.weights[j];
  g.intercept *= inv;
  return g;
}

/// Gradient descent from zero weights. If `loss_history` is given it receives the loss
/// before each update and once more at the end.
inline LogisticModel logistic_fit(const Rows& x, std::span<const int> y, const LogisticSettings& settings,
                                  std::vector<double>* loss_history = nullptr) {
  if (x.empty() || x.size() != y.size()) throw DataError("logistic fit needs matching, nonempty rows and labels");
  if (!(settings.learning_rate > 0.0) || !(settings.l2 >= 0.0))
    throw ConfigError("learning rate must be positive and L2 strength non-negative");
  const std::size_t cols = x.front().size();
  bool has0 = false, has1 = false;
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != cols) throw DataError("logistic fit rows differ in width");
    for (double v : x[r]) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value");
    }
    if (y[r] == 0) has0 = true;
    else if (y[r] == 1) has1 = true;
    else throw DataError("labels must be 0 or 1");
  }
  if (!has0 || !has1) throw DataError("logistic fit needs at least one row of each class");

  LogisticModel model{std::vector<double>(cols, 0.0), 0.0};
  for (std::size_t it = 0; it < settings.iterations; ++it) {
    if (loss_history) loss_history->push_back(logistic_loss(model, x, y, settings.l2));
    const auto g = logistic_gradient(model, x, y, settings.l2);
    for (std::size_t j = 0; j < cols; ++j) model.weights[j] -= settings.learning_rate * g.weights[j];
    model.intercept -= settings.learning_rate * g.intercept;
    if (!std::isfinite(model.intercept))
      throw NumericError("logistic regression diverged; try a smaller learning rate");
  }
  const double final_loss = logistic_loss(model, x, y, settings.l2);
  if (!std::isfinite(final_loss)) throw NumericError("logistic loss is not finite; try a smaller learning rate");
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw NumericError("logistic regression diverged; try a smaller learning rate");
  }
  if (loss_history) loss_history->push_back(final_loss);
  return model;
}

inline double accuracy(const LogisticModel& model, const Rows& x, std::span<const int> y) {
  if (x.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < x.size(); ++r) correct += model.classify(x[r]) == y[r] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(x.size());
}

}  // namespace dsig
