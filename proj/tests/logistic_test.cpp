#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dsig/logistic.hpp"

using namespace dsig;

namespace {

struct Dataset {
  Rows x;
  std::vector<int> y;
};

Dataset gaussian_blobs(std::mt19937_64& rng, std::size_t per_class, std::size_t cols, double separation) {
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset d;
  for (std::size_t k = 0; k < 2 * per_class; ++k) {
    const int label = static_cast<int>(k % 2);
    std::vector<double> row(cols);
    for (auto& v : row) v = g(rng);
    row[0] += label ? separation : -separation;
    d.x.push_back(std::move(row));
    d.y.push_back(label);
  }
  return d;
}

}  // namespace

TEST_CASE("separable data is classified perfectly") {
  const Rows x{{-1.0}, {-2.0}, {-0.5}, {1.0}, {2.0}, {0.5}};
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto model = logistic_fit(x, y, {});
  CHECK(accuracy(model, x, y) == 1.0);
  CHECK(model.weights[0] > 0.0);
  CHECK(logistic_predict(model, std::vector<double>{3.0}) > 0.9);
}

TEST_CASE("no iterations leaves the zero model") {
  const Rows x{{-1.0}, {1.0}};
  const std::vector<int> y{0, 1};
  LogisticSettings s;
  s.iterations = 0;
  const auto model = logistic_fit(x, y, s);
  CHECK(model.predict(x[0]) == 0.5);
  CHECK(model.weights == std::vector<double>{0.0});
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(19);
  const auto d = gaussian_blobs(rng, 20, 4, 0.5);
  std::normal_distribution<double> g(0.0, 0.5);
  LogisticModel m{{g(rng), g(rng), g(rng), g(rng)}, g(rng)};
  const double l2 = 0.3, h = 1e-6;
  const auto grad = logistic_gradient(m, d.x, d.y, l2);
  for (std::size_t j = 0; j <= 4; ++j) {
    auto plus = m, minus = m;
    double& p = j < 4 ? plus.weights[j] : plus.intercept;
    double& q = j < 4 ? minus.weights[j] : minus.intercept;
    p += h;
    q -= h;
    const double numeric = (logistic_loss(plus, d.x, d.y, l2) - logistic_loss(minus, d.x, d.y, l2)) / (2 * h);
    const double analytic = j < 4 ? grad.weights[j] : grad.intercept;
    CHECK(std::abs(numeric - analytic) <= 1e-6);
  }
}

TEST_CASE("loss decreases monotonically with a small step") {
  std::mt19937_64 rng(23);
  const auto d = gaussian_blobs(rng, 50, 3, 1.0);
  LogisticSettings s;
  s.learning_rate = 1e-3;
  s.iterations = 300;
  std::vector<double> history;
  logistic_fit(d.x, d.y, s, &history);
  REQUIRE(history.size() == 301);
  for (std::size_t k = 1; k < history.size(); ++k) REQUIRE(history[k] <= history[k - 1]);
  CHECK(history.front() == Catch::Approx(std::log(2.0)));
}

TEST_CASE("loss is stable for extreme margins") {
  const LogisticModel m{{1000.0}, 0.0};
  const Rows x{{1.0}, {-1.0}};
  const std::vector<int> y{0, 1};
  CHECK(logistic_loss(m, x, y, 0.0) == Catch::Approx(1000.0));
}

TEST_CASE("standardizer centres and scales using the fitted rows") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g(5.0, 3.0);
  Rows x(200, std::vector<double>(3));
  for (auto& r : x) {
    r[0] = g(rng);
    r[1] = 1e6 + g(rng);
    r[2] = 7.0;  // constant
  }
  const auto s = Standardizer::fit(x);
  const auto z = s.apply(x);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0, var = 0.0;
    for (const auto& r : z) mean += r[j];
    mean /= 200.0;
    for (const auto& r : z) var += (r[j] - mean) * (r[j] - mean);
    var /= 200.0;
    CHECK(std::abs(mean) <= 1e-9);
    if (j < 2) CHECK(std::abs(var - 1.0) <= 1e-6);
    else CHECK(var == 0.0);
  }
  CHECK(s.scale()[2] == 1.0);
  CHECK_THROWS_AS(s.apply(std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(Standardizer::fit({}), DataError);
}

TEST_CASE("divergence is reported") {
  const Rows x{{1e200}, {-1e200}};
  const std::vector<int> y{1, 0};
  LogisticSettings s;
  s.learning_rate = 1e10;
  s.iterations = 50;
  CHECK_THROWS_AS(logistic_fit(x, y, s), NumericError);
}

TEST_CASE("fit argument errors") {
  const Rows x{{1.0}, {2.0}};
  CHECK_THROWS_AS(logistic_fit(x, std::vector<int>{1, 1}, {}), DataError);
  CHECK_THROWS_AS(logistic_fit(x, std::vector<int>{0, 2}, {}), DataError);
  CHECK_THROWS_AS(logistic_fit(x, std::vector<int>{0}, {}), DataError);
  CHECK_THROWS_AS(logistic_fit(x, std::vector<int>{0, 1}, {.learning_rate = 0.0}), ConfigError);
  CHECK_THROWS_AS(logistic_fit(Rows{{1.0}, {NAN}}, std::vector<int>{0, 1}, {}), DataError);
}
