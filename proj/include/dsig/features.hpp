#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/market.hpp"
#include "dsig/signature.hpp"
#include "dsig/words.hpp"

namespace dsig {

/// Signature of the whole session [t_0, t_N], nonempty words only, in universe order.
inline std::vector<double> session_to_feature_row(const SessionPath& session, DecayRate mu,
                                                  const WordUniverse& universe) {
  if (session.path.dim() != kSessionComponents) throw DataError("session path must have 4 components");
  return compute_signature(session.path, mu, universe).feature_values();
}

/// Raw normalized values, component-major: X1 at t_0..t_N, then X2, X3, X4.
inline std::vector<double> raw_feature_row(const SessionPath& session) {
  const auto& p = session.path;
  std::vector<double> out;
  out.reserve(p.size() * p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (std::size_t n = 0; n < p.size(); ++n) out.push_back(p.value(n, i));
  }
  return out;
}

inline std::vector<std::string> raw_feature_names(std::size_t points) {
  std::vector<std::string> names;
  names.reserve(points * kSessionComponents);
  for (std::size_t i = 1; i <= kSessionComponents; ++i) {
    for (std::size_t n = 0; n < points; ++n) names.push_back("X" + std::to_string(i) + "_" + std::to_string(n));
  }
  return names;
}

inline std::vector<std::string> feature_names(const WordUniverse& universe, const Alphabet& a) {
  std::vector<std::string> names;
  for (const auto& w : universe.feature_words()) names.push_back(render_word(w, a));
  return names;
}

/// One row per session; label 0 = morning, 1 = afternoon.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::string> row_names;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t size() const noexcept { return rows.size(); }

  void validate() const {
    if (rows.size() != labels.size() || rows.size() != row_names.size())
      throw DataError("feature matrix rows, names and labels differ in count");
    for (const auto& r : rows) {
      if (r.size() != columns.size()) throw DataError("feature matrix is not rectangular");
    }
    for (int y : labels) {
      if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    }
  }
};

}  // namespace dsig
