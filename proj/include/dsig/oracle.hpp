#pragma once

// Reference evaluations that share no code with the DP engine in signature.hpp.
// They are slow by construction and exist to cross-check it.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/path.hpp"
#include "dsig/words.hpp"

namespace dsig::oracle {

namespace detail {

inline void check_range(const DiscretePath& path, std::size_t m, std::size_t n, const Word& w) {
  if (m > n) throw DataError("oracle: start index exceeds end index");
  if (n > path.last_index()) throw DataError("oracle: end index beyond last observation");
  for (const auto& l : w.letters()) {
    if (l.base >= path.dim()) throw DataError("oracle: word letter outside the path alphabet");
  }
}

// Sum over m <= l_1 R_1 l_2 R_2 ... < n of prod dX^{i_j}_{l_j}, where R_j is "<" when
// letter j+1 is a head and "<=" when it is a tail. `first_weight(l_1)` scales each term.
template <class Weight>
double nested_sum(const DiscretePath& path, std::size_t n, const Word& w, std::size_t pos, std::size_t lo,
                  double partial, const Weight& first_weight) {
  if (pos == w.size()) return partial;
  double total = 0.0;
  for (std::size_t l = lo; l < n; ++l) {
    double term = partial * path.increment(l, w[pos].base);
    if (pos == 0) term *= first_weight(l);
    if (pos + 1 < w.size()) {
      const std::size_t next_lo = w[pos + 1].sign == Sign::head ? l + 1 : l;
      total += nested_sum(path, n, w, pos + 1, next_lo, term, first_weight);
    } else {
      total += term;
    }
  }
  return total;
}

// The defining recursion, evaluated literally with no caching.
inline double unrolled(const DiscretePath& path, std::size_t m, std::size_t n, double mu, const Word& w,
                       std::size_t len) {
  if (len == 0) return 1.0;
  if (n == m) return 0.0;
  const Letter last = w[len - 1];
  const double e = std::exp(-mu * (path.time(n) - path.time(n - 1)));
  const double dx = path.value(n, last.base) - path.value(n - 1, last.base);
  if (last.sign == Sign::head) {
    return e * (unrolled(path, m, n - 1, mu, w, len) + dx * unrolled(path, m, n - 1, mu, w, len - 1));
  }
  return e * unrolled(path, m, n - 1, mu, w, len) + dx * unrolled(path, m, n, mu, w, len - 1);
}

}  // namespace detail

/// Signature value by explicit summation. Flat case: nested index sums for any length.
/// Decayed case: weighted closed-form sums for words of length <= 2, otherwise the
/// recursion unrolled step by step. Cost grows like (n - m)^{|w|}.
inline double oracle_signature(const DiscretePath& path, std::size_t m, std::size_t n, double mu, const Word& w) {
  detail::check_range(path, m, n, w);
  if (w.is_empty()) return 1.0;
  if (mu == 0.0) {
    return detail::nested_sum(path, n, w, 0, m, 1.0, [](std::size_t) { return 1.0; });
  }
  if (w.size() <= 2) {
    const bool head_first = w.front().sign == Sign::head;
    const double tn = path.time(n);
    return detail::nested_sum(path, n, w, 0, m, 1.0, [&](std::size_t l) {
      const double anchor = head_first ? path.time(l) : path.time(l + 1);
      return std::exp(-mu * (tn - anchor));
    });
  }
  return detail::unrolled(path, m, n, mu, w, w.size());
}

/// Flat signature from the summation definition, one cumulative pass per prefix:
/// S[w.i-](l) = sum_{j<l} S[w](j) dX^i_j and S[w.i+](l) = sum_{j<l} S[w](j+1) dX^i_j.
inline double flat_signature(const DiscretePath& path, std::size_t m, std::size_t n, const Word& w) {
  detail::check_range(path, m, n, w);
  const std::size_t span = n - m + 1;
  std::vector<double> series(span, 1.0);  // prefix value at t_m .. t_n
  std::vector<double> next(span);
  for (const auto& letter : w.letters()) {
    double acc = 0.0;
    next[0] = 0.0;
    for (std::size_t j = 0; j + 1 < span; ++j) {
      const double inner = letter.sign == Sign::head ? series[j] : series[j + 1];
      acc += inner * path.increment(m + j, letter.base);
      next[j + 1] = acc;
    }
    series.swap(next);
  }
  return series.back();
}

/// Sum over m <= l < n of e^{-mu (t_n - t_l)} (dX^i_l)^2 when anchored at the head,
/// e^{-mu (t_n - t_{l+1})} (dX^i_l)^2 when anchored at the tail.
inline double weighted_squared_increments(const DiscretePath& path, std::size_t i, std::size_t m, std::size_t n,
                                          double mu, bool tail_anchor) {
  double total = 0.0;
  for (std::size_t l = m; l < n; ++l) {
    const double d = path.increment(l, i);
    const double anchor = tail_anchor ? path.time(l + 1) : path.time(l);
    total += std::exp(-mu * (path.time(n) - anchor)) * d * d;
  }
  return total;
}

}  // namespace dsig::oracle
