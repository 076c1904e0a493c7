// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Tolerances are fixed here; nothing is tuned at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dsig.hpp"

using namespace dsig;

namespace {

using Clock = std::chrono::steady_clock;

const double kLn2 = std::log(2.0);
const std::string kSample = std::string(DSIG_TEST_DATA) + "/sample1.dat";

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s  %-34s %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

DiscretePath random_path(std::mt19937_64& rng, std::size_t d, std::size_t steps) {
  std::uniform_real_distribution<double> value(-1.0, 1.0), gap(0.05, 1.0);
  std::vector<double> times(steps + 1), values((steps + 1) * d);
  double t = 0.0;
  for (auto& x : times) {
    x = t;
    t += gap(rng);
  }
  for (auto& v : values) v = value(rng);
  return DiscretePath(Alphabet::numbered(d), std::move(times), std::move(values));
}

// The shared random corpus: d in 1..3, N in 1..40.
std::vector<DiscretePath> corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 3), steps(1, 40);
  std::vector<DiscretePath> out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto d = dim(rng);
    out.push_back(random_path(rng, d, steps(rng)));
  }
  return out;
}

double rel_err(double got, double want) { return got == want ? 0.0 : std::abs(got - want) / std::abs(want); }

DiscretePath sample_path() { return forward_fill(read_event_stream(kSample)); }

}  // namespace

int main() {
  const auto paths = corpus(200, 20240601);

  criterion("worked example, flat (k=2)", [] {
    const auto start = Clock::now();
    const auto path = sample_path();
    const auto r = compute_signature(path, DecayRate::flat(), enumerate_words(path.alphabet(), 2, true));
    const double secs = seconds_since(start);
    const std::vector<double> expected{1, 7, 5, 16, 33, 12, 30, 5, 23, -2, 27};
    double worst = r.values.size() == expected.size() ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < expected.size() && k < r.values.size(); ++k)
      worst = std::max(worst, std::abs(r.values[k] - expected[k]));
    return Outcome{worst <= 1e-12 && secs < 1.0, fmt("max abs err %.1e (<= 1e-12), %.4f s (< 1 s)", worst, secs)};
  });

  criterion("worked example, mu = ln 2 (k=2)", [] {
    const auto start = Clock::now();
    const auto path = sample_path();
    const auto r = compute_signature(path, DecayRate(kLn2), enumerate_words(path.alphabet(), 2, false));
    const double secs = seconds_since(start);
    // Printed values in hundredths; a value matches when within half a hundredth.
    const std::vector<std::pair<const char*, int>> printed{
        {"1-", 308},     {"1+", 491},     {"2-", 270},    {"2+", 404},     {"1-.1-", 337},
        {"1-.1+", 1165}, {"1-.2-", 333},  {"1-.2+", 1256}, {"1+.1-", 674},  {"1+.1+", 1957},
        {"1+.2-", 666},  {"1+.2+", 2016}, {"2-.1-", -63},  {"2-.1+", 861},  {"2-.2-", -125},
        {"2-.2+", 1219}, {"2+.1-", 21},   {"2+.1+", 1371}, {"2+.2-", -133}, {"2+.2+", 1834}};
    double worst = 0.0;  // in hundredths
    for (const auto& [w, hundredths] : printed)
      worst = std::max(worst, std::abs(100.0 * r.at(parse_word(w, path.alphabet())) - hundredths));
    const bool ok = worst <= 0.5 && secs < 1.0;
    return Outcome{ok, fmt("%zu values, max |err| %.17g hundredths (<= 0.5), %.4f s (< 1 s)", printed.size(), worst,
                           secs)};
  });

  criterion("oracle equivalence", [&] {
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t checked = 0;
    std::mt19937_64 rng(7);
    for (const auto& p : paths) {
      std::uniform_int_distribution<std::size_t> idx(0, p.last_index());
      std::size_t m = idx(rng), n = idx(rng);
      if (m > n) std::swap(m, n);
      const auto u = enumerate_words(p.alphabet(), 3, false);
      for (double mu : {0.0, kLn2, 5.0}) {
        const auto r = compute_signature(p, m, n, DecayRate(mu), u);
        for (std::size_t k = 0; k < u.size(); ++k) {
          worst = std::max(worst, rel_err(r.values[k], oracle::oracle_signature(p, m, n, mu, u.words()[k])));
          ++checked;
        }
      }
    }
    const double secs = seconds_since(start);
    return Outcome{worst <= 1e-9 && secs < 60.0,
                   fmt("%zu values, max rel err %.1e (<= 1e-9), %.1f s (< 60 s)", checked, worst, secs)};
  });

  criterion("quadratic variation", [&] {
    const auto ex = sample_path();
    const double q1 = quadratic_variation(ex, 0, 0, 4, DecayRate::flat(), Anchor::head);
    const double q2 = quadratic_variation(ex, 1, 0, 4, DecayRate::flat(), Anchor::head);
    double worst = 0.0;
    for (const auto& p : paths) {
      if (p.last_index() == 0) continue;
      for (std::size_t i = 0; i < p.dim(); ++i) {
        for (double mu : {0.0, kLn2, 5.0}) {
          for (Anchor a : {Anchor::head, Anchor::tail}) {
            const double got = quadratic_variation(p, i, 0, p.last_index(), DecayRate(mu), a);
            const double want =
                oracle::weighted_squared_increments(p, i, 0, p.last_index(), mu, a == Anchor::tail);
            worst = std::max(worst, std::abs(got - want) / std::abs(want));
          }
        }
      }
    }
    return Outcome{q1 == 17.0 && q2 == 29.0 && worst <= 1e-9,
                   fmt("example %g, %g (17, 29 exact); max rel err %.1e (<= 1e-9)", q1, q2, worst)};
  });

  criterion("first-letter sign invariance", [&] {
    std::size_t words = 0, broken = 0;
    double worst = 0.0;
    for (const auto& p : paths) {
      const auto u = enumerate_words(p.alphabet(), 3, false);
      for (const auto& w : u.feature_words()) {
        ++words;
        if (!first_letter_sign_invariance_check(p, 0, p.last_index(), w)) ++broken;
      }
      const auto r = compute_signature(p, DecayRate::flat(), u);
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double want = oracle::flat_signature(p, 0, p.last_index(), u.words()[k]);
        worst = std::max(worst, rel_err(r.values[k], want));
      }
    }
    return Outcome{broken == 0 && worst <= 1e-12,
                   fmt("%zu/%zu words exact; mu=0 vs flat max rel err %.1e (<= 1e-12)", words - broken, words, worst)};
  });

  criterion("incremental consistency", [&] {
    std::size_t identical = 0;
    for (std::size_t k = 0; k < 50; ++k) {
      const auto& p = paths[k];
      const auto u = enumerate_words(p.alphabet(), 3, false);
      bool same = true;
      for (double mu : {0.0, kLn2, 5.0}) {
        SignatureTable table(u, DecayRate(mu), p.row(0), p.time(0));
        for (std::size_t n = 1; n < p.size(); ++n) table = extend_table(std::move(table), p.time(n), p.row(n));
        same = same && table.result().values == compute_signature(p, DecayRate(mu), u).values;
      }
      identical += same ? 1 : 0;
    }
    return Outcome{identical == 50, fmt("%zu/50 paths bit-identical", identical)};
  });

  criterion("word counts", [] {
    const auto a = Alphabet::numbered(4);
    const std::vector<std::size_t> only4{3}, two_and_four{1, 3};
    const LetterPattern contains4({Letter::head(3), Letter::tail(3)});
    std::string got;
    bool ok = true;
    const std::size_t expected[4][3] = {{1, 3, 7}, {4, 36, 292}, {2, 10, 42}, {1, 15, 163}};
    for (int row = 0; row < 4; ++row) {
      for (std::size_t k = 1; k <= 3; ++k) {
        std::size_t c = 0;
        switch (row) {
          case 0: c = enumerate_words(a, only4, k, true).feature_count(); break;
          case 1: c = enumerate_words(a, k, true).feature_count(); break;
          case 2: c = enumerate_words(a, two_and_four, k, true).feature_count(); break;
          default: c = enumerate_words(a, k, true, contains4).feature_count(); break;
        }
        ok = ok && c == expected[row][k - 1];
        got += std::to_string(c) + (k < 3 ? "," : row < 3 ? " " : "");
      }
    }
    return Outcome{ok, "(" + got + ")"};
  });

  criterion("ingestion", [] {
    const auto filled = sample_path();
    const std::vector<double> times{0, 1, 1.5, 2.5, 3}, values{1, 1, 3, 4, 3, 2, 5, 2, 8, 6};
    bool table_ok = filled.size() == times.size() && filled.dim() == 2;
    for (std::size_t n = 0; table_ok && n < times.size(); ++n) {
      table_ok = filled.time(n) == times[n] && filled.value(n, 0) == values[2 * n] &&
                 filled.value(n, 1) == values[2 * n + 1];
    }

    SyntheticConfig cfg;
    std::size_t sessions = 0, good = 0;
    for (const auto& s : generate_sessions(cfg)) {
      ++sessions;
      const auto grid = std::get<0>(subsample_session(s.snapshots, SessionSpec::for_label(s.label)));
      const auto sp = normalize_and_featurize(grid, s.label);
      bool ok = sp.path.value(sp.path.last_index(), 3) == 1.0;
      for (std::size_t n = 0; n < sp.path.size(); ++n) ok = ok && std::abs(sp.path.value(n, 2)) <= 1.0;
      good += ok ? 1 : 0;
    }

    const SessionSpec spec{540, 550};
    const MarketSnapshot z0{540.3, 101, 100, 10, 10, 0}, z1{540.9, 101, 100, 10, 10, 0},
        later{545.0, 102, 100, 10, 12, 500};
    const bool discard_ok = std::holds_alternative<Discarded>(subsample_session({z0, z1, later}, spec)) &&
                            std::holds_alternative<Discarded>(subsample_session({later}, spec));
    return Outcome{table_ok && good == sessions && discard_ok,
                   fmt("filled table %s; %zu/%zu synthetic sessions with |X3| <= 1, X4_N = 1; discard rule %s",
                       table_ok ? "exact" : "WRONG", good, sessions, discard_ok ? "fires" : "MISSING")};
  });

  criterion("experiment", [] {
    const auto start = Clock::now();
    SyntheticConfig synth;  // 200 per class, seed 1
    const auto sessions = to_labeled(generate_sessions(synth));
    ExperimentConfig cfg;
    cfg.features.restrict_to = {"2", "4"};
    cfg.features.max_len = 3;
    const auto real = run_experiment(sessions, cfg);

    // Null runs: labels permuted; 0.7 split keeps at least 100 test rows.
    cfg.shuffle_labels = true;
    cfg.train_fraction = 0.7;
    double lo = 1.0, hi = 0.0;
    std::size_t test_rows = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      cfg.seed = seed;
      const auto r = run_experiment(sessions, cfg);
      lo = std::min(lo, r.test_accuracy);
      hi = std::max(hi, r.test_accuracy);
      test_rows = r.test_rows;
    }
    const double secs = seconds_since(start);
    const bool ok = real.sessions_used == 400 && real.feature_count == 42 && real.test_accuracy >= 0.95 &&
                    lo >= 0.35 && hi <= 0.65 && test_rows >= 100 && secs < 300.0;
    return Outcome{ok, fmt("%zu sessions, %zu features, test acc %.4f (>= 0.95); null over 20 seeds, %zu test rows: "
                           "[%.3f, %.3f] within [0.35, 0.65]; %.1f s (< 300 s)",
                           real.sessions_used, real.feature_count, real.test_accuracy, test_rows, lo, hi, secs)};
  });

  criterion("performance", [] {
    std::mt19937_64 rng(99);
    const auto p = random_path(rng, 4, 150);
    const auto u = enumerate_words(p.alphabet(), 3, true);
    std::uint64_t updates = 0;
    const auto start = Clock::now();
    const auto r = compute_signature(p, 0, 150, DecayRate::flat(), u, &updates);
    const double ms = 1e3 * seconds_since(start);
    const bool ok = u.feature_count() == 292 && r.values.size() == 293 && updates == 293u * 150u && ms < 100.0;
    return Outcome{ok, fmt("%zu words, %llu updates (= 293*150 = 43950), %.3f ms (< 100 ms)", u.feature_count(),
                           static_cast<unsigned long long>(updates), ms)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
