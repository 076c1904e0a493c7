// dsig: discrete signatures from the command line.
//
//   dsig words       enumerate a word universe
//   dsig compute     signature of an event-stream file
//   dsig ingest-market  snapshot file(s) -> normalized session path TSV
//   dsig synth       write synthetic morning/afternoon sessions
//   dsig experiment  morning/afternoon logistic-regression experiment
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsig.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

std::vector<std::size_t> restrict_indices(const std::vector<std::string>& labels, const dsig::Alphabet& a) {
  std::vector<std::size_t> out;
  for (const auto& l : labels) {
    const auto i = a.find(l);
    if (!i) throw dsig::ConfigError("--restrict names unknown letter '" + l + "'");
    out.push_back(*i);
  }
  if (out.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(i);
  }
  return out;
}

std::optional<dsig::LetterPattern> pattern_option(const std::string& text, const dsig::Alphabet& a) {
  if (text.empty()) return std::nullopt;
  try {
    return dsig::parse_pattern(text, a);
  } catch (const dsig::DataError& e) {
    throw dsig::ConfigError(std::string("--pattern: ") + e.what());
  }
}

std::optional<bool> half_option(bool half, bool full) {
  if (half) return true;
  if (full) return false;
  return std::nullopt;
}

dsig::MeanConvention mean_convention(const std::string& s) {
  if (s == "population") return dsig::MeanConvention::population;
  if (s == "divide-by-minutes") return dsig::MeanConvention::divide_by_minutes;
  throw dsig::ConfigError("--mean-convention must be 'population' or 'divide-by-minutes'");
}

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    dsig::text::write_file(path, content);
  }
}

struct WordsArgs {
  std::size_t alphabet = 4;
  std::vector<std::string> restrict_to;
  std::size_t max_len = 2;
  bool half = false;
  std::string pattern;
};

int run_words(const WordsArgs& args) {
  const auto a = dsig::Alphabet::numbered(args.alphabet);
  const auto u = dsig::enumerate_words(a, restrict_indices(args.restrict_to, a), args.max_len, args.half,
                                       pattern_option(args.pattern, a));
  std::ostringstream out;
  out << u.feature_count() << '\n';
  for (const auto& w : u.feature_words()) out << dsig::render_word(w, a) << '\n';
  std::cout << out.str();
  return kOk;
}

struct ComputeArgs {
  std::string input;
  double mu = 0.0;
  std::size_t max_len = 2;
  std::optional<double> from, to;
  std::vector<std::string> restrict_to;
  std::string pattern;
  bool half = false, full = false;
  std::string out;
};

int run_compute(const ComputeArgs& args) {
  const auto path = dsig::forward_fill(dsig::read_event_stream(args.input));
  const dsig::DecayRate mu(args.mu);
  auto index_of = [&](std::optional<double> t, std::size_t fallback, const char* flag) {
    if (!t) return fallback;
    if (auto n = path.index_of_time(*t)) return *n;
    throw dsig::DataError(std::string(flag) + " " + dsig::text::shortest(*t) + " is not an observation time");
  };
  const auto m = index_of(args.from, 0, "--from");
  const auto n = index_of(args.to, path.last_index(), "--to");
  if (m > n) throw dsig::DataError("--from is later than --to");
  const auto& a = path.alphabet();
  const bool half = half_option(args.half, args.full).value_or(mu.is_flat());
  const auto u = dsig::enumerate_words(a, restrict_indices(args.restrict_to, a), args.max_len, half,
                                       pattern_option(args.pattern, a));
  std::ostringstream out;
  dsig::write_signature_tsv(out, dsig::compute_signature(path, m, n, mu, u), a);
  emit(args.out, out.str());
  return kOk;
}

struct IngestArgs {
  std::string input;
  std::string label;
  std::string out;
  int minutes = 150;
  std::string convention = "population";
  std::optional<std::size_t> threads;
};

dsig::SessionPath ingest_one(const fs::path& file, dsig::SessionLabel label, int minutes, dsig::MeanConvention conv,
                             std::string* discard_reason) {
  const auto snapshots = dsig::read_snapshots(file);
  const auto base = dsig::SessionSpec::for_label(label);
  const auto outcome = dsig::subsample_session(snapshots, {base.open, base.open + minutes});
  if (const auto* d = std::get_if<dsig::Discarded>(&outcome)) {
    *discard_reason = d->reason;
    return {};
  }
  return dsig::normalize_and_featurize(std::get<0>(outcome), label, conv);
}

int run_ingest(const IngestArgs& args) {
  const auto conv = mean_convention(args.convention);
  std::optional<dsig::SessionLabel> forced;
  if (!args.label.empty()) {
    forced = dsig::parse_session_label(args.label);
    if (!forced) throw dsig::ConfigError("--label must be am or pm");
  }

  if (!fs::is_directory(args.input)) {
    const auto label = forced ? forced : dsig::label_from_filename(args.input);
    if (!label) throw dsig::ConfigError("cannot infer session label from file name; pass --label am|pm");
    std::string reason;
    const auto sp = ingest_one(args.input, *label, args.minutes, conv, &reason);
    if (!reason.empty()) {
      std::cerr << "dsig: session discarded: " << reason << '\n';
      return kData;
    }
    std::ostringstream out;
    dsig::write_session_path(out, sp);
    emit(args.out, out.str());
    return kOk;
  }

  // Batch: every *.am / *.pm file -> <out>/<name>.path.tsv, plus manifest.tsv.
  if (args.out.empty() || args.out == "-") throw dsig::ConfigError("batch ingestion needs --out <directory>");
  fs::create_directories(args.out);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(args.input)) {
    if (e.is_regular_file() && dsig::label_from_filename(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> status(files.size());
  dsig::parallel_for(files.size(), dsig::resolve_thread_count(args.threads), [&](std::size_t k) {
    try {
      std::string reason;
      const auto label = forced ? *forced : *dsig::label_from_filename(files[k]);
      const auto sp = ingest_one(files[k], label, args.minutes, conv, &reason);
      if (!reason.empty()) {
        status[k] = "discarded\t" + reason;
        return;
      }
      std::ostringstream out;
      dsig::write_session_path(out, sp);
      dsig::text::write_file(fs::path(args.out) / (files[k].filename().string() + ".path.tsv"), out.str());
      status[k] = "ok\t";
    } catch (const dsig::Error& e) {
      status[k] = std::string("discarded\t") + e.what();
    }
  });
  std::ostringstream manifest;
  manifest << "session\tstatus\treason\n";
  std::size_t ok = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    manifest << files[k].filename().string() << '\t' << status[k] << '\n';
    ok += status[k].starts_with("ok") ? 1 : 0;
  }
  dsig::text::write_file(fs::path(args.out) / "manifest.tsv", manifest.str());
  std::cout << ok << " of " << files.size() << " sessions ingested\n";
  return kOk;
}

struct SynthArgs {
  std::string out;
  dsig::SyntheticConfig cfg;
};

int run_synth(const SynthArgs& args) {
  const auto sessions = dsig::generate_sessions(args.cfg);
  dsig::write_sessions(args.out, sessions);
  std::cout << sessions.size() << " sessions written to " << args.out << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::string data;
  dsig::ExperimentConfig cfg;
  std::string pattern;
  bool half = false, full = false;
  std::string convention = "population";
  std::string out;
};

int run_experiment(ExperimentArgs args) {
  if (!args.pattern.empty()) args.cfg.features.pattern = args.pattern;
  args.cfg.features.half = half_option(args.half, args.full);
  args.cfg.mean_convention = mean_convention(args.convention);
  args.cfg.validate();
  if (args.cfg.features.pattern) pattern_option(*args.cfg.features.pattern, dsig::session_alphabet());
  restrict_indices(args.cfg.features.restrict_to, dsig::session_alphabet());

  const auto sessions = dsig::load_sessions(args.data);
  const auto report = dsig::run_experiment(sessions, args.cfg);
  dsig::print_report(std::cout, report);
  std::ostringstream summary;
  dsig::write_report_tsv(summary, report);
  if (args.out.empty()) {
    std::cout << '\n' << summary.str();
    return kOk;
  }
  fs::create_directories(args.out);
  dsig::text::write_file(fs::path(args.out) / "report.tsv", summary.str());
  std::ostringstream coef, discarded;
  dsig::write_coefficients_tsv(coef, report);
  dsig::write_discarded_tsv(discarded, report);
  dsig::text::write_file(fs::path(args.out) / "coefficients.tsv", coef.str());
  dsig::text::write_file(fs::path(args.out) / "discarded.tsv", discarded.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete signatures of multivariate paths over a head/tail extended alphabet"};
  app.require_subcommand(1);

  WordsArgs words;
  auto* cmd_words = app.add_subcommand("words", "Enumerate words; prints the count, then one word per line");
  cmd_words->add_option("-d,--alphabet", words.alphabet, "Alphabet size (letters are 1..d)")->check(CLI::PositiveNumber);
  cmd_words->add_option("-r,--restrict", words.restrict_to, "Only these letters, e.g. 2,4")->delimiter(',');
  cmd_words->add_option("-k,--max-len", words.max_len, "Maximum word length");
  cmd_words->add_flag("--half", words.half, "First letter fixed to its head sign");
  cmd_words->add_option("-p,--pattern", words.pattern, "Keep words containing any of these letters, e.g. 4-,4+");

  ComputeArgs compute;
  auto* cmd_compute = app.add_subcommand("compute", "Signature of an event-stream file, as TSV");
  cmd_compute->add_option("-i,--input", compute.input, "Event stream (time, event_type, value)")->required();
  cmd_compute->add_option("--mu", compute.mu, "Decay rate (0 = flat)")->check(CLI::NonNegativeNumber);
  cmd_compute->add_option("-k,--max-len", compute.max_len, "Maximum word length");
  cmd_compute->add_option("--from", compute.from, "Start time (default: first observation)");
  cmd_compute->add_option("--to", compute.to, "End time (default: last observation)");
  cmd_compute->add_option("-r,--restrict", compute.restrict_to, "Only these event types")->delimiter(',');
  cmd_compute->add_option("-p,--pattern", compute.pattern, "Keep words containing any of these letters");
  auto* half_flag = cmd_compute->add_flag("--half", compute.half, "Half universe (default when mu = 0)");
  cmd_compute->add_flag("--full", compute.full, "Full universe (default when mu > 0)")->excludes(half_flag);
  cmd_compute->add_option("-o,--out", compute.out, "Output file (default stdout)");

  IngestArgs ingest;
  auto* cmd_ingest = app.add_subcommand("ingest-market", "Snapshot file or directory -> normalized session paths");
  cmd_ingest->add_option("-i,--input", ingest.input, "Snapshot file (*.am/*.pm) or directory of them")->required();
  cmd_ingest->add_option("-l,--label", ingest.label, "am or pm (default: from file suffix)");
  cmd_ingest->add_option("-o,--out", ingest.out, "Output file, or directory in batch mode");
  cmd_ingest->add_option("--minutes", ingest.minutes, "Session length in minutes")->check(CLI::Range(2, 1440));
  cmd_ingest->add_option("--mean-convention", ingest.convention, "population | divide-by-minutes");
  cmd_ingest->add_option("--threads", ingest.threads, "Worker threads (default DSIG_THREADS or all cores)");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Write synthetic sessions and a manifest");
  cmd_synth->add_option("-o,--out", synth.out, "Output directory")->required();
  cmd_synth->add_option("-n,--sessions", synth.cfg.sessions_per_class, "Sessions per class")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--seed", synth.cfg.seed, "Random seed");
  cmd_synth->add_option("--minutes", synth.cfg.minutes, "Session length in minutes")->check(CLI::Range(2, 1440));
  cmd_synth->add_option("--volatility", synth.cfg.price_volatility, "Log-price volatility per sqrt(minute)");
  cmd_synth->add_option("--empty-minute-prob", synth.cfg.empty_minute_probability,
                        "Probability that a minute has no snapshot")
      ->check(CLI::Range(0.0, 1.0));

  ExperimentArgs exp;
  auto* cmd_exp = app.add_subcommand("experiment", "Morning/afternoon classification with logistic regression");
  cmd_exp->add_option("--data", exp.data, "Directory of *.am / *.pm snapshot files")->required();
  cmd_exp->add_option("--mu", exp.cfg.mu, "Decay rate")->check(CLI::NonNegativeNumber);
  cmd_exp->add_option("-k,--max-len", exp.cfg.features.max_len, "Maximum word length");
  cmd_exp->add_option("-r,--restrict", exp.cfg.features.restrict_to, "Only these components, e.g. 2,4")->delimiter(',');
  cmd_exp->add_option("-p,--pattern", exp.pattern, "Keep words containing any of these letters, e.g. 4-,4+");
  auto* exp_half = cmd_exp->add_flag("--half", exp.half, "Half universe (default when mu = 0)");
  cmd_exp->add_flag("--full", exp.full, "Full universe")->excludes(exp_half);
  cmd_exp->add_flag("--raw", exp.cfg.features.raw, "Use the raw normalized path values instead of signatures");
  cmd_exp->add_option("--train-fraction", exp.cfg.train_fraction, "Share of sessions used for training");
  cmd_exp->add_option("--seed", exp.cfg.seed, "Shuffle seed");
  cmd_exp->add_option("--lr", exp.cfg.optimizer.learning_rate, "Gradient-descent learning rate");
  cmd_exp->add_option("--iterations", exp.cfg.optimizer.iterations, "Gradient-descent iterations");
  cmd_exp->add_option("--l2", exp.cfg.optimizer.l2, "L2 penalty strength");
  cmd_exp->add_flag("--shuffle-labels", exp.cfg.shuffle_labels, "Null experiment: permute labels first");
  cmd_exp->add_option("--minutes", exp.cfg.minutes, "Session length in minutes");
  cmd_exp->add_option("--mean-convention", exp.convention, "population | divide-by-minutes");
  cmd_exp->add_option("--threads", exp.cfg.threads, "Worker threads (default DSIG_THREADS or all cores)");
  cmd_exp->add_option("-o,--out", exp.out, "Directory for report.tsv, coefficients.tsv, discarded.tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cmd_words) return run_words(words);
    if (*cmd_compute) return run_compute(compute);
    if (*cmd_ingest) return run_ingest(ingest);
    if (*cmd_synth) return run_synth(synth);
    if (*cmd_exp) return run_experiment(exp);
  } catch (const dsig::ConfigError& e) {
    std::cerr << "dsig: " << e.what() << '\n';
    return kUsage;
  } catch (const dsig::NumericError& e) {
    std::cerr << "dsig: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const dsig::Error& e) {
    std::cerr << "dsig: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "dsig: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
