// Streams an event file point by point and prints the running flat and decayed
// values of a few words after every observation.
//
//   streaming_signature sample1.dat [mu]

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "dsig.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: streaming_signature <events.tsv> [mu]\n";
    return 1;
  }
  try {
    const auto path = dsig::forward_fill(dsig::read_event_stream(argv[1]));
    const dsig::DecayRate mu(argc > 2 ? std::atof(argv[2]) : std::log(2.0));
    const auto& a = path.alphabet();
    const auto universe = dsig::enumerate_words(a, 2, /*half=*/false);

    dsig::SignatureTable flat(universe, dsig::DecayRate::flat(), path.row(0), path.time(0));
    dsig::SignatureTable decayed(universe, mu, path.row(0), path.time(0));
    const dsig::Word probe{dsig::Letter::head(0), dsig::Letter::tail(0)};

    std::cout << "t\tflat[" << dsig::render_word(probe, a) << "]\tdecayed[" << dsig::render_word(probe, a) << "]\n";
    std::cout << std::fixed << std::setprecision(4);
    for (std::size_t n = 1; n < path.size(); ++n) {
      flat.extend(path.time(n), path.row(n));
      decayed.extend(path.time(n), path.row(n));
      std::cout << path.time(n) << '\t' << flat.value(probe) << '\t' << decayed.value(probe) << '\n';
    }
  } catch (const dsig::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
