#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "apelt/state.hpp"

namespace apelt {

enum class Protocol {
  EpidemicMean,   // alternating blocks, epidemic means +-U(1, 1.25)
  ShortSegment,   // K = n/1000 + 1 short intervals of mean delta
  PValues,        // two-sided p-values of a clustered-signal mean structure
};

enum class Scenario { A, B };

struct DgpSpec {
  Protocol protocol = Protocol::EpidemicMean;
  std::size_t n = 1000;
  std::size_t m = 9;                     // EpidemicMean
  Scenario scenario = Scenario::A;       // EpidemicMean
  std::size_t epidemic_length = 10;      // ShortSegment (L)
  double delta = 2.5;                    // ShortSegment
  double sigma = 1.0;                    // ShortSegment
  std::uint64_t seed = 1;
};

struct LabeledSequence {
  std::vector<double> values;
  std::vector<std::size_t> true_changepoints;
  std::vector<State> true_states;  // one per segment
  std::vector<double> true_means;  // per index
  std::vector<double> true_sds;    // per index
};

LabeledSequence generate_epidemic_mean(const DgpSpec& spec);
LabeledSequence generate_short_segments(const DgpSpec& spec);
LabeledSequence generate_pvalues(const DgpSpec& spec);
LabeledSequence generate(const DgpSpec& spec);

/// Columns: index, value, true_mean, true_sd, state (1-based index).
void write_csv(std::ostream& out, const LabeledSequence& seq);

}  // namespace apelt
