// Non-rigidity witnesses: two marked metric graphs on the same marked graph
// whose translation lengths agree on every sampled word but differ on a
// certificate word.

#ifndef CVN_WITNESS_HPP_
#define CVN_WITNESS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cvn/free_map.hpp"
#include "cvn/marked_graph.hpp"
#include "cvn/rational.hpp"

namespace cvn {

struct CandidateGraph {
  std::string name;
  MarkedMetricGraph graph;
};

// Unit-length candidates in a fixed order: the rose, the graph with one
// loop hung off a rose by a connector, the remaining splits of the loops
// between two vertices, and the theta graph. `family` is "default",
// "rose-only", "barbell" or "theta"; anything else throws ParseError.
std::vector<CandidateGraph> candidate_graphs(int rank, std::string_view family = "default");

using CrossingMatrix = std::vector<CrossingVector>;

CrossingMatrix crossing_matrix(MarkedMetricGraph const& t, std::vector<CyclicWord> const& sample);

struct NullspaceResult {
  int rank = 0;
  std::optional<std::vector<Integer>> delta;  // primitive, first nonzero entry positive
  // sup{t >= 0 : l + t delta >= rho l}; unset when delta has no negative entry.
  std::optional<Rational> t_star;
};

// Exact elimination over the rationals. delta spans the first free column.
NullspaceResult nullspace_direction(CrossingMatrix const& m, std::vector<Rational> const& lengths,
                                    Rational const& rho);

// First cyclically reduced word in shortlex order with different
// translation lengths, up to max_len letters.
std::optional<Word> distinguishing_word(MarkedMetricGraph const& t1, MarkedMetricGraph const& t2, int max_len);

struct WitnessPair {
  std::string graph_name;
  MarkedMetricGraph t1;
  MarkedMetricGraph t2;
  std::vector<Integer> delta;
  std::optional<Rational> t_star;
  Rational step;
  Word certificate;
  Rational certificate_t1;
  Rational certificate_t2;
};

struct WitnessOptions {
  std::string family = "default";
  Rational rho = Rational(1, 2);
  int max_word_len = 8;
};

struct WitnessResult {
  std::optional<WitnessPair> pair;
  std::vector<std::string> graph_reports;  // one line per candidate
  std::vector<std::string> transcript;     // every checked equality for the chosen pair
};

// Tries the candidates concurrently and keeps the first success in family
// order. Each success is verified on the whole sample before it is returned.
WitnessResult build_witness(std::vector<OrbitEntry> const& sample, int rank, WitnessOptions const& options = {});

// Orbit sample for build_witness: n in [-horizon, horizon], or [0, horizon]
// when forward_only. The n = 0 entry is g itself.
OrbitResult witness_sample(FreeMap const& phi, Word const& g, int horizon, bool forward_only,
                           std::size_t letter_cap = kDefaultLetterCap);

// Independent re-verification: lengths of T2 equal lengths of T1 plus
// step * delta and are positive, both graphs share the marking, every sample
// word has equal translation length (recomputed per graph), and the
// certificate lengths differ. Returns the failures, empty when valid.
std::vector<std::string> verify_witness(WitnessPair const& pair, std::vector<OrbitEntry> const& sample);

}  // namespace cvn

#endif  // CVN_WITNESS_HPP_
