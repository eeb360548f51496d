// Horizon-bounded checks of the bounded-power properties: W for a set of
// cyclic words, P for an automorphism orbit, W* in rank two, and the search
// for a basis letter whose powers stay bounded.

#ifndef CVN_RIGIDITY_HPP_
#define CVN_RIGIDITY_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvn/constructions.hpp"
#include "cvn/free_map.hpp"
#include "cvn/marked_graph.hpp"
#include "cvn/top_rep.hpp"

namespace cvn {

struct PropertyWReport {
  std::string basis = "standard";
  int letter = 0;
  int n_lo = 0;
  int n_hi = 0;
  int observed_m = 0;
  // Running maximum already reached before the final quarter of the stream.
  bool stabilized = false;
  std::vector<std::pair<int, int>> per_n;  // (n, largest |k| with a^k in sigma_n)
  std::vector<std::string> truncation_notes;
};

// Largest letter power over the stream, in stream order. Entries carry their
// orbit index n; plain sets can number them 0, 1, ...
PropertyWReport check_property_W(std::vector<OrbitEntry> const& stream, int letter);

enum class Direction { Forward, Backward, Both };
std::string to_string(Direction d);
// "fwd", "bwd", "both"; throws ParseError otherwise.
Direction parse_direction(std::string_view text);

struct PropertyPReport {
  std::optional<PropertyWReport> forward;   // n = 0, 1, ..., horizon
  std::optional<PropertyWReport> backward;  // n = 0, -1, ..., -horizon
  int merged_m = 0;
  bool stabilized = true;  // every requested direction stabilized
};

// Runs the orbit of g in the requested directions. Backward needs a certified
// automorphism (std::invalid_argument otherwise). Truncated orbits are reported
// through truncation_notes and count as not stabilized.
PropertyPReport check_property_P(FreeMap const& phi, Word const& g, int letter, int horizon, Direction direction,
                                 std::size_t letter_cap = kDefaultLetterCap);

struct WStarViolation {
  std::size_t index = 0;  // position in the input
  CyclicWord rewritten;   // over {a, b'}
  int t = 0;              // b'-power for condition 2
};

struct PropertyWStarReport {
  int k = 0;
  std::vector<WStarViolation> condition1;  // rewritten word lies in <b'>
  std::vector<WStarViolation> condition2;  // b'^t occurs with |t| >= 2
  std::vector<CyclicWord> rewritten;
  bool holds() const { return condition1.empty() && condition2.empty(); }
};

// Rewrites each sigma over {a, b a^k} with k = m + 1 unless k is given, and
// checks both conditions. `letter` names the basis letter playing the role of
// a. The trivial word lies in <b'> and is reported under condition 1. Throws
// std::invalid_argument unless every word has rank at most two.
PropertyWStarReport w_to_wstar(std::vector<CyclicWord> const& sigma, int letter, int m,
                               std::optional<int> k = std::nullopt);

struct PairCandidate {
  Word primitive;              // tau(a) in the standard basis, cyclically reduced
  std::optional<int> letter;   // set when the primitive is a single basis letter
  FreeMap basis;               // theta with theta(a_generator) conjugate to primitive
  int generator = 0;
  std::string reason;
  std::string inequality;      // "n/a", "verified" or "unverified"
  int crossing_bound = 0;      // M used for the crossing construction
};

// A topological representative together with the marking identifying its
// fundamental group with F_N.
struct MarkedRep {
  TopRep map;
  Marking marking;
};

MarkedRep rose_marked_rep(FreeMap const& phi);

// Candidate basis letters for which the orbit powers should stay bounded.
// `inverse` represents phi^{-1}. bcc_bound is a trusted upper bound for the
// bounded cancellation constant of the marking change; without it the
// inequality M > 2(diam + BCC) is checked against the empirical lower bound
// only and reported as unverified. Throws std::invalid_argument when the
// inverse representative is needed but missing.
std::vector<PairCandidate> suggest_pair(FreeMap const& phi, MarkedRep const& rep,
                                        std::optional<MarkedRep> const& inverse,
                                        std::optional<int> bcc_bound = std::nullopt);

}  // namespace cvn

#endif  // CVN_RIGIDITY_HPP_
