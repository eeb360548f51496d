// Tight graph maps with filtrations (topological representatives), turns,
// transition matrices and the train-track style verifiers.

#ifndef CVN_TOP_REP_HPP_
#define CVN_TOP_REP_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cvn/free_map.hpp"
#include "cvn/graph.hpp"

namespace cvn {

// A map between graphs sending vertices to vertices and edges to (possibly
// degenerate) edge paths.
class GraphMap {
 public:
  GraphMap() = default;
  // Images are given per positive edge. The vertex map is derived from the
  // images where possible; degenerate images take it from vertex_map.
  // Throws std::invalid_argument on chaining or endpoint mismatches.
  GraphMap(Graph source, Graph target, std::vector<EdgePath> positive_images,
           std::vector<VertexId> vertex_map);

  Graph const& source() const { return source_; }
  Graph const& target() const { return target_; }
  VertexId vertex_image(VertexId v) const { return vertex_map_.at(static_cast<std::size_t>(v)); }
  EdgePath image(EdgeId e) const;
  // f(p) as a concatenation, not reduced.
  EdgePath apply(EdgePath const& p) const;
  EdgePath apply_reduced(EdgePath const& p) const;

 private:
  Graph source_;
  Graph target_;
  std::vector<EdgePath> images_;
  std::vector<VertexId> vertex_map_;
};

// Ascending f-invariant subgraphs G_1 < ... < G_m = G, each a list of
// positive edge ids.
struct Filtration {
  std::vector<std::vector<EdgeId>> levels;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

enum class StratumKind { Zero, NEG, EG };
std::string to_string(StratumKind k);

struct PFResult {
  StratumKind kind = StratumKind::Zero;
  double lambda = 0.0;
  double lower = 0.0;  // Collatz-Wielandt bracket
  double upper = 0.0;
  int iterations = 0;
  // EG: smallest k with every row sum of M^k at least 2. NEG: 1 (permutation).
  int certificate_power = 0;
  std::string certificate;
};

// Throws std::invalid_argument for a reducible nonzero matrix; the message
// names an invariant index subset.
PFResult pf_classify(IntMatrix const& m);

// Strongly connected iff irreducible. Returns an invariant proper index
// subset when reducible.
std::optional<std::vector<int>> reducibility_witness(IntMatrix const& m);

IntMatrix multiply(IntMatrix const& a, IntMatrix const& b);
// Smallest k in [1, limit] with M^k entrywise positive, using saturated
// arithmetic.
std::optional<int> primitivity_exponent(IntMatrix const& m, int limit);

struct Turn {
  EdgeId first = 0;
  EdgeId second = 0;
  bool degenerate() const { return first == second; }
};

struct TurnVerdict {
  bool legal = true;
  std::vector<Turn> orbit;  // the turn and its images until a repeat or a degenerate turn
};

struct Cancellation {
  int n = 0;          // iterate in which it occurs
  EdgeId edge = 0;    // starting edge
  std::size_t position = 0;
  EdgeId left = 0;    // the cancelling pair left, left-bar
  EdgeId right = 0;
};

struct TrainTrackReport {
  bool train_track = true;
  std::vector<std::string> failures;
  std::optional<std::pair<Turn, TurnVerdict>> illegal_turn;  // first illegal turn in an image
  std::optional<Cancellation> cancellation;                 // earliest in f^n(e)
  int check_depth = 0;
};

struct StratumReport {
  int index = 0;  // 1-based
  std::vector<EdgeId> edges;
  IntMatrix matrix;
  PFResult pf;
  bool irreducible = true;
  std::vector<int> invariant_subset;  // witness when reducible
};

struct RttReport {
  bool no_valence_one = true;
  std::vector<VertexId> valence_one;
  bool irreducible = true;
  bool condition_3a = true;
  bool condition_3b = true;
  bool condition_3c = true;
  bool splitting = true;
  int paths_3b = 0;
  int paths_3c = 0;
  int paths_split = 0;
  std::vector<StratumReport> strata;
  std::vector<std::string> failures;
  bool ok() const {
    return no_valence_one && irreducible && condition_3a && condition_3b && condition_3c && splitting;
  }
};

struct GoodRttReport {
  bool aperiodic = true;
  bool zero_not_top = true;
  bool neg_form = true;
  std::optional<int> convention_k;  // smallest k with M_top^k > 0
  std::vector<std::string> notes;
  std::vector<std::string> failures;
  bool ok() const { return aperiodic && zero_not_top && neg_form; }
};

class TopRep {
 public:
  // Images per positive edge, each nondegenerate and reduced. Without a
  // filtration one is built from the occurrence digraph. Throws
  // std::invalid_argument for untight images, endpoint mismatches or a
  // filtration that is not invariant.
  TopRep(Graph g, std::vector<EdgePath> images, std::optional<Filtration> filtration = std::nullopt);

  Graph const& graph() const { return map_.source(); }
  GraphMap const& map() const { return map_; }
  EdgePath image(EdgeId e) const { return map_.image(e); }
  Filtration const& filtration() const { return filtration_; }
  // Strata H_i = G_i minus G_{i-1}, positive edges ascending.
  std::vector<std::vector<EdgeId>> const& strata() const { return strata_; }
  int stratum_of(EdgeId e) const { return stratum_of_.at(static_cast<std::size_t>(e / 2)); }
  // Df(e): first edge of f(e).
  EdgeId df(EdgeId e) const;

  // [f^n(e)] for a single edge, memoized below a length cap.
  EdgePath edge_iterate(EdgeId e, int n) const;

 private:
  GraphMap map_;
  Filtration filtration_;
  std::vector<std::vector<EdgeId>> strata_;
  std::vector<int> stratum_of_;
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<EdgeId, int>, EdgePath> table;
  };
  std::shared_ptr<Memo> memo_;
};

inline constexpr std::size_t kMemoCap = 1'000'000;

// Filtration from strongly connected components of the occurrence digraph,
// sinks first.
Filtration stratify(Graph const& g, std::vector<EdgePath> const& images);

TopRep rose_representative(FreeMap const& phi);
Graph rose(int rank);

IntMatrix transition_matrix(TopRep const& f, int stratum);  // stratum 1-based
IntMatrix transition_matrix(TopRep const& f);               // whole graph

TurnVerdict turn_legality(TopRep const& f, Turn turn);
// Turns {e_i-bar, e_{i+1}} taken by the path.
std::vector<Turn> turns_of(std::span<const EdgeId> edges);

TrainTrackReport verify_train_track(TopRep const& f, int check_depth = 8);
RttReport verify_rtt(TopRep const& f, int path_cap = 4);
GoodRttReport verify_good_rtt(TopRep const& f);

struct IterateResult {
  EdgePath path;
  bool truncated = false;
  std::string note;
};

// [f^n(p)], applied edge by edge through the memoized per-edge iterates.
IterateResult iterate_reduced(TopRep const& f, EdgePath const& p, int n,
                              std::size_t letter_cap = kDefaultLetterCap);
CyclicEdgePath iterate_reduced_cyclic(TopRep const& f, CyclicEdgePath const& p, int n);

// L = 2K with K the largest number of top-stratum edges in an image of a top
// edge. Throws std::invalid_argument unless the top stratum is EG.
int lemma_l_constant(TopRep const& f);

struct PowerScan {
  int max_k = 0;
  int argmax_n = 0;
  bool stabilized = false;
  std::vector<int> per_n;  // n = 1..horizon
  std::vector<std::string> truncation_notes;
};

// Largest k with alpha^k (any rotation, either orientation) a subpath of
// the sequence; cyclic sequences are read around the seam.
int max_cyclic_power(std::span<const EdgeId> alpha, std::span<const EdgeId> path, bool cyclic);

PowerScan max_cyclic_power_in_iterates(TopRep const& f, CyclicEdgePath const& alpha, EdgePath const& source,
                                       int horizon);
PowerScan max_cyclic_power_in_iterates(TopRep const& f, CyclicEdgePath const& alpha,
                                       CyclicEdgePath const& source, int horizon);

// Largest cancellation between [f(alpha)] and [f(beta)] over reduced paths
// alpha beta with 1 <= |alpha|, |beta| <= len_cap.
int bcc_estimate(GraphMap const& f, int len_cap);
int bcc_estimate(TopRep const& f, int len_cap);

// Reduced paths of length 1..max_len in the allowed subgraph.
std::vector<EdgePath> enumerate_paths(Graph const& g, std::vector<bool> const& allowed, int max_len);

}  // namespace cvn

#endif  // CVN_TOP_REP_HPP_
