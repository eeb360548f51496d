#include "doctest.h"

#include <cmath>
#include <random>
#include <thread>

#include "cvn/top_rep.hpp"
#include "oracles.hpp"

using cvn::EdgeId;
using cvn::EdgePath;
using cvn::Graph;
using cvn::IntMatrix;
using cvn::StratumKind;
using cvn::TopRep;
using cvn::parse_path;

namespace {

TopRep make(std::vector<std::string> const& images, std::optional<cvn::Filtration> filt = std::nullopt) {
  Graph const g = cvn::rose(static_cast<int>(images.size()));
  std::vector<EdgePath> imgs;
  for (auto const& s : images) imgs.push_back(parse_path(g, s));
  return TopRep(g, imgs, std::move(filt));
}

TopRep fib() { return make({"x y", "x"}); }
TopRep xy_xbar() { return make({"x y", "x-"}); }
TopRep neg() { return make({"x", "y x"}); }

// Rank-three rose: x -> x z y, y -> x, z -> z.
TopRep rank3() { return make({"x z y", "x", "z"}); }

// f applied edge by edge with naive reduction, n times.
std::vector<EdgeId> naive_iterate(TopRep const& f, std::vector<EdgeId> p, int n) {
  for (int i = 0; i < n; ++i) {
    std::vector<EdgeId> next;
    for (EdgeId e : p) {
      auto const img = f.image(e).edges;
      next.insert(next.end(), img.begin(), img.end());
    }
    p = oracle::naive_reduce_edges(next);
  }
  return p;
}

EdgePath random_reduced_path(Graph const& g, std::mt19937& rng, int len) {
  std::uniform_int_distribution<int> start(0, g.num_vertices() - 1);
  EdgePath p{start(rng), {}};
  cvn::VertexId v = p.start;
  while (static_cast<int>(p.edges.size()) < len) {
    auto const& star = g.star(v);
    std::uniform_int_distribution<std::size_t> pick(0, star.size() - 1);
    EdgeId const e = star[pick(rng)];
    if (!p.edges.empty() && e == (p.edges.back() ^ 1)) {
      if (star.size() == 1) break;
      continue;
    }
    p.edges.push_back(e);
    v = g.terminus(e);
  }
  return p;
}

// Largest k such that some rotation of alpha^k or its inverse occurs as a
// contiguous block, by trying every k downward.
int naive_power(std::vector<EdgeId> const& alpha, std::vector<EdgeId> path, bool cyclic) {
  if (alpha.empty() || path.empty()) return 0;
  std::size_t const n = path.size();
  int const kmax = static_cast<int>(n / alpha.size());
  if (cyclic) {
    std::vector<EdgeId> twice = path;
    twice.insert(twice.end(), path.begin(), path.end());
    path = twice;
  }
  std::vector<EdgeId> inv;
  for (auto it = alpha.rbegin(); it != alpha.rend(); ++it) inv.push_back(*it ^ 1);
  for (int k = kmax; k >= 1; --k) {
    for (std::vector<EdgeId> const* base : {&alpha, const_cast<std::vector<EdgeId> const*>(&inv)}) {
      for (std::size_t r = 0; r < base->size(); ++r) {
        std::vector<EdgeId> block;
        for (int i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < base->size(); ++j) block.push_back((*base)[(r + j) % base->size()]);
        }
        if (std::search(path.begin(), path.end(), block.begin(), block.end()) != path.end()) return k;
      }
    }
  }
  return 0;
}

// Brute-force cancellation between [f(alpha)] and [f(beta)] over reduced
// alpha beta, both of length 1..len.
int naive_bcc(TopRep const& f, int len) {
  Graph const& g = f.graph();
  std::vector<bool> const all(static_cast<std::size_t>(g.num_positive()), true);
  auto const paths = cvn::enumerate_paths(g, all, len);
  auto image = [&](EdgePath const& p) {
    std::vector<EdgeId> out;
    for (EdgeId e : p.edges) {
      auto const img = f.image(e).edges;
      out.insert(out.end(), img.begin(), img.end());
    }
    return oracle::naive_reduce_edges(out);
  };
  int best = 0;
  for (auto const& a : paths) {
    for (auto const& b : paths) {
      if (cvn::end_vertex(g, a) != b.start || b.edges.front() == (a.edges.back() ^ 1)) continue;
      auto const fa = image(a);
      auto const fb = image(b);
      std::vector<EdgeId> joined = fa;
      joined.insert(joined.end(), fb.begin(), fb.end());
      int const c = static_cast<int>(fa.size() + fb.size() - oracle::naive_reduce_edges(joined).size()) / 2;
      best = std::max(best, c);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("roses and their names") {
  Graph const r = cvn::rose(3);
  CHECK(r.num_vertices() == 1);
  CHECK(r.rank() == 3);
  CHECK(r.label(0) == "x");
  CHECK(r.label(4) == "z");
  CHECK(cvn::rose(10).label(18) == "x9");
}

TEST_CASE("graph maps send inverse edges to inverse paths") {
  TopRep const f = fib();
  CHECK(f.image(1) == parse_path(f.graph(), "y- x-"));
  Graph const& g = f.graph();
  EdgePath const p = parse_path(g, "x y-");
  CHECK(f.map().apply(p) == parse_path(g, "x y x-"));
  CHECK(f.map().apply_reduced(parse_path(g, "x- y")) == parse_path(g, "y-"));
  CHECK(f.map().apply_reduced(parse_path(g, "y- x")) == parse_path(g, "y"));
  CHECK(f.df(0) == 0);
  CHECK(f.df(3) == 1);
}

TEST_CASE("graph maps check endpoints") {
  Graph const barbell = [] {
    Graph g(2);
    g.add_edge(0, 0, "x");
    g.add_edge(1, 1, "y");
    g.add_edge(0, 1, "e");
    return g;
  }();
  // e must go from f(0) to f(1); sending it to x makes both ends vertex 0
  // while y forces f(1) = 1.
  std::vector<EdgePath> const bad{parse_path(barbell, "x"), parse_path(barbell, "y"), parse_path(barbell, "x")};
  CHECK_THROWS_AS(cvn::GraphMap(barbell, barbell, bad, {0, 1}), std::invalid_argument);
  std::vector<EdgePath> const ok{parse_path(barbell, "x"), parse_path(barbell, "y"), parse_path(barbell, "e")};
  CHECK_NOTHROW(cvn::GraphMap(barbell, barbell, ok, {0, 1}));
}

TEST_CASE("representatives must be tight and invariantly filtered") {
  Graph const g = cvn::rose(2);
  CHECK_THROWS_AS(TopRep(g, {parse_path(g, "x x-"), parse_path(g, "y")}), std::invalid_argument);
  CHECK_THROWS_AS(TopRep(g, {EdgePath{0, {}}, parse_path(g, "y")}), std::invalid_argument);
  cvn::Filtration bad{{{2}, {0, 2}}};
  CHECK_THROWS_AS(make({"x", "y x"}, bad), std::invalid_argument);
  cvn::Filtration not_ending{{{0}}};
  CHECK_THROWS_AS(make({"x", "y x"}, not_ending), std::invalid_argument);
  cvn::Filtration good{{{0}, {0, 2}}};
  CHECK_NOTHROW(make({"x", "y x"}, good));
}

TEST_CASE("stratification puts invariant pieces first") {
  TopRep const n = neg();
  REQUIRE(n.strata().size() == 2);
  CHECK(n.strata()[0] == std::vector<EdgeId>{0});
  CHECK(n.strata()[1] == std::vector<EdgeId>{2});
  CHECK(n.stratum_of(3) == 2);
  CHECK(fib().strata().size() == 1);
  TopRep const r = rank3();
  REQUIRE(r.strata().size() == 2);
  CHECK(r.strata()[0] == std::vector<EdgeId>{4});
}

TEST_CASE("transition matrices count crossings") {
  TopRep const r = rank3();
  IntMatrix const whole = cvn::transition_matrix(r);
  // Column j counts the edges crossed by f(e_j).
  CHECK(whole == IntMatrix{{1, 1, 0}, {1, 0, 0}, {1, 0, 1}});
  CHECK(cvn::transition_matrix(r, 2) == IntMatrix{{1, 1}, {1, 0}});
  CHECK(cvn::transition_matrix(r, 1) == IntMatrix{{1}});
}

TEST_CASE("Perron-Frobenius classification") {
  auto const golden = (1.0 + std::sqrt(5.0)) / 2.0;
  auto const eg = cvn::pf_classify({{1, 1}, {1, 0}});
  CHECK(eg.kind == StratumKind::EG);
  CHECK(eg.lambda == doctest::Approx(golden).epsilon(1e-12));
  CHECK(eg.lower <= eg.lambda);
  CHECK(eg.upper >= eg.lambda);
  CHECK(eg.certificate_power == 2);

  auto const perm = cvn::pf_classify({{0, 1}, {1, 0}});
  CHECK(perm.kind == StratumKind::NEG);
  CHECK(perm.lambda == doctest::Approx(1.0));
  CHECK(cvn::pf_classify({{1}}).kind == StratumKind::NEG);
  CHECK(cvn::pf_classify({{0}}).kind == StratumKind::Zero);
  CHECK(cvn::pf_classify({{0, 0}, {0, 0}}).kind == StratumKind::Zero);
  CHECK_THROWS_AS(cvn::pf_classify({{1, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(cvn::pf_classify({{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(cvn::pf_classify({{-1}}), std::invalid_argument);

  auto const w = cvn::reducibility_witness({{1, 0}, {1, 1}});
  REQUIRE(w.has_value());
  CHECK(w->size() == 1);
  CHECK_FALSE(cvn::reducibility_witness({{1, 1}, {1, 0}}).has_value());
}

TEST_CASE("the eigenvalue of a power is the power of the eigenvalue") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> entry(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    int const n = 2 + trial % 4;
    IntMatrix m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    for (auto& row : m) {
      for (auto& x : row) x = entry(rng);
    }
    // Keep it irreducible with a cycle through every index.
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>((i + 1) % n)] += 1;
    auto const base = cvn::pf_classify(m);
    IntMatrix mk = m;
    for (int k = 2; k <= 4; ++k) {
      mk = cvn::multiply(mk, m);
      if (cvn::reducibility_witness(mk)) break;  // a power of a periodic matrix can split
      auto const pk = cvn::pf_classify(mk);
      REQUIRE(pk.lambda == doctest::Approx(std::pow(base.lambda, k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("primitivity exponent") {
  CHECK(cvn::primitivity_exponent({{1, 1}, {1, 0}}, 10) == 2);
  CHECK_FALSE(cvn::primitivity_exponent({{0, 1}, {1, 0}}, 10).has_value());
  CHECK(cvn::primitivity_exponent({{2}}, 1) == 1);
}

TEST_CASE("turns and their legality") {
  auto const turns = cvn::turns_of(std::vector<EdgeId>{0, 2, 1});
  REQUIRE(turns.size() == 2);
  CHECK(turns[0].first == 1);
  CHECK(turns[0].second == 2);
  CHECK(turns[1].first == 3);
  CHECK(turns[1].second == 1);

  TopRep const f = fib();
  // Every turn of the Fibonacci map is legal except {x, y-}'s partner {x, x}.
  CHECK(cvn::turn_legality(f, {1, 2}).legal);
  CHECK_FALSE(cvn::turn_legality(f, {0, 2}).legal);
  CHECK(cvn::turn_legality(f, {0, 0}).legal == false);
}

TEST_CASE("the Fibonacci map is a train track") {
  TopRep const f = fib();
  auto const report = cvn::verify_train_track(f, 10);
  CHECK(report.train_track);
  CHECK(report.failures.empty());
  // No cancellation at any depth: concatenation equals reduction.
  for (EdgeId e = 0; e < 4; ++e) {
    EdgePath p{f.graph().origin(e), {e}};
    for (int n = 1; n <= 10; ++n) {
      EdgePath const raw = f.map().apply(p);
      REQUIRE(raw == cvn::reduce_path(raw));
      p = raw;
      REQUIRE(p == f.edge_iterate(e, n));
    }
  }
}

TEST_CASE("x -> x y, y -> x- fails with an explicit cancellation") {
  auto const report = cvn::verify_train_track(xy_xbar(), 8);
  CHECK_FALSE(report.train_track);
  REQUIRE(report.cancellation.has_value());
  CHECK(report.cancellation->n == 4);
  CHECK(report.cancellation->edge == 0);
  CHECK(report.cancellation->position == 4);
  CHECK(report.cancellation->left == 1);
  CHECK(report.cancellation->right == 0);
  REQUIRE(report.illegal_turn.has_value());
  CHECK_FALSE(report.illegal_turn->second.legal);
  CHECK(report.illegal_turn->second.orbit.back().degenerate());
}

TEST_CASE("reduced iteration matches naive iteration and is functorial") {
  std::mt19937 rng(77);
  TopRep const maps[] = {fib(), xy_xbar(), neg(), rank3()};
  for (TopRep const& f : maps) {
    for (int trial = 0; trial < 60; ++trial) {
      EdgePath const p = random_reduced_path(f.graph(), rng, 5);
      for (int m = 0; m <= 4; ++m) {
        auto const pm = cvn::iterate_reduced(f, p, m);
        REQUIRE_FALSE(pm.truncated);
        REQUIRE(pm.path.edges == naive_iterate(f, p.edges, m));
        for (int n = 0; n <= 3; ++n) {
          REQUIRE(cvn::iterate_reduced(f, pm.path, n).path == cvn::iterate_reduced(f, p, m + n).path);
        }
      }
    }
  }
}

TEST_CASE("iteration reports truncation") {
  TopRep const f = fib();
  EdgePath const x{0, {0}};
  auto const r = cvn::iterate_reduced(f, x, 40, 1000);
  CHECK(r.truncated);
  CHECK_FALSE(r.note.empty());
  auto const cyc = cvn::iterate_reduced_cyclic(f, cvn::cyclic_reduce_path(f.graph(), x), 3);
  CHECK(cvn::to_string(f.graph(), cyc) == "x x y x y");
}

TEST_CASE("memoized iterates are shared safely across threads") {
  TopRep const f = rank3();
  std::vector<std::vector<EdgePath>> results(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t) {
    threads.emplace_back([&, t] {
      for (int n = 0; n <= 12; ++n) {
        for (EdgeId e = 0; e < 6; ++e) results[t].push_back(f.edge_iterate(e, n));
      }
    });
  }
  for (auto& th : threads) th.join();
  for (std::size_t t = 1; t < results.size(); ++t) CHECK(results[t] == results[0]);
}

TEST_CASE("relative train track checks") {
  auto const fr = cvn::verify_rtt(fib());
  CHECK(fr.ok());
  REQUIRE(fr.strata.size() == 1);
  CHECK(fr.strata[0].pf.kind == StratumKind::EG);
  CHECK(fr.paths_3c > 0);

  auto const nr = cvn::verify_rtt(neg());
  CHECK(nr.ok());
  REQUIRE(nr.strata.size() == 2);
  CHECK(nr.strata[1].pf.kind == StratumKind::NEG);

  auto const rr = cvn::verify_rtt(rank3());
  CHECK(rr.ok());
  CHECK(rr.strata[1].pf.kind == StratumKind::EG);

  CHECK_FALSE(cvn::verify_rtt(xy_xbar()).ok());
}

TEST_CASE("a stratum that is not irreducible is reported with its invariant subset") {
  // x -> x, y -> y x, z -> z y: the filtration {x} < {x, y, z} lumps y and z.
  cvn::Filtration coarse{{{0}, {0, 2, 4}}};
  auto const r = cvn::verify_rtt(make({"x", "y x", "z y"}, coarse));
  CHECK_FALSE(r.irreducible);
  REQUIRE(r.strata.size() == 2);
  CHECK_FALSE(r.strata[1].irreducible);
  CHECK_FALSE(r.strata[1].invariant_subset.empty());
}

TEST_CASE("good relative train track conventions") {
  auto const g = cvn::verify_good_rtt(fib());
  CHECK(g.ok());
  CHECK(g.convention_k == 2);

  auto const n = cvn::verify_good_rtt(neg());
  CHECK(n.ok());
  CHECK(n.neg_form);

  // A NEG edge whose image neither starts nor ends with itself.
  cvn::Filtration filt{{{0}, {0, 2}}};
  auto const bad = cvn::verify_good_rtt(make({"x", "x y x"}, filt));
  CHECK_FALSE(bad.neg_form);
}

TEST_CASE("the window constant") {
  TopRep const f = fib();
  int const l = cvn::lemma_l_constant(f);
  CHECK(l == 4);
  EdgePath const p = f.edge_iterate(0, 12);
  for (std::size_t i = 0; i + static_cast<std::size_t>(l) <= p.edges.size(); ++i) {
    bool saw_x = false, saw_y = false;
    for (std::size_t j = i; j < i + static_cast<std::size_t>(l); ++j) {
      saw_x = saw_x || p.edges[j] / 2 == 0;
      saw_y = saw_y || p.edges[j] / 2 == 1;
    }
    REQUIRE((saw_x && saw_y));
  }
  CHECK_THROWS_AS(cvn::lemma_l_constant(neg()), std::invalid_argument);
}

TEST_CASE("cyclic powers in sequences") {
  std::vector<EdgeId> const x{0};
  std::vector<EdgeId> const xy{0, 2};
  CHECK(cvn::max_cyclic_power(x, std::vector<EdgeId>{0, 0, 0, 2, 0}, false) == 3);
  CHECK(cvn::max_cyclic_power(x, std::vector<EdgeId>{0, 2, 0, 0}, true) == 3);
  CHECK(cvn::max_cyclic_power(x, std::vector<EdgeId>{1, 1}, false) == 2);
  CHECK(cvn::max_cyclic_power(xy, std::vector<EdgeId>{2, 0, 2, 0, 2}, false) == 2);
  CHECK(cvn::max_cyclic_power(xy, std::vector<EdgeId>{3, 1, 3, 1}, false) == 2);
  CHECK(cvn::max_cyclic_power(xy, std::vector<EdgeId>{}, false) == 0);
}

TEST_CASE("cyclic powers agree with brute force") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> edge(0, 3);
  std::uniform_int_distribution<int> alen(1, 3);
  std::uniform_int_distribution<int> plen(0, 14);
  for (int trial = 0; trial < 4000; ++trial) {
    std::vector<EdgeId> alpha;
    int const a = alen(rng);
    while (static_cast<int>(alpha.size()) < a) {
      EdgeId const e = edge(rng);
      if (!alpha.empty() && e == (alpha.back() ^ 1)) continue;
      alpha.push_back(e);
    }
    if (alpha.size() > 1 && alpha.front() == (alpha.back() ^ 1)) continue;
    // Build paths rich in alpha repetitions.
    std::vector<EdgeId> path;
    int const len = plen(rng);
    while (static_cast<int>(path.size()) < len) {
      if (edge(rng) == 0) {
        path.insert(path.end(), alpha.begin(), alpha.end());
      } else {
        path.push_back(edge(rng));
      }
    }
    path = oracle::naive_reduce_edges(path);
    for (bool cyclic : {false, true}) {
      if (cyclic) {
        path = oracle::naive_cyclic_edges(path);
      }
      REQUIRE(cvn::max_cyclic_power(alpha, path, cyclic) == naive_power(alpha, path, cyclic));
    }
  }
}

TEST_CASE("powers in iterates") {
  TopRep const n = neg();
  auto const x = cvn::cyclic_reduce_path(n.graph(), parse_path(n.graph(), "x"));
  auto const grow = cvn::max_cyclic_power_in_iterates(n, x, parse_path(n.graph(), "y"), 12);
  REQUIRE(grow.per_n.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(grow.per_n[static_cast<std::size_t>(i)] == i + 1);
  CHECK(grow.max_k == 12);
  CHECK_FALSE(grow.stabilized);

  TopRep const f = fib();
  auto const fx = cvn::cyclic_reduce_path(f.graph(), parse_path(f.graph(), "x"));
  auto const bounded = cvn::max_cyclic_power_in_iterates(f, fx, parse_path(f.graph(), "x"), 16);
  CHECK(bounded.max_k == 2);
  CHECK(bounded.stabilized);
  auto const cyc = cvn::max_cyclic_power_in_iterates(f, fx, fx, 16);
  CHECK(cyc.max_k == 2);
}

TEST_CASE("bounded cancellation estimate") {
  TopRep const f = fib();
  CHECK(cvn::bcc_estimate(f, 1) >= 1);
  int prev = 0;
  for (int cap = 1; cap <= 3; ++cap) {
    int const b = cvn::bcc_estimate(f, cap);
    CHECK(b >= prev);
    CHECK(b == naive_bcc(f, cap));
    prev = b;
  }
  CHECK(cvn::bcc_estimate(xy_xbar(), 2) == naive_bcc(xy_xbar(), 2));
  CHECK(cvn::bcc_estimate(make({"x", "y"}), 3) == 0);
}

TEST_CASE("path enumeration") {
  Graph const g = cvn::rose(2);
  std::vector<bool> const all(2, true);
  CHECK(cvn::enumerate_paths(g, all, 2).size() == 16);
  CHECK(cvn::enumerate_paths(g, {true, false}, 3).size() == 6);
}
