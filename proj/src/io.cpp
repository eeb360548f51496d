#include "cvn/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace cvn {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string tok; words >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(Line const& line, std::string const& why) {
  throw ParseError("line " + std::to_string(line.number) + ": " + why);
}

int to_int(Line const& line, std::string const& tok) {
  try {
    std::size_t used = 0;
    int const v = std::stoi(tok, &used);
    if (used == tok.size()) return v;
  } catch (std::exception const&) {
  }
  fail(line, "expected an integer, got \"" + tok + "\"");
}

std::string join(std::vector<std::string> const& tokens, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < tokens.size(); ++i) out += (i > from ? " " : "") + tokens[i];
  return out;
}

// "lhs -> rhs..." starting at token `from`; returns the rhs text.
std::string arrow_rhs(Line const& line, std::size_t from) {
  if (line.tokens.size() < from + 2 || line.tokens[from + 1] != "->") fail(line, "expected \"<name> -> <image>\"");
  return join(line.tokens, from + 2);
}

template <typename F>
auto at_line(Line const& line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (ParseError const& e) {
    fail(line, e.what());
  } catch (std::invalid_argument const& e) {
    fail(line, e.what());
  }
}

int generator_index(Line const& line, std::string const& tok) {
  Word const w = at_line(line, [&] { return parse_word(tok); });
  if (w.size() != 1 || w[0].is_inverse()) fail(line, "expected a generator name, got \"" + tok + "\"");
  return w[0].index();
}

bool is_graph_line(Line const& line) {
  return line.tokens[0] == "vertices" || line.tokens[0] == "edge";
}

Graph graph_from(std::vector<Line> const& lines) {
  std::optional<Graph> g;
  for (Line const& line : lines) {
    if (line.tokens[0] == "vertices") {
      if (g) fail(line, "duplicate vertices line");
      if (line.tokens.size() != 2) fail(line, "expected \"vertices <n>\"");
      int const n = to_int(line, line.tokens[1]);
      if (n < 1) fail(line, "need at least one vertex");
      g.emplace(n);
    } else if (line.tokens[0] == "edge") {
      if (!g) fail(line, "edge before vertices line");
      if (line.tokens.size() != 4) fail(line, "expected \"edge <name> <origin> <terminus>\"");
      std::string const& name = line.tokens[1];
      if (name.back() == '-') fail(line, "edge names may not end in '-'");
      int const o = to_int(line, line.tokens[2]);
      int const t = to_int(line, line.tokens[3]);
      if (o < 0 || t < 0 || o >= g->num_vertices() || t >= g->num_vertices()) fail(line, "vertex out of range");
      at_line(line, [&] { return g->add_edge(o, t, name); });
    }
  }
  if (!g) throw ParseError("missing vertices line");
  return *g;
}

std::string edge_label_path(Graph const& g, EdgePath const& p) {
  std::string out;
  for (EdgeId e : p.edges) out += (out.empty() ? "" : " ") + g.label(e);
  return out;
}

}  // namespace

std::string read_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(std::string const& path, std::string const& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

FreeMap parse_automorphism(std::string_view text) {
  std::vector<Line> const lines = tokenize(text);
  int rank = 0;
  std::map<int, Word> images;
  std::map<int, Word> inverses;
  // The rank line may come last, so generator ranges are checked afterwards.
  std::vector<std::pair<Line const*, Word const*>> parsed;
  for (Line const& line : lines) {
    std::string const& key = line.tokens[0];
    if (key == "rank") {
      if (line.tokens.size() != 2) fail(line, "expected \"rank <n>\"");
      rank = to_int(line, line.tokens[1]);
      if (rank < 1) fail(line, "rank must be positive");
    } else if (key == "inverse") {
      std::string const rhs = arrow_rhs(line, 1);
      int const i = generator_index(line, line.tokens[1]);
      auto const [it, fresh] = inverses.emplace(i, at_line(line, [&] { return parse_word(rhs); }));
      if (!fresh) fail(line, "duplicate inverse image");
      parsed.emplace_back(&line, &it->second);
    } else {
      std::string const rhs = arrow_rhs(line, 0);
      int const i = generator_index(line, key);
      auto const [it, fresh] = images.emplace(i, at_line(line, [&] { return parse_word(rhs); }));
      if (!fresh) fail(line, "duplicate image");
      parsed.emplace_back(&line, &it->second);
    }
  }
  if (rank == 0) throw ParseError("missing rank line");
  for (auto const& [line, word] : parsed) {
    if (word->max_index() >= rank) {
      fail(*line, "generator outside rank " + std::to_string(rank) + " in \"" + to_string(*word) + "\"");
    }
  }
  auto collect = [&](std::map<int, Word> const& m, char const* what) {
    std::vector<Word> out;
    for (int i = 0; i < rank; ++i) {
      auto it = m.find(i);
      if (it == m.end()) throw ParseError(std::string("missing ") + what + " of generator " + generator_name(i));
      out.push_back(it->second);
    }
    if (static_cast<int>(m.size()) != rank) throw ParseError(std::string(what) + " of a generator outside the rank");
    return out;
  };
  std::vector<Word> imgs = collect(images, "image");
  std::optional<std::vector<Word>> invs;
  if (!inverses.empty()) invs = collect(inverses, "inverse image");
  FreeMap phi;
  try {
    phi = FreeMap(rank, std::move(imgs), std::move(invs));
  } catch (std::invalid_argument const& e) {
    throw ParseError(e.what());
  }
  if (phi.has_inverse() && !phi.is_certified()) throw ParseError("inverse images do not invert the map");
  for (int i = 0; i < rank; ++i) {
    if (phi.image(i).empty()) throw ParseError("image of " + generator_name(i) + " is trivial");
  }
  return phi;
}

std::string format_automorphism(FreeMap const& phi) {
  std::string out = "rank " + std::to_string(phi.rank()) + "\n";
  for (int i = 0; i < phi.rank(); ++i) out += generator_name(i) + " -> " + to_string(phi.image(i)) + "\n";
  if (phi.has_inverse()) {
    for (int i = 0; i < phi.rank(); ++i) {
      out += "inverse " + generator_name(i) + " -> " + to_string((*phi.inverse_images())[static_cast<std::size_t>(i)]) +
             "\n";
    }
  }
  return out;
}

Graph parse_graph(std::string_view text) {
  std::vector<Line> const lines = tokenize(text);
  for (Line const& line : lines) {
    if (!is_graph_line(line)) fail(line, "unexpected \"" + line.tokens[0] + "\" in a graph file");
  }
  return graph_from(lines);
}

std::string format_graph(Graph const& g) {
  std::string out = "vertices " + std::to_string(g.num_vertices()) + "\n";
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    out += "edge " + g.name(e) + " " + std::to_string(g.origin(e)) + " " + std::to_string(g.terminus(e)) + "\n";
  }
  return out;
}

TopRep parse_toprep(std::string_view text) {
  std::vector<Line> const lines = tokenize(text);
  Graph const g = graph_from(lines);
  std::vector<std::optional<EdgePath>> images(static_cast<std::size_t>(g.num_positive()));
  std::optional<Filtration> filtration;
  for (Line const& line : lines) {
    if (is_graph_line(line)) continue;
    if (line.tokens[0] == "map") {
      std::string const rhs = arrow_rhs(line, 1);
      auto e = g.find_edge(line.tokens[1]);
      if (!e) fail(line, "unknown edge \"" + line.tokens[1] + "\"");
      auto& slot = images[static_cast<std::size_t>(*e / 2)];
      if (slot) fail(line, "duplicate image for edge " + line.tokens[1]);
      slot = at_line(line, [&] { return parse_path(g, rhs); });
      if (slot->edges.empty()) fail(line, "degenerate image for edge " + line.tokens[1]);
    } else if (line.tokens[0] == "filtration") {
      if (!filtration) filtration.emplace();
      std::vector<EdgeId> level;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        auto e = g.find_edge(line.tokens[i]);
        if (!e) fail(line, "unknown edge \"" + line.tokens[i] + "\"");
        level.push_back(*e);
      }
      std::sort(level.begin(), level.end());
      filtration->levels.push_back(std::move(level));
    } else {
      fail(line, "unexpected \"" + line.tokens[0] + "\" in a toprep file");
    }
  }
  std::vector<EdgePath> imgs;
  for (std::size_t k = 0; k < images.size(); ++k) {
    if (!images[k]) throw ParseError("missing image for edge " + g.name(static_cast<EdgeId>(2 * k)));
    imgs.push_back(*images[k]);
  }
  try {
    return TopRep(g, std::move(imgs), std::move(filtration));
  } catch (std::invalid_argument const& e) {
    throw ParseError(e.what());
  }
}

std::string format_toprep(TopRep const& f) {
  Graph const& g = f.graph();
  std::string out = format_graph(g);
  for (EdgeId e = 0; e < g.num_edges(); e += 2) out += "map " + g.name(e) + " -> " + edge_label_path(g, f.image(e)) + "\n";
  for (auto const& level : f.filtration().levels) {
    out += "filtration";
    for (EdgeId e : level) out += " " + g.name(e);
    out += "\n";
  }
  return out;
}

MarkedMetricGraph parse_marked_graph(std::string_view text) {
  std::vector<Line> const lines = tokenize(text);
  Graph const g = graph_from(lines);
  VertexId base = 0;
  std::map<int, EdgePath> petals;
  std::vector<std::optional<Rational>> lengths(static_cast<std::size_t>(g.num_positive()));
  for (Line const& line : lines) {
    if (is_graph_line(line)) continue;
    std::string const& key = line.tokens[0];
    if (key == "base") {
      if (line.tokens.size() != 2) fail(line, "expected \"base <vertex>\"");
      base = to_int(line, line.tokens[1]);
    } else if (key == "marking") {
      std::string const rhs = arrow_rhs(line, 1);
      int const i = generator_index(line, line.tokens[1]);
      EdgePath p = at_line(line, [&] { return parse_path(g, rhs); });
      if (p.edges.empty()) fail(line, "petal must be a nontrivial loop");
      if (!petals.emplace(i, std::move(p)).second) fail(line, "duplicate marking line");
    } else if (key == "length") {
      if (line.tokens.size() != 3) fail(line, "expected \"length <edge> <p/q>\"");
      auto e = g.find_edge(line.tokens[1]);
      if (!e) fail(line, "unknown edge \"" + line.tokens[1] + "\"");
      lengths[static_cast<std::size_t>(*e / 2)] = at_line(line, [&] { return parse_rational(line.tokens[2]); });
    } else {
      fail(line, "unexpected \"" + key + "\" in a marked graph file");
    }
  }
  std::vector<EdgePath> ps;
  for (auto const& [i, p] : petals) {
    if (i != static_cast<int>(ps.size())) throw ParseError("missing marking for generator " + generator_name(static_cast<int>(ps.size())));
    ps.push_back(p);
  }
  std::vector<Rational> ls;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (!lengths[k]) throw ParseError("missing length for edge " + g.name(static_cast<EdgeId>(2 * k)));
    ls.push_back(*lengths[k]);
  }
  try {
    return MarkedMetricGraph(Marking(g, base, std::move(ps)), std::move(ls));
  } catch (std::invalid_argument const& e) {
    throw ParseError(e.what());
  }
}

std::string format_marked_graph(MarkedMetricGraph const& t) {
  Graph const& g = t.graph();
  std::string out = format_graph(g);
  out += "base " + std::to_string(t.marking().base()) + "\n";
  for (int i = 0; i < t.rank(); ++i) {
    out += "marking " + generator_name(i) + " -> " + edge_label_path(g, t.marking().petal(i)) + "\n";
  }
  for (EdgeId e = 0; e < g.num_edges(); e += 2) out += "length " + g.name(e) + " " + to_string(t.length(e)) + "\n";
  return out;
}

namespace {

std::string indent_block(std::string const& name, std::string const& body) {
  std::string out = "begin " + name + "\n";
  std::istringstream in(body);
  for (std::string line; std::getline(in, line);) out += "  " + line + "\n";
  return out + "end\n";
}

}  // namespace

std::string format_witness(WitnessFile const& w) {
  WitnessPair const& p = w.pair;
  std::string out = "# cvn_rigidity witness\n";
  out += "g " + to_string(w.g) + "\n";
  out += "horizon " + std::to_string(w.horizon) + "\n";
  out += std::string("forward_only ") + (w.forward_only ? "true" : "false") + "\n";
  out += "graph " + p.graph_name + "\n";
  out += "delta";
  for (auto const& d : p.delta) out += " " + d.str();
  out += "\n";
  out += "t_star " + (p.t_star ? to_string(*p.t_star) : std::string("none")) + "\n";
  out += "step " + to_string(p.step) + "\n";
  out += "certificate " + to_string(p.certificate) + "\n";
  out += "certificate_lengths " + to_string(p.certificate_t1) + " " + to_string(p.certificate_t2) + "\n";
  out += indent_block("automorphism", format_automorphism(w.phi));
  out += indent_block("T1", format_marked_graph(p.t1));
  out += indent_block("T2", format_marked_graph(p.t2));
  std::string reports;
  for (auto const& r : w.graph_reports) reports += r + "\n";
  out += indent_block("candidates", reports);
  std::string transcript;
  for (auto const& t : w.transcript) transcript += t + "\n";
  out += indent_block("transcript", transcript);
  return out;
}

WitnessFile parse_witness(std::string_view text) {
  WitnessFile out;
  std::map<std::string, std::string> blocks;
  std::map<std::string, std::string> keys;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string current;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream words(raw);
    std::string first;
    words >> first;
    if (!current.empty()) {
      if (first == "end") {
        current.clear();
      } else {
        blocks[current] += raw + "\n";
      }
      continue;
    }
    if (first.empty() || first[0] == '#') continue;
    if (first == "begin") {
      words >> current;
      if (current.empty()) throw ParseError("line " + std::to_string(number) + ": unnamed block");
      blocks[current];
      continue;
    }
    std::string rest;
    std::getline(words, rest);
    if (auto s = rest.find_first_not_of(' '); s != std::string::npos) rest.erase(0, s);
    keys[first] = rest;
  }
  if (!current.empty()) throw ParseError("unterminated block " + current);
  auto key = [&](std::string const& k) {
    auto it = keys.find(k);
    if (it == keys.end()) throw ParseError("witness file: missing key " + k);
    return it->second;
  };
  auto block = [&](std::string const& k) {
    auto it = blocks.find(k);
    if (it == blocks.end()) throw ParseError("witness file: missing block " + k);
    return it->second;
  };
  out.phi = parse_automorphism(block("automorphism"));
  out.g = parse_word(key("g"));
  try {
    out.horizon = std::stoi(key("horizon"));
  } catch (std::exception const&) {
    throw ParseError("witness file: bad horizon");
  }
  out.forward_only = key("forward_only") == "true";
  WitnessPair& p = out.pair;
  p.graph_name = key("graph");
  p.t1 = parse_marked_graph(block("T1"));
  p.t2 = parse_marked_graph(block("T2"));
  std::istringstream deltas(key("delta"));
  for (std::string d; deltas >> d;) {
    Rational const r = parse_rational(d);
    if (boost::multiprecision::denominator(r) != 1) throw ParseError("witness file: delta entries must be integers");
    p.delta.push_back(boost::multiprecision::numerator(r));
  }
  std::string const ts = key("t_star");
  if (ts != "none") p.t_star = parse_rational(ts);
  p.step = parse_rational(key("step"));
  p.certificate = parse_word(key("certificate"));
  std::istringstream cl(key("certificate_lengths"));
  std::string c1, c2;
  cl >> c1 >> c2;
  p.certificate_t1 = parse_rational(c1);
  p.certificate_t2 = parse_rational(c2);
  auto lines_of = [](std::string const& body) {
    std::vector<std::string> out;
    std::istringstream in(body);
    for (std::string line; std::getline(in, line);) {
      if (auto s = line.find_first_not_of(' '); s != std::string::npos) out.push_back(line.substr(s));
    }
    return out;
  };
  if (blocks.count("candidates")) out.graph_reports = lines_of(blocks["candidates"]);
  if (blocks.count("transcript")) out.transcript = lines_of(blocks["transcript"]);
  return out;
}

}  // namespace cvn
