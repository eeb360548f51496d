// Command-line driver: orbit analysis, witness construction and train-track
// checks. Exit codes: 0 success, 1 input error, 2 no stabilization,
// 3 no witness, 4 a train-track condition fails.

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cvn/io.hpp"
#include "cvn/rigidity.hpp"
#include "cvn/witness.hpp"

namespace {

using namespace cvn;

constexpr int kInputError = 1;
constexpr int kNotStabilized = 2;
constexpr int kNoWitness = 3;
constexpr int kCheckFailed = 4;

struct AnalyzeConfig {
  std::string automorphism;
  std::string g = "a";
  int horizon = 12;
  std::string letter;
  std::string direction = "both";
  std::size_t letter_cap = kDefaultLetterCap;
  std::optional<int> bcc_bound;
  std::string out;
};

struct WitnessConfig {
  std::string automorphism;
  std::string g = "a";
  int horizon = 20;
  bool forward_only = false;
  std::string graphs = "default";
  std::size_t letter_cap = kDefaultLetterCap;
  int max_word_len = 8;
  std::string recheck;
  std::string out;
};

struct TtcheckConfig {
  std::string toprep;
  int check_depth = 8;
  int path_cap = 4;
  std::string out;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

void emit(std::string const& report, std::string const& out_dir, std::string const& file) {
  if (out_dir.empty()) {
    std::cout << report;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::string const path = (std::filesystem::path(out_dir) / file).string();
  write_file(path, report);
  std::cout << "wrote " << path << "\n";
}

int parse_letter(std::string const& text, int rank) {
  Word const w = parse_word(text);
  if (w.size() != 1 || w[0].is_inverse() || w[0].index() >= rank) {
    throw ParseError("letter must be a single generator of the rank, got \"" + text + "\"");
  }
  return w[0].index();
}

void append_direction(std::ostringstream& r, std::string const& key, PropertyWReport const& w) {
  r << key << ".M " << w.observed_m << "\n";
  r << key << ".stabilized " << yes_no(w.stabilized) << "\n";
  r << key << ".n_range " << w.n_lo << ".." << w.n_hi << "\n";
  r << key << ".per_n";
  for (auto const& [n, k] : w.per_n) r << " " << n << ":" << k;
  r << "\n";
  for (auto const& note : w.truncation_notes) r << key << ".truncation " << note << "\n";
}

int cmd_analyze(AnalyzeConfig const& c) {
  if (c.horizon < 1) throw ParseError("horizon must be at least 1");
  if (c.letter_cap == 0) throw ParseError("letter cap must be positive");
  FreeMap const phi = parse_automorphism(read_file(c.automorphism));
  Word const g = reduce(parse_word(c.g));
  if (g.max_index() >= phi.rank()) throw ParseError("g uses a generator outside the rank");
  Direction const direction = parse_direction(c.direction);
  if (direction != Direction::Forward && !phi.has_inverse()) {
    throw ParseError("backward orbits need inverse images in the automorphism file");
  }

  std::ostringstream r;
  r << "# cvn_rigidity analyze\n";
  r << "automorphism " << std::filesystem::path(c.automorphism).filename().string() << "\n";
  r << "rank " << phi.rank() << "\n";
  r << "g " << to_string(g) << "\n";
  r << "horizon " << c.horizon << "\n";
  r << "direction " << to_string(direction) << "\n";

  std::optional<int> suggested;
  try {
    std::optional<MarkedRep> inverse;
    if (phi.has_inverse()) inverse = rose_marked_rep(phi.inverse());
    for (PairCandidate const& cand : suggest_pair(phi, rose_marked_rep(phi), inverse, c.bcc_bound)) {
      r << "candidate " << to_string(cand.primitive) << " | " << cand.reason << " | inequality "
        << cand.inequality << "\n";
      if (!suggested && cand.letter) suggested = cand.letter;
    }
  } catch (std::exception const& e) {
    r << "candidate none | " << e.what() << "\n";
  }
  int const letter = c.letter.empty() ? suggested.value_or(0) : parse_letter(c.letter, phi.rank());
  r << "letter " << generator_name(letter) << (c.letter.empty() ? " (suggested)" : " (given)") << "\n";

  PropertyPReport const p = check_property_P(phi, g, letter, c.horizon, direction, c.letter_cap);
  if (p.forward) append_direction(r, "fwd", *p.forward);
  if (p.backward) append_direction(r, "bwd", *p.backward);
  r << "merged.M " << p.merged_m << "\n";

  if (phi.rank() == 2) {
    int const lo = direction == Direction::Forward ? 0 : -c.horizon;
    int const hi = direction == Direction::Backward ? 0 : c.horizon;
    std::vector<CyclicWord> sigma;
    for (OrbitEntry& e : orbit(phi, g, lo, hi, c.letter_cap).entries) sigma.push_back(std::move(e.word));
    PropertyWStarReport const ws = w_to_wstar(sigma, letter, p.merged_m);
    r << "wstar.k " << ws.k << "\n";
    r << "wstar.condition1 " << ws.condition1.size() << "\n";
    r << "wstar.condition2 " << ws.condition2.size() << "\n";
    for (auto const& v : ws.condition2) r << "wstar.violation t=" << v.t << " " << to_string(v.rewritten) << "\n";
  }
  r << "verdict " << (p.stabilized ? "stabilized" : "not-stabilized") << "\n";
  emit(r.str(), c.out, "analyze.txt");
  return p.stabilized ? 0 : kNotStabilized;
}

int cmd_recheck(WitnessConfig const& c) {
  WitnessFile const w = parse_witness(read_file(c.recheck));
  OrbitResult const sample = witness_sample(w.phi, w.g, w.horizon, w.forward_only, c.letter_cap);
  std::vector<std::string> const failures = verify_witness(w.pair, sample.entries);
  std::cout << "recheck " << c.recheck << "\n";
  std::cout << "sample " << sample.entries.size() << " words\n";
  for (auto const& f : failures) std::cout << "failure " << f << "\n";
  std::cout << "verdict " << (failures.empty() ? "valid" : "invalid") << "\n";
  return failures.empty() ? 0 : kNoWitness;
}

int cmd_witness(WitnessConfig const& c) {
  if (!c.recheck.empty()) return cmd_recheck(c);
  if (c.automorphism.empty()) throw ParseError("witness needs an automorphism file or --recheck");
  if (c.horizon < 1) throw ParseError("horizon must be at least 1");
  FreeMap const phi = parse_automorphism(read_file(c.automorphism));
  Word const g = reduce(parse_word(c.g));
  if (g.max_index() >= phi.rank()) throw ParseError("g uses a generator outside the rank");
  if (!c.forward_only && !phi.has_inverse()) {
    throw ParseError("two-sided samples need inverse images; use --forward-only");
  }
  OrbitResult const sample = witness_sample(phi, g, c.horizon, c.forward_only, c.letter_cap);
  WitnessOptions options;
  options.family = c.graphs;
  options.max_word_len = c.max_word_len;
  WitnessResult const result = build_witness(sample.entries, phi.rank(), options);

  std::ostringstream summary;
  summary << "# cvn_rigidity witness\n";
  summary << "sample n=" << sample.entries.front().n << ".." << sample.entries.back().n << " ("
          << sample.entries.size() << " words)\n";
  for (auto const& note : sample.truncation_notes) summary << "truncation " << note << "\n";
  for (auto const& line : result.graph_reports) summary << "candidate " << line << "\n";
  if (!result.pair) {
    summary << "verdict no-witness\n";
    std::cout << summary.str();
    return kNoWitness;
  }
  WitnessFile file{phi, g, c.horizon, c.forward_only, *result.pair, result.graph_reports, result.transcript};
  std::string const text = format_witness(file);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::cout << summary.str();
    std::cout << "certificate " << to_string(result.pair->certificate) << " lengths "
              << to_string(result.pair->certificate_t1) << " vs " << to_string(result.pair->certificate_t2) << "\n";
    emit(text, c.out, "witness.txt");
  }
  return 0;
}

std::string turn_text(Graph const& g, Turn t) { return "{" + g.label(t.first) + ", " + g.label(t.second) + "}"; }

std::string matrix_text(IntMatrix const& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.size(); ++r) {
    s += r ? ",[" : "[";
    for (std::size_t c = 0; c < m[r].size(); ++c) s += (c ? "," : "") + std::to_string(m[r][c]);
    s += "]";
  }
  return s + "]";
}

int cmd_ttcheck(TtcheckConfig const& c) {
  TopRep const f = parse_toprep(read_file(c.toprep));
  Graph const& g = f.graph();
  std::ostringstream r;
  r << "# cvn_rigidity ttcheck\n";
  r << "toprep " << std::filesystem::path(c.toprep).filename().string() << "\n";

  TrainTrackReport const tt = verify_train_track(f, c.check_depth);
  r << "train_track " << yes_no(tt.train_track) << "\n";
  if (tt.illegal_turn) {
    r << "tt.illegal_turn " << turn_text(g, tt.illegal_turn->first) << " orbit";
    auto const& orbit = tt.illegal_turn->second.orbit;
    for (std::size_t i = 0; i < orbit.size(); ++i) r << (i ? " -> " : " ") << turn_text(g, orbit[i]);
    r << "\n";
  }
  if (tt.cancellation) {
    Cancellation const& x = *tt.cancellation;
    r << "tt.cancellation n=" << x.n << " edge=" << g.name(x.edge) << " position=" << x.position << " pair "
      << g.label(x.left) << " " << g.label(x.right) << "\n";
  }
  for (auto const& fail : tt.failures) r << "tt.failure " << fail << "\n";

  RttReport const rtt = verify_rtt(f, c.path_cap);
  for (StratumReport const& s : rtt.strata) {
    r << "rtt.stratum " << s.index << " edges";
    for (EdgeId e : s.edges) r << " " << g.name(e);
    r << " matrix " << matrix_text(s.matrix);
    if (s.irreducible) {
      std::ostringstream lam;
      lam << std::setprecision(12) << s.pf.lambda;
      r << " kind " << to_string(s.pf.kind) << " lambda " << lam.str() << " certificate \"" << s.pf.certificate
        << "\"";
    } else {
      r << " reducible";
    }
    r << "\n";
  }
  r << "rtt.valence " << yes_no(rtt.no_valence_one) << "\n";
  r << "rtt.irreducible " << yes_no(rtt.irreducible) << "\n";
  r << "rtt.3a " << yes_no(rtt.condition_3a) << "\n";
  r << "rtt.3b " << yes_no(rtt.condition_3b) << " paths " << rtt.paths_3b << "\n";
  r << "rtt.3c " << yes_no(rtt.condition_3c) << " paths " << rtt.paths_3c << "\n";
  r << "rtt.splitting " << yes_no(rtt.splitting) << " paths " << rtt.paths_split << "\n";
  for (auto const& fail : rtt.failures) r << "rtt.failure " << fail << "\n";

  GoodRttReport const good = verify_good_rtt(f);
  r << "good.aperiodic " << yes_no(good.aperiodic) << "\n";
  r << "good.zero_not_top " << yes_no(good.zero_not_top) << "\n";
  r << "good.neg_form " << yes_no(good.neg_form) << "\n";
  r << "good.convention_k " << (good.convention_k ? std::to_string(*good.convention_k) : "none") << "\n";
  for (auto const& note : good.notes) r << "good.note " << note << "\n";
  for (auto const& fail : good.failures) r << "good.failure " << fail << "\n";

  bool const ok = tt.train_track && rtt.ok() && good.ok();
  r << "verdict " << (ok ? "pass" : "fail") << "\n";
  emit(r.str(), c.out, "ttcheck.txt");
  return ok ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit analysis and non-rigidity witnesses for free group automorphisms"};
  app.require_subcommand(1);

  AnalyzeConfig analyze;
  auto* a = app.add_subcommand("analyze", "bounded-power analysis of the orbit of g");
  a->add_option("automorphism", analyze.automorphism, "automorphism file")->required();
  a->add_option("--g", analyze.g, "orbit seed word");
  a->add_option("--horizon", analyze.horizon, "orbit steps in each direction");
  a->add_option("--letter", analyze.letter, "basis letter to track (default: suggested)");
  a->add_option("--direction", analyze.direction, "fwd, bwd or both");
  a->add_option("--letter-cap", analyze.letter_cap, "largest orbit word kept");
  a->add_option("--bcc-bound", analyze.bcc_bound, "trusted bounded cancellation bound");
  a->add_option("--out", analyze.out, "directory for analyze.txt");

  WitnessConfig witness;
  auto* w = app.add_subcommand("witness", "equal-length pair of marked graphs on the orbit sample");
  w->add_option("automorphism", witness.automorphism, "automorphism file");
  w->add_option("--g", witness.g, "orbit seed word");
  w->add_option("--horizon", witness.horizon, "orbit steps in each direction");
  w->add_flag("--forward-only", witness.forward_only, "sample only n >= 0");
  w->add_option("--graphs", witness.graphs, "default, rose-only, barbell or theta");
  w->add_option("--letter-cap", witness.letter_cap, "largest orbit word kept");
  w->add_option("--max-word-len", witness.max_word_len, "search depth for the certificate word");
  w->add_option("--recheck", witness.recheck, "re-verify an existing witness file");
  w->add_option("--out", witness.out, "directory for witness.txt");

  TtcheckConfig tt;
  auto* t = app.add_subcommand("ttcheck", "train-track and relative train-track checks");
  t->add_option("toprep", tt.toprep, "topological representative file")->required();
  t->add_option("--check-depth", tt.check_depth, "iterates checked for cancellation");
  t->add_option("--path-cap", tt.path_cap, "length of enumerated test paths");
  t->add_option("--out", tt.out, "directory for ttcheck.txt");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  try {
    if (*a) return cmd_analyze(analyze);
    if (*w) return cmd_witness(witness);
    if (*t) return cmd_ttcheck(tt);
  } catch (ParseError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (std::invalid_argument const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (std::exception const& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
