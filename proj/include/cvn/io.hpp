// Line-oriented text formats. '#' starts a comment; blank lines are ignored.
//
//   automorphism:  rank 2 / a -> a b / b -> a / inverse a -> b / inverse b -> b- a
//   graph:         vertices 2 / edge x 0 0 / edge e 0 1
//   toprep:        graph lines / map x -> x y / filtration x  (one line per level)
//   marked graph:  graph lines / base 0 / marking a -> x / length x 1/2
//
// Parsers throw ParseError with the line number.

#ifndef CVN_IO_HPP_
#define CVN_IO_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cvn/free_map.hpp"
#include "cvn/graph.hpp"
#include "cvn/marked_graph.hpp"
#include "cvn/top_rep.hpp"
#include "cvn/witness.hpp"

namespace cvn {

std::string read_file(std::string const& path);
void write_file(std::string const& path, std::string const& content);

FreeMap parse_automorphism(std::string_view text);
std::string format_automorphism(FreeMap const& phi);

Graph parse_graph(std::string_view text);
std::string format_graph(Graph const& g);

TopRep parse_toprep(std::string_view text);
std::string format_toprep(TopRep const& f);

MarkedMetricGraph parse_marked_graph(std::string_view text);
std::string format_marked_graph(MarkedMetricGraph const& t);

struct WitnessFile {
  FreeMap phi;
  Word g;
  int horizon = 0;
  bool forward_only = false;
  WitnessPair pair;
  std::vector<std::string> graph_reports;
  std::vector<std::string> transcript;
};

std::string format_witness(WitnessFile const& w);
WitnessFile parse_witness(std::string_view text);

}  // namespace cvn

#endif  // CVN_IO_HPP_
