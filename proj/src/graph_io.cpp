#include "qmcs/graph.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <vector>

namespace qmcs {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_index(std::string_view token, std::uint64_t& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

EdgeLineReader::EdgeLineReader(std::istream& in, ParseOptions options)
    : in_(in), options_(options) {
  std::string line;
  if (!next_content_line(line)) throw ParseError(line_, "missing header 'n <count>'");
  const auto tokens = split_ws(line);
  std::uint64_t n = 0;
  if (tokens.size() != 2 || tokens[0] != "n" || !parse_index(tokens[1], n)) {
    throw ParseError(line_, "expected header 'n <count>'");
  }
  if (n > std::numeric_limits<Vertex>::max()) throw ParseError(line_, "vertex count too large");
  n_ = static_cast<std::size_t>(n);
}

bool EdgeLineReader::next_content_line(std::string& out) {
  while (std::getline(in_, out)) {
    ++line_;
    const auto first = out.find_first_not_of(" \t\r");
    if (first == std::string::npos || out[first] == '#') continue;
    return true;
  }
  return false;
}

std::optional<WeightedEdge> EdgeLineReader::next() {
  std::string line;
  if (!next_content_line(line)) return std::nullopt;
  const auto tokens = split_ws(line);
  if (tokens.size() < 2 || tokens.size() > 3) throw ParseError(line_, "expected 'u v [w]'");
  std::uint64_t u = 0, v = 0;
  if (!parse_index(tokens[0], u) || !parse_index(tokens[1], v)) {
    throw ParseError(line_, "vertex ids must be nonnegative integers");
  }
  if (u >= n_ || v >= n_) throw ParseError(line_, "vertex id out of range");
  if (u == v) throw ParseError(line_, "self-loop at vertex " + std::to_string(u));
  Weight w = 1;
  if (tokens.size() == 3) {
    try {
      w = parse_weight(tokens[2]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_, std::string("bad weight: ") + e.what());
    }
  }
  if (w < 0) throw ParseError(line_, "negative weight");
  if (w == 0) throw ParseError(line_, "zero weight");
  if (denominator_of(w) > options_.max_denominator) {
    throw ParseError(line_, "weight denominator exceeds " + std::to_string(options_.max_denominator));
  }
  return WeightedEdge{static_cast<Vertex>(u), static_cast<Vertex>(v), std::move(w)};
}

EdgeStream parse_edge_list(std::istream& in, ParseOptions options) {
  EdgeLineReader reader(in, options);
  EdgeStream out;
  out.n = reader.vertex_count();
  std::unordered_set<std::uint64_t> seen;
  while (auto e = reader.next()) {
    if (!seen.insert(edge_key(e->u, e->v)).second) {
      throw ParseError(reader.line(), "duplicate edge {" + std::to_string(e->u) + "," +
                                          std::to_string(e->v) + "}");
    }
    out.edges.push_back(std::move(*e));
  }
  return out;
}

EdgeStream parse_edge_list(std::string_view text, ParseOptions options) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in, options);
}

std::string serialize_edge_list(const EdgeStream& stream) {
  std::string out = "n " + std::to_string(stream.n) + "\n";
  for (const auto& e : stream.edges) {
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_weight(e.w) + "\n";
  }
  return out;
}

}  // namespace qmcs
