#include "markov_id/matrix_io.hpp"

#include "markov_id/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace markov_id {

using nlohmann::json;

std::string matrix_to_json(const TransitionMatrix& p) {
  const auto n = p.state_count();
  json edges = json::array();
  for (const auto& [x, y] : p.edges().edges()) edges.push_back({x, y});
  json rows = json::array();
  for (State x = 0; x < n; ++x) {
    json row = json::array();
    for (State y = 0; y < n; ++y) row.push_back(p(x, y));
    rows.push_back(std::move(row));
  }
  json doc = {{"states", n}, {"edges", std::move(edges)}, {"rows", std::move(rows)}};
  return doc.dump() + "\n";
}

TransitionMatrix matrix_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
  try {
    const auto n = doc.at("states").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("matrix JSON: each edge must be a pair [i, j]");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    const auto rows = doc.at("rows").get<std::vector<std::vector<double>>>();
    return TransitionMatrix::validate(n, std::move(edges), rows);
  } catch (const json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
}

std::string matrix_to_text(const TransitionMatrix& p) {
  std::string out;
  char buf[64];
  for (State x = 0; x < p.state_count(); ++x) {
    for (State y = 0; y < p.state_count(); ++y) {
      std::snprintf(buf, sizeof buf, "%.17g", p(x, y));
      if (y) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

TransitionMatrix matrix_from_text(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      double v = 0.0;
      const auto* first = token.data();
      const auto* last = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) throw FormatError("matrix text: cannot parse '" + token + "'");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("matrix text: no rows");
  return TransitionMatrix::from_rows(rows);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << contents;
}

TransitionMatrix load_matrix(const std::filesystem::path& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return matrix_from_json(text);
  return matrix_from_text(text);
}

void save_matrix(const std::filesystem::path& path, const TransitionMatrix& p) {
  write_file(path, path.extension() == ".json" ? matrix_to_json(p) : matrix_to_text(p));
}

}  // namespace markov_id
