#pragma once

// Edge-list text format:
//   n <count>
//   i j w            (one line per edge, 1-based, i < j)
// plus a JSON sidecar with the generator metadata.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fgft/csv.hpp"
#include "fgft/error.hpp"
#include "fgft/graph.hpp"
#include "json.hpp"

namespace fgft {

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << "n " << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.weight(i, j) != 0.0) os << (i + 1) << ' ' << (j + 1) << ' ' << format_real(g.weight(i, j)) << '\n';
  if (!os) throw IoError("failed to write edge list");
}

inline Graph read_edge_list(std::istream& is, ModelInfo info = {}) {
  std::string tag;
  std::size_t n = 0;
  if (!(is >> tag >> n) || tag != "n" || n == 0) throw IoError("edge list: header must read 'n <count>'");
  Matrix w(n, n);
  std::size_t i = 0, j = 0;
  double weight = 0.0;
  while (is >> i >> j >> weight) {
    if (i < 1 || j < 1 || i > n || j > n || i == j) throw IoError("edge list: bad edge endpoints");
    if (!(weight >= 0.0)) throw IoError("edge list: weights must be non-negative");
    w(i - 1, j - 1) = w(j - 1, i - 1) = weight;
  }
  if (!is.eof()) throw IoError("edge list: malformed edge line");
  return Graph(std::move(w), std::move(info));
}

inline nlohmann::json model_info_to_json(const ModelInfo& info) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : info.params) params[key] = value;
  nlohmann::json j = {
      {"model", std::string(to_string(info.kind))},
      {"parameters", params},
      {"seed", info.rng.seed},
      {"stream_index", info.rng.stream_index},
      {"component_count", info.component_count},
  };
  if (!info.coordinates.empty()) {
    auto coords = nlohmann::json::array();
    for (const auto& pt : info.coordinates) coords.push_back({pt.x, pt.y});
    j["coordinates"] = coords;
  }
  return j;
}

inline ModelInfo model_info_from_json(const nlohmann::json& j) {
  try {
    ModelInfo info;
    info.kind = parse_model_kind(j.at("model").get<std::string>());
    for (const auto& [key, value] : j.at("parameters").items())
      info.params.emplace_back(key, value.get<double>());
    info.rng.seed = j.value("seed", std::uint64_t{0});
    info.rng.stream_index = j.value("stream_index", std::uint64_t{0});
    if (j.contains("coordinates"))
      for (const auto& pt : j.at("coordinates")) info.coordinates.push_back({pt.at(0), pt.at(1)});
    return info;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("graph metadata: ") + e.what());
  }
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& graph_path) {
  return std::filesystem::path(graph_path.string() + ".json");
}

/// Writes `path` and `path.json`.
inline void save_graph(const std::filesystem::path& path, const Graph& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_edge_list(os, g);
  std::ofstream meta(sidecar_path(path));
  if (!meta) throw IoError("cannot open '" + sidecar_path(path).string() + "' for writing");
  meta << model_info_to_json(g.info()).dump(2) << '\n';
}

/// Reads `path`; picks up `path.json` when it exists.
inline Graph load_graph(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  ModelInfo info;
  if (std::ifstream meta(sidecar_path(path)); meta) {
    try {
      info = model_info_from_json(nlohmann::json::parse(meta));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("graph metadata: " + std::string(e.what()));
    }
  }
  return read_edge_list(is, std::move(info));
}

}  // namespace fgft
