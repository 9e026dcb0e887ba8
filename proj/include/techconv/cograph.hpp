#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/corpus.hpp"
#include "techconv/lexicon.hpp"

namespace techconv {

enum class NodeKind { technology, tag };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view s);

struct Node {
  std::string name;
  NodeKind kind = NodeKind::tag;
  std::int64_t doc_frequency = 0;

  bool operator==(const Node&) const = default;
};

/// Undirected edge with u < v (lexicographic).
struct Edge {
  std::string u;
  std::string v;
  std::int64_t weight = 0;

  bool operator==(const Edge&) const = default;
};

/// Weighted undirected co-occurrence network. Nodes are kept sorted by
/// name and edges by (u, v), so two graphs with the same content compare
/// equal and serialize identically.
class CoGraph {
 public:
  CoGraph() = default;
  /// Sorts, then checks: unique names, u != v, one edge per pair, endpoints
  /// exist, weight >= 1, doc_frequency >= every incident weight.
  CoGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::int64_t total_weight() const;

  bool operator==(const CoGraph&) const = default;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

enum class Field { text, tags, both };
enum class PairMode { all, tech_tag };

Field parse_field(std::string_view s);
PairMode parse_pair_mode(std::string_view s);
std::string_view to_string(Field f);
std::string_view to_string(PairMode p);

struct BuildOptions {
  Field field = Field::both;
  PairMode pairs = PairMode::all;
};

/// The node set a document contributes. Names that are lexicon canonical
/// terms are technologies, everything else is a tag.
std::map<std::string, NodeKind> document_items(const Document& doc, const TermLexicon& lexicon,
                                               Field field);

CoGraph build_cooccurrence(const Corpus& corpus, const TermLexicon& lexicon,
                           const BuildOptions& options = {});

/// Keeps the n most frequent nodes (ties: lexicographically smaller name
/// wins) and the edges among them.
CoGraph top_n_filter(const CoGraph& graph, std::size_t n);

using ClusterMap = std::map<std::string, int>;

std::string to_graphml(const CoGraph& graph, const ClusterMap* clusters = nullptr);
CoGraph from_graphml(std::string_view xml, ClusterMap* clusters = nullptr);
std::string to_graph_json(const CoGraph& graph, const ClusterMap* clusters = nullptr);
CoGraph from_graph_json(std::string_view json_text, ClusterMap* clusters = nullptr);

void export_graphml(const CoGraph& graph, const std::filesystem::path& path,
                    const ClusterMap* clusters = nullptr);
void export_graph_json(const CoGraph& graph, const std::filesystem::path& path,
                       const ClusterMap* clusters = nullptr);
CoGraph import_graphml(const std::filesystem::path& path, ClusterMap* clusters = nullptr);
CoGraph import_graph_json(const std::filesystem::path& path, ClusterMap* clusters = nullptr);

}  // namespace techconv
