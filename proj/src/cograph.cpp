#include "techconv/cograph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("cograph", message); }

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail("invalid integer for " + what + ": '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::technology ? "technology" : "tag";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "technology") return NodeKind::technology;
  if (s == "tag") return NodeKind::tag;
  fail("unknown node kind '" + std::string(s) + "'");
}

Field parse_field(std::string_view s) {
  if (s == "text") return Field::text;
  if (s == "tags") return Field::tags;
  if (s == "both") return Field::both;
  fail("unknown field '" + std::string(s) + "' (expected text|tags|both)");
}

PairMode parse_pair_mode(std::string_view s) {
  if (s == "all") return PairMode::all;
  if (s == "tech-tag") return PairMode::tech_tag;
  fail("unknown pair mode '" + std::string(s) + "' (expected all|tech-tag)");
}

std::string_view to_string(Field f) {
  switch (f) {
    case Field::text: return "text";
    case Field::tags: return "tags";
    case Field::both: return "both";
  }
  return "both";
}

std::string_view to_string(PairMode p) { return p == PairMode::all ? "all" : "tech-tag"; }

CoGraph::CoGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i].name == nodes_[i - 1].name) fail("duplicate node '" + nodes_[i].name + "'");
  for (const auto& n : nodes_)
    if (n.doc_frequency < 0) fail("negative doc_frequency on '" + n.name + "'");
  for (auto& e : edges_) {
    if (e.u == e.v) fail("self-loop on '" + e.u + "'");
    if (e.v < e.u) std::swap(e.u, e.v);
    if (e.weight < 1) fail("edge " + e.u + " -- " + e.v + " has weight < 1");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      fail("duplicate edge " + edges_[i].u + " -- " + edges_[i].v);
  for (const auto& e : edges_) {
    for (const auto* end : {&e.u, &e.v}) {
      const auto idx = index_of(*end);
      if (!idx) fail("edge endpoint '" + *end + "' is not a node");
      if (nodes_[*idx].doc_frequency < e.weight)
        fail("doc_frequency of '" + *end + "' is below an incident edge weight");
    }
  }
}

std::optional<std::size_t> CoGraph::index_of(std::string_view name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name,
                             [](const Node& n, std::string_view k) { return n.name < k; });
  if (it == nodes_.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::int64_t CoGraph::total_weight() const {
  std::int64_t m = 0;
  for (const auto& e : edges_) m += e.weight;
  return m;
}

std::map<std::string, NodeKind> document_items(const Document& doc, const TermLexicon& lexicon,
                                               Field field) {
  std::map<std::string, NodeKind> items;
  if (field != Field::tags)
    for (auto& term : lexicon.extract(doc.text)) items.emplace(term, NodeKind::technology);
  if (field != Field::text)
    for (const auto& tag : doc.tags)
      items.emplace(tag, lexicon.contains(tag) ? NodeKind::technology : NodeKind::tag);
  return items;
}

CoGraph build_cooccurrence(const Corpus& corpus, const TermLexicon& lexicon,
                           const BuildOptions& options) {
  std::map<std::string, Node> nodes;
  std::map<std::pair<std::string, std::string>, std::int64_t> weights;
  for (const auto& doc : corpus.documents) {
    const auto items = document_items(doc, lexicon, options.field);
    for (const auto& [name, kind] : items) {
      auto [it, inserted] = nodes.try_emplace(name, Node{name, kind, 0});
      ++it->second.doc_frequency;
    }
    for (auto a = items.begin(); a != items.end(); ++a) {
      for (auto b = std::next(a); b != items.end(); ++b) {
        if (options.pairs == PairMode::tech_tag && a->second == b->second) continue;
        ++weights[{a->first, b->first}];
      }
    }
  }
  std::vector<Node> node_list;
  node_list.reserve(nodes.size());
  for (auto& [name, node] : nodes) node_list.push_back(std::move(node));
  std::vector<Edge> edge_list;
  edge_list.reserve(weights.size());
  for (const auto& [pair, w] : weights) edge_list.push_back(Edge{pair.first, pair.second, w});
  return CoGraph(std::move(node_list), std::move(edge_list));
}

CoGraph top_n_filter(const CoGraph& graph, std::size_t n) {
  if (n == 0) fail("top_n must be at least 1");
  if (graph.node_count() <= n) return graph;
  std::vector<Node> ranked = graph.nodes();
  std::sort(ranked.begin(), ranked.end(), [](const Node& a, const Node& b) {
    if (a.doc_frequency != b.doc_frequency) return a.doc_frequency > b.doc_frequency;
    return a.name < b.name;
  });
  ranked.resize(n);
  std::sort(ranked.begin(), ranked.end(),
            [](const Node& a, const Node& b) { return a.name < b.name; });
  std::unordered_set<std::string_view> kept;
  for (const auto& node : ranked) kept.insert(node.name);
  auto keep = [&](const std::string& name) { return kept.count(name) > 0; };
  std::vector<Edge> edges;
  for (const auto& e : graph.edges())
    if (keep(e.u) && keep(e.v)) edges.push_back(e);
  return CoGraph(std::move(ranked), std::move(edges));
}

std::string to_graphml(const CoGraph& graph, const ClusterMap* clusters) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"doc_frequency\" for=\"node\" attr.name=\"doc_frequency\" "
         "attr.type=\"int\"/>\n"
      << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  const auto& nodes = graph.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    out << "    <node id=\"n" << i << "\">\n"
        << "      <data key=\"label\">" << xml_escape(n.name) << "</data>\n"
        << "      <data key=\"kind\">" << to_string(n.kind) << "</data>\n"
        << "      <data key=\"doc_frequency\">" << n.doc_frequency << "</data>\n";
    if (clusters) {
      auto it = clusters->find(n.name);
      if (it != clusters->end())
        out << "      <data key=\"cluster\">" << it->second << "</data>\n";
    }
    out << "    </node>\n";
  }
  const auto& edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    out << "    <edge id=\"e" << i << "\" source=\"n" << *graph.index_of(e.u) << "\" target=\"n"
        << *graph.index_of(e.v) << "\">\n"
        << "      <data key=\"weight\">" << e.weight << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

CoGraph from_graphml(std::string_view xml, ClusterMap* clusters) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    fail(std::string("malformed GraphML: ") + e.what());
  }
  const auto root = tree.get_child_optional("graphml");
  if (!root) fail("missing <graphml> root");

  std::map<std::string, std::string> key_names;  // key id -> attr.name
  for (const auto& [tag, child] : *root)
    if (tag == "key")
      key_names[child.get<std::string>("<xmlattr>.id", "")] =
          child.get<std::string>("<xmlattr>.attr.name", child.get<std::string>("<xmlattr>.id", ""));

  const auto graph = root->get_child_optional("graph");
  if (!graph) fail("missing <graph> element");

  auto read_data = [&](const pt::ptree& element) {
    std::map<std::string, std::string> values;
    for (const auto& [tag, child] : element) {
      if (tag != "data") continue;
      const auto key = child.get<std::string>("<xmlattr>.key", "");
      auto it = key_names.find(key);
      values[it == key_names.end() ? key : it->second] = child.data();
    }
    return values;
  };

  std::unordered_map<std::string, std::string> id_to_name;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  if (clusters) clusters->clear();
  for (const auto& [tag, child] : *graph) {
    if (tag != "node") continue;
    const auto id = child.get<std::string>("<xmlattr>.id", "");
    auto data = read_data(child);
    Node n;
    n.name = data.count("label") ? data["label"] : id;
    n.kind = parse_node_kind(data.count("kind") ? data["kind"] : "tag");
    n.doc_frequency = parse_int(data.count("doc_frequency") ? data["doc_frequency"] : "0",
                                "doc_frequency of '" + n.name + "'");
    if (clusters && data.count("cluster"))
      (*clusters)[n.name] = static_cast<int>(parse_int(data["cluster"], "cluster"));
    id_to_name[id] = n.name;
    nodes.push_back(std::move(n));
  }
  for (const auto& [tag, child] : *graph) {
    if (tag != "edge") continue;
    auto endpoint = [&](const char* attr) {
      const auto id = child.get<std::string>(std::string("<xmlattr>.") + attr, "");
      auto it = id_to_name.find(id);
      if (it == id_to_name.end()) fail("edge references unknown node id '" + id + "'");
      return it->second;
    };
    auto data = read_data(child);
    edges.push_back(Edge{endpoint("source"), endpoint("target"),
                         parse_int(data.count("weight") ? data["weight"] : "1", "edge weight")});
  }
  return CoGraph(std::move(nodes), std::move(edges));
}

std::string to_graph_json(const CoGraph& graph, const ClusterMap* clusters) {
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  for (const auto& n : graph.nodes()) {
    nlohmann::json j = {{"name", n.name},
                        {"kind", std::string(to_string(n.kind))},
                        {"doc_frequency", n.doc_frequency}};
    if (clusters) {
      auto it = clusters->find(n.name);
      if (it != clusters->end()) j["cluster"] = it->second;
    }
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges())
    doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  return doc.dump(2) + "\n";
}

CoGraph from_graph_json(std::string_view json_text, ClusterMap* clusters) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
    std::vector<Node> nodes;
    if (clusters) clusters->clear();
    for (const auto& j : doc.at("nodes")) {
      Node n{j.at("name").get<std::string>(), parse_node_kind(j.at("kind").get<std::string>()),
             j.at("doc_frequency").get<std::int64_t>()};
      if (clusters && j.contains("cluster")) (*clusters)[n.name] = j["cluster"].get<int>();
      nodes.push_back(std::move(n));
    }
    std::vector<Edge> edges;
    for (const auto& j : doc.at("edges"))
      edges.push_back(Edge{j.at("u").get<std::string>(), j.at("v").get<std::string>(),
                           j.at("weight").get<std::int64_t>()});
    return CoGraph(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed graph JSON: ") + e.what());
  }
}

void export_graphml(const CoGraph& graph, const std::filesystem::path& path,
                    const ClusterMap* clusters) {
  write_file_atomic(path, to_graphml(graph, clusters));
}

void export_graph_json(const CoGraph& graph, const std::filesystem::path& path,
                       const ClusterMap* clusters) {
  write_file_atomic(path, to_graph_json(graph, clusters));
}

CoGraph import_graphml(const std::filesystem::path& path, ClusterMap* clusters) {
  return from_graphml(read_file(path), clusters);
}

CoGraph import_graph_json(const std::filesystem::path& path, ClusterMap* clusters) {
  return from_graph_json(read_file(path), clusters);
}

}  // namespace techconv
