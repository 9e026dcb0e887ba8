#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/cograph.hpp"

namespace techconv {

/// Disjoint assignment of graph nodes to clusters 0..cluster_count-1.
struct Partition {
  ClusterMap assignment;
  double modularity = 0.0;
  int cluster_count = 0;

  /// Members of each cluster, sorted by name.
  std::vector<std::vector<std::string>> clusters() const;
  bool operator==(const Partition&) const = default;
};

/// Checks that ids are dense and fills cluster_count. Modularity is left 0.
Partition make_partition(ClusterMap assignment);

/// Weighted Newman modularity with resolution gamma:
///   Q = sum_c [ in_c / (2m) - gamma * (tot_c / (2m))^2 ]
/// where in_c counts each intra-cluster edge twice and tot_c sums weighted
/// degrees. The assignment must cover exactly the graph's nodes.
double modularity(const CoGraph& graph, const ClusterMap& assignment, double resolution = 1.0);

struct LouvainOptions {
  double resolution = 1.0;
};

/// Deterministic Louvain.
///
/// Nodes are visited in index order (lexicographic by name at the first
/// level, by community id after aggregation). A node leaves its community
/// only for a strictly larger gain; equal gains go to the smallest community
/// id. Moving into a fresh singleton is one of the candidates. Levels are
/// aggregated until a pass moves nothing, then the result is polished with
/// single-node moves on the original graph and re-aggregated if that moved
/// anything. Isolated nodes end up as singletons.
Partition louvain(const CoGraph& graph, const LouvainOptions& options = {});

struct ClusterLabel {
  int cluster = 0;
  std::string suggested_label;
  std::vector<std::string> top_tags;  // up to 5, by intra-cluster weighted degree
};

std::vector<ClusterLabel> suggest_labels(const CoGraph& graph, const Partition& partition);

std::string partition_to_json(const Partition& partition);
Partition partition_from_json(std::string_view json_text);
void save_partition(const Partition& partition, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);

}  // namespace techconv
