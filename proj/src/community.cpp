#include "techconv/community.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("community", message); }

void require_edges(const CoGraph& graph) {
  if (graph.edge_count() == 0) fail("modularity undefined on edgeless graph");
}

// One aggregation level: nodes are communities of the level below.
struct Level {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self_weight;  // intra-node weight, each edge once
  std::vector<double> degree;       // 2 * self_weight + sum of adj weights
  double total = 0.0;               // m

  std::size_t size() const { return degree.size(); }
};

Level level_from_graph(const CoGraph& graph) {
  Level level;
  const std::size_t n = graph.node_count();
  level.adj.resize(n);
  level.self_weight.assign(n, 0.0);
  level.degree.assign(n, 0.0);
  for (const auto& e : graph.edges()) {
    const std::size_t u = *graph.index_of(e.u);
    const std::size_t v = *graph.index_of(e.v);
    const auto w = static_cast<double>(e.weight);
    level.adj[u].emplace_back(v, w);
    level.adj[v].emplace_back(u, w);
    level.degree[u] += w;
    level.degree[v] += w;
    level.total += w;
  }
  for (auto& row : level.adj) std::sort(row.begin(), row.end());
  return level;
}

// Relabels community ids to 0..k-1 in order of first appearance.
int renumber(std::vector<std::size_t>& comm) {
  const std::size_t bound = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
  std::vector<std::size_t> remap(bound, SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : comm) {
    if (remap[c] == SIZE_MAX) remap[c] = next++;
    c = remap[c];
  }
  return static_cast<int>(next);
}

void renumber_labels(std::vector<int>& labels) {
  std::map<int, int> remap;
  for (auto& l : labels) l = remap.emplace(l, static_cast<int>(remap.size())).first->second;
}

Level aggregate(const Level& level, const std::vector<std::size_t>& comm, int count) {
  Level out;
  const auto k = static_cast<std::size_t>(count);
  out.adj.resize(k);
  out.self_weight.assign(k, 0.0);
  out.degree.assign(k, 0.0);
  out.total = level.total;
  std::vector<std::vector<double>> between(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < level.size(); ++i) {
    const std::size_t ci = comm[i];
    out.self_weight[ci] += level.self_weight[i];
    out.degree[ci] += level.degree[i];
    for (const auto& [j, w] : level.adj[i]) {
      if (j < i) continue;  // each undirected edge once
      const std::size_t cj = comm[j];
      if (ci == cj) {
        out.self_weight[ci] += w;
      } else {
        between[ci][cj] += w;
        between[cj][ci] += w;
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b && between[a][b] > 0.0) out.adj[a].emplace_back(b, between[a][b]);
  return out;
}

// Single-node moving until a full pass changes nothing. Gains are scaled by
// 2m^2, so with integer weights and unit resolution they are exact.
bool local_move(const Level& level, std::vector<std::size_t>& comm, double resolution) {
  const std::size_t n = level.size();
  const double two_m = 2.0 * level.total;
  std::vector<double> tot(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    tot[comm[i]] += level.degree[i];
    ++members[comm[i]];
  }
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool moved_any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t own = comm[i];
      const double ki = level.degree[i];
      touched.clear();
      for (const auto& [j, w] : level.adj[i]) {
        const std::size_t cj = comm[j];
        if (link[cj] == 0.0) touched.push_back(cj);
        link[cj] += w;
      }
      tot[own] -= ki;
      --members[own];
      auto gain = [&](std::size_t c) { return two_m * link[c] - resolution * tot[c] * ki; };
      const double own_gain = gain(own);

      std::sort(touched.begin(), touched.end());
      std::size_t best = own;
      double best_gain = 0.0;
      bool have_candidate = false;
      auto consider = [&](std::size_t c, double g) {
        if (!have_candidate || g > best_gain || (g == best_gain && c < best)) {
          best = c;
          best_gain = g;
          have_candidate = true;
        }
      };
      for (std::size_t c : touched)
        if (c != own) consider(c, gain(c));
      if (members[own] > 0) {
        // moving out alone into the smallest free id
        std::size_t free_id = 0;
        while (members[free_id] > 0 || free_id == own) ++free_id;
        consider(free_id, 0.0);
      }
      const std::size_t target = have_candidate && best_gain > own_gain ? best : own;
      if (target != own) {
        moved = true;
        moved_any = true;
      }
      comm[i] = target;
      tot[target] += ki;
      ++members[target];
      for (std::size_t c : touched) link[c] = 0.0;
    }
  }
  return moved_any;
}

// Alternates single-node moves on the original graph with multi-level
// aggregation until neither changes anything. Returns dense community ids
// numbered by first appearance.
std::vector<std::size_t> optimise(const Level& base, std::vector<std::size_t> node_comm,
                                  double resolution) {
  renumber(node_comm);
  for (;;) {
    const bool moved = local_move(base, node_comm, resolution);
    int count = renumber(node_comm);
    Level level = aggregate(base, node_comm, count);
    bool merged = false;
    for (;;) {
      std::vector<std::size_t> comm(level.size());
      std::iota(comm.begin(), comm.end(), std::size_t{0});
      if (!local_move(level, comm, resolution)) break;
      merged = true;
      count = renumber(comm);
      for (auto& c : node_comm) c = comm[c];
      level = aggregate(level, comm, count);
    }
    if (!moved && !merged) break;
  }
  renumber(node_comm);
  return node_comm;
}

double level_quality(const Level& base, const std::vector<std::size_t>& comm, double resolution) {
  const std::size_t k = *std::max_element(comm.begin(), comm.end()) + 1;
  std::vector<double> in(k, 0.0), tot(k, 0.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    tot[comm[i]] += base.degree[i];
    for (const auto& [j, w] : base.adj[i])
      if (comm[j] == comm[i]) in[comm[i]] += w;
  }
  const double two_m = 2.0 * base.total;
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += in[c] / two_m - resolution * (tot[c] / two_m) * (tot[c] / two_m);
  return q;
}

constexpr std::size_t kMaxExactGroup = 10;

// Best partition of a small node group, found by enumerating every set
// partition (restricted growth strings) with incremental scoring. Scores are
// the group's share of Q times (2m)^2; edges leaving the group do not depend
// on how the group is split, so they are left out. Returns labels per member,
// or an empty vector when nothing beats `current` by more than rounding.
std::vector<int> best_regrouping(const Level& base, const std::vector<std::size_t>& members,
                                 const std::vector<int>& current, double resolution) {
  const std::size_t s = members.size();
  std::vector<std::vector<double>> w(s, std::vector<double>(s, 0.0));
  std::vector<std::size_t> local(base.size(), SIZE_MAX);
  for (std::size_t k = 0; k < s; ++k) local[members[k]] = k;
  for (std::size_t k = 0; k < s; ++k)
    for (const auto& [j, wt] : base.adj[members[k]])
      if (local[j] != SIZE_MAX) w[k][local[j]] = wt;
  std::vector<double> deg(s);
  for (std::size_t k = 0; k < s; ++k) deg[k] = base.degree[members[k]];
  const double two_m = 2.0 * base.total;

  auto score_of = [&](const std::vector<int>& labels) {
    std::vector<double> in(s, 0.0), tot(s, 0.0);
    for (std::size_t a = 0; a < s; ++a) {
      tot[static_cast<std::size_t>(labels[a])] += deg[a];
      for (std::size_t b = 0; b < s; ++b)
        if (labels[a] == labels[b]) in[static_cast<std::size_t>(labels[a])] += w[a][b];
    }
    double q = 0.0;
    for (std::size_t p = 0; p < s; ++p) q += in[p] * two_m - resolution * tot[p] * tot[p];
    return q;
  };
  const double now = score_of(current);
  double best = now + 1e-9 * std::max(1.0, std::abs(now));
  std::vector<int> best_labels;

  std::vector<int> labels(s, 0);
  std::vector<double> in(s, 0.0), tot(s, 0.0);
  // in[p] * two_m - res * tot[p]^2 summed over parts, kept incrementally
  std::function<void(std::size_t, int, double)> visit = [&](std::size_t k, int parts,
                                                            double score) {
    if (k == s) {
      if (score > best) {
        best = score;
        best_labels = labels;
      }
      return;
    }
    for (int p = 0; p <= parts && p < static_cast<int>(s); ++p) {
      const auto pi = static_cast<std::size_t>(p);
      double link = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        if (labels[j] == p) link += w[k][j];
      const double before = in[pi] * two_m - resolution * tot[pi] * tot[pi];
      in[pi] += 2.0 * link;
      tot[pi] += deg[k];
      const double after = in[pi] * two_m - resolution * tot[pi] * tot[pi];
      labels[k] = p;
      visit(k + 1, std::max(parts, p + 1), score + after - before);
      in[pi] -= 2.0 * link;
      tot[pi] -= deg[k];
    }
  };
  visit(0, 0, 0.0);
  return best_labels;
}

}  // namespace

std::vector<std::vector<std::string>> Partition::clusters() const {
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(cluster_count));
  for (const auto& [name, c] : assignment) out[static_cast<std::size_t>(c)].push_back(name);
  return out;
}

Partition make_partition(ClusterMap assignment) {
  int max_id = -1;
  for (const auto& [name, c] : assignment) {
    if (c < 0) fail("negative cluster id for '" + name + "'");
    max_id = std::max(max_id, c);
  }
  std::vector<bool> used(static_cast<std::size_t>(max_id + 1), false);
  for (const auto& [name, c] : assignment) used[static_cast<std::size_t>(c)] = true;
  for (std::size_t c = 0; c < used.size(); ++c)
    if (!used[c]) fail("cluster ids are not dense: id " + std::to_string(c) + " is unused");
  Partition p;
  p.assignment = std::move(assignment);
  p.cluster_count = max_id + 1;
  return p;
}

double modularity(const CoGraph& graph, const ClusterMap& assignment, double resolution) {
  require_edges(graph);
  if (assignment.size() != graph.node_count())
    fail("partition covers " + std::to_string(assignment.size()) + " nodes, graph has " +
         std::to_string(graph.node_count()));
  std::map<int, double> in, tot;
  for (const auto& n : graph.nodes()) {
    auto it = assignment.find(n.name);
    if (it == assignment.end()) fail("node '" + n.name + "' has no cluster");
    tot[it->second] += 0.0;
  }
  for (const auto& e : graph.edges()) {
    const int cu = assignment.at(e.u);
    const int cv = assignment.at(e.v);
    const auto w = static_cast<double>(e.weight);
    tot[cu] += w;
    tot[cv] += w;
    if (cu == cv) in[cu] += 2.0 * w;
  }
  const double two_m = 2.0 * static_cast<double>(graph.total_weight());
  double q = 0.0;
  for (const auto& [c, t] : tot) {
    const double a = t / two_m;
    q += in[c] / two_m - resolution * a * a;
  }
  return q;
}

Partition louvain(const CoGraph& graph, const LouvainOptions& options) {
  require_edges(graph);
  const Level base = level_from_graph(graph);
  const double res = options.resolution;

  std::vector<std::size_t> best(base.size());
  std::iota(best.begin(), best.end(), std::size_t{0});
  best = optimise(base, std::move(best), res);
  double best_q = level_quality(base, best, res);

  // Greedy moving cannot undo a bad early grouping. Each trial perturbs the
  // current best partition and optimises again; a trial is kept only when Q
  // strictly improves, so the loop terminates. A trial either
  // dissolves one community into singletons or regroups a small neighbourhood
  // exactly.
  auto try_improve = [&](std::vector<std::size_t> trial) {
    trial = optimise(base, std::move(trial), res);
    const double q = level_quality(base, trial, res);
    if (q > best_q + 1e-12 * std::max(1.0, std::abs(best_q))) {
      best = std::move(trial);
      best_q = q;
      return true;
    }
    return false;
  };
  for (bool improved = true; improved;) {
    improved = false;
    const std::size_t count = *std::max_element(best.begin(), best.end()) + 1;
    for (std::size_t c = 0; c < count && !improved; ++c) {
      std::vector<std::size_t> trial = best;
      std::size_t fresh = count;
      for (auto& t : trial)
        if (t == c) t = fresh++;
      improved = try_improve(std::move(trial));
    }
    if (improved) continue;
    // Regroup one community, or up to three linked communities, exactly
    // when their union is small enough to enumerate.
    std::set<std::set<std::size_t>> groups;
    std::vector<std::set<std::size_t>> linked(count);
    for (std::size_t u = 0; u < base.size(); ++u)
      for (const auto& [v, w] : base.adj[u])
        if (best[u] != best[v]) linked[best[u]].insert(best[v]);
    for (std::size_t c = 0; c < count; ++c) {
      groups.insert({c});
      for (std::size_t d : linked[c]) {
        groups.insert({c, d});
        for (std::size_t e : linked[c]) groups.insert({c, d, e});
        for (std::size_t e : linked[d]) groups.insert({c, d, e});
      }
    }
    for (const auto& group : groups) {
      if (improved) break;
      std::vector<std::size_t> members;
      std::vector<int> current;
      for (std::size_t i = 0; i < best.size(); ++i)
        if (group.count(best[i])) {
          members.push_back(i);
          current.push_back(static_cast<int>(best[i]));
        }
      if (members.size() < 2 || members.size() > kMaxExactGroup) continue;
      renumber_labels(current);
      const auto labels = best_regrouping(base, members, current, res);
      if (labels.empty()) continue;
      std::vector<std::size_t> trial = best;
      for (std::size_t k = 0; k < members.size(); ++k)
        trial[members[k]] = count + static_cast<std::size_t>(labels[k]);
      improved = try_improve(std::move(trial));
    }
  }

  ClusterMap assignment;
  for (std::size_t i = 0; i < base.size(); ++i)
    assignment[graph.nodes()[i].name] = static_cast<int>(best[i]);
  Partition p = make_partition(std::move(assignment));
  p.modularity = modularity(graph, p.assignment, res);
  return p;
}

std::vector<ClusterLabel> suggest_labels(const CoGraph& graph, const Partition& partition) {
  std::map<std::string, std::int64_t> inner_degree;
  for (const auto& [name, c] : partition.assignment) inner_degree[name] = 0;
  for (const auto& e : graph.edges()) {
    auto u = partition.assignment.find(e.u);
    auto v = partition.assignment.find(e.v);
    if (u == partition.assignment.end() || v == partition.assignment.end()) continue;
    if (u->second == v->second) {
      inner_degree[e.u] += e.weight;
      inner_degree[e.v] += e.weight;
    }
  }
  std::vector<ClusterLabel> labels;
  auto clusters = partition.clusters();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    auto members = clusters[c];
    std::stable_sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
      const auto da = inner_degree[a];
      const auto db = inner_degree[b];
      return da != db ? da > db : a < b;
    });
    if (members.size() > 5) members.resize(5);
    ClusterLabel label;
    label.cluster = static_cast<int>(c);
    label.suggested_label = members.empty() ? std::string{} : members.front();
    label.top_tags = std::move(members);
    labels.push_back(std::move(label));
  }
  return labels;
}

std::string partition_to_json(const Partition& partition) {
  nlohmann::json doc;
  doc["assignment"] = nlohmann::json::object();
  for (const auto& [name, c] : partition.assignment) doc["assignment"][name] = c;
  doc["cluster_count"] = partition.cluster_count;
  doc["modularity"] = partition.modularity;
  return doc.dump(2) + "\n";
}

Partition partition_from_json(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    ClusterMap assignment;
    for (const auto& [name, c] : doc.at("assignment").items()) assignment[name] = c.get<int>();
    Partition p = make_partition(std::move(assignment));
    p.modularity = doc.value("modularity", 0.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed partition JSON: ") + e.what());
  }
}

void save_partition(const Partition& partition, const std::filesystem::path& path) {
  write_file_atomic(path, partition_to_json(partition));
}

Partition load_partition(const std::filesystem::path& path) {
  return partition_from_json(read_file(path));
}

}  // namespace techconv
