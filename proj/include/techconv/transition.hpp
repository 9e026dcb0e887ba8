#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/community.hpp"

namespace techconv {

enum class Measure { overlap_target, jaccard };

Measure parse_measure(std::string_view s);
std::string_view to_string(Measure m);

/// Cluster-to-cluster similarity between window t (rows) and t+1 (columns).
struct SimilarityMatrix {
  std::size_t rows = 0;  // clusters at t
  std::size_t cols = 0;  // clusters at t+1
  Measure measure = Measure::overlap_target;
  std::vector<double> values;         // row-major rows x cols
  std::vector<std::int64_t> overlap;  // |V_i ∩ V_j|, row-major
  std::vector<std::int64_t> row_sizes;
  std::vector<std::int64_t> col_sizes;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::int64_t shared(std::size_t i, std::size_t j) const { return overlap[i * cols + j]; }
};

/// Intersections are taken on node names; kind is ignored.
/// overlap_target: |V_i ∩ V_j| / |V_j|;  jaccard: |V_i ∩ V_j| / |V_i ∪ V_j|.
SimilarityMatrix similarity_matrix(const Partition& at_t, const Partition& at_t1,
                                   Measure measure = Measure::overlap_target);

/// [[0, S], [S^T, 0]] of size (rows + cols).
struct BiAdjacency {
  std::size_t size = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * size + c]; }
};

BiAdjacency biadjacency(const SimilarityMatrix& s);

struct ConvergenceIndices {
  std::vector<double> ci;  // per t+1 cluster
  std::vector<double> ni;  // 1 - ci
};

/// CI_j = sum_i S_ij, NI_j = 1 - CI_j. Only defined for overlap_target.
ConvergenceIndices indices(const SimilarityMatrix& s);

enum class EventKind { birth, death, merge, split, persist };

std::string_view to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::persist;
  std::vector<int> rows;  // clusters at t involved
  std::vector<int> cols;  // clusters at t+1 involved
  std::vector<double> values;  // supporting similarities, aligned with the non-singleton side

  bool operator==(const Event&) const = default;
};

/// death: zero row; birth: zero column; merge: >= 2 column entries >= tau;
/// split: >= 2 row entries >= tau; persist: S_ij >= tau with neither a merge
/// on j nor a split on i. A cluster may take part in several kinds.
std::vector<Event> classify_events(const SimilarityMatrix& s, double tau);

struct TransitionReport {
  SimilarityMatrix similarity;
  ConvergenceIndices indices;  // empty for jaccard
  std::vector<Event> events;
  double tau = 0.1;
};

TransitionReport make_report(const Partition& at_t, const Partition& at_t1,
                             Measure measure = Measure::overlap_target, double tau = 0.1);

/// Label lists are indexed by cluster id.
std::string similarity_csv(const SimilarityMatrix& s, const std::vector<std::string>& labels_t,
                           const std::vector<std::string>& labels_t1);
std::string report_json(const TransitionReport& report, const std::vector<std::string>& labels_t,
                        const std::vector<std::string>& labels_t1);
/// Flows |V_i ∩ V_j| > 0, sorted by source cluster size (desc), then flow
/// (desc), then source and target id.
std::string alluvial_csv(const TransitionReport& report, const std::vector<std::string>& labels_t,
                         const std::vector<std::string>& labels_t1);

void alluvial_export(const TransitionReport& report, const std::vector<std::string>& labels_t,
                     const std::vector<std::string>& labels_t1,
                     const std::filesystem::path& path);

}  // namespace techconv
