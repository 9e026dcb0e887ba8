#include "techconv/transition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"
#include "techconv/kernels.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("transition", message); }

using Bitset = std::vector<std::uint64_t>;

std::vector<Bitset> cluster_bitsets(const Partition& p, const std::vector<std::string>& universe) {
  const std::size_t words = (universe.size() + 63) / 64;
  std::vector<Bitset> sets(static_cast<std::size_t>(p.cluster_count), Bitset(words, 0));
  for (const auto& [name, c] : p.assignment) {
    if (c < 0 || c >= p.cluster_count) fail("cluster id " + std::to_string(c) + " out of range");
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(universe.begin(), universe.end(), name) - universe.begin());
    sets[static_cast<std::size_t>(c)][pos / 64] |= std::uint64_t{1} << (pos % 64);
  }
  return sets;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

const std::string& label_or_throw(const std::vector<std::string>& labels, std::size_t i,
                                  const char* side) {
  if (i >= labels.size())
    fail(std::string("missing label for ") + side + " cluster " + std::to_string(i));
  return labels[i];
}

}  // namespace

Measure parse_measure(std::string_view s) {
  if (s == "overlap_target") return Measure::overlap_target;
  if (s == "jaccard") return Measure::jaccard;
  fail("unknown similarity measure '" + std::string(s) + "' (expected overlap_target|jaccard)");
}

std::string_view to_string(Measure m) {
  return m == Measure::overlap_target ? "overlap_target" : "jaccard";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::birth: return "birth";
    case EventKind::death: return "death";
    case EventKind::merge: return "merge";
    case EventKind::split: return "split";
    case EventKind::persist: return "persist";
  }
  return "persist";
}

SimilarityMatrix similarity_matrix(const Partition& at_t, const Partition& at_t1,
                                   Measure measure) {
  std::vector<std::string> universe;
  universe.reserve(at_t.assignment.size() + at_t1.assignment.size());
  for (const auto& [name, c] : at_t.assignment) universe.push_back(name);
  for (const auto& [name, c] : at_t1.assignment) universe.push_back(name);
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  const auto rows_sets = cluster_bitsets(at_t, universe);
  const auto cols_sets = cluster_bitsets(at_t1, universe);

  SimilarityMatrix s;
  s.rows = rows_sets.size();
  s.cols = cols_sets.size();
  s.measure = measure;
  for (std::size_t i = 0; i < s.rows; ++i) {
    s.row_sizes.push_back(static_cast<std::int64_t>(kernels::popcount(rows_sets[i])));
    if (s.row_sizes.back() == 0) fail("cluster " + std::to_string(i) + " at t is empty");
  }
  for (std::size_t j = 0; j < s.cols; ++j) {
    s.col_sizes.push_back(static_cast<std::int64_t>(kernels::popcount(cols_sets[j])));
    if (s.col_sizes.back() == 0) fail("cluster " + std::to_string(j) + " at t+1 is empty");
  }
  s.values.assign(s.rows * s.cols, 0.0);
  s.overlap.assign(s.rows * s.cols, 0);
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      const auto shared =
          static_cast<std::int64_t>(kernels::and_popcount(rows_sets[i], cols_sets[j]));
      const auto denom = measure == Measure::overlap_target
                             ? s.col_sizes[j]
                             : s.row_sizes[i] + s.col_sizes[j] - shared;
      s.overlap[i * s.cols + j] = shared;
      s.values[i * s.cols + j] = static_cast<double>(shared) / static_cast<double>(denom);
    }
  }
  return s;
}

BiAdjacency biadjacency(const SimilarityMatrix& s) {
  BiAdjacency d;
  d.size = s.rows + s.cols;
  d.values.assign(d.size * d.size, 0.0);
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      d.values[i * d.size + (s.rows + j)] = s.at(i, j);
      d.values[(s.rows + j) * d.size + i] = s.at(i, j);
    }
  }
  return d;
}

ConvergenceIndices indices(const SimilarityMatrix& s) {
  if (s.measure != Measure::overlap_target) fail("indices defined only for overlap_target");
  ConvergenceIndices out;
  for (std::size_t j = 0; j < s.cols; ++j) {
    double ci = 0.0;
    for (std::size_t i = 0; i < s.rows; ++i) ci += s.at(i, j);
    if (std::abs(ci) < 1e-12) ci = 0.0;
    if (std::abs(ci - 1.0) < 1e-12) ci = 1.0;
    ci = std::clamp(ci, 0.0, 1.0);
    out.ci.push_back(ci);
    out.ni.push_back(1.0 - ci);
  }
  return out;
}

std::vector<Event> classify_events(const SimilarityMatrix& s, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) fail("threshold tau must lie in (0, 1)");
  std::vector<Event> deaths, births, merges, splits, persists;
  std::vector<bool> merged(s.cols, false), split(s.rows, false);

  for (std::size_t i = 0; i < s.rows; ++i) {
    Event e{EventKind::split, {static_cast<int>(i)}, {}, {}};
    bool any = false;
    for (std::size_t j = 0; j < s.cols; ++j) {
      any = any || s.at(i, j) != 0.0;
      if (s.at(i, j) >= tau) {
        e.cols.push_back(static_cast<int>(j));
        e.values.push_back(s.at(i, j));
      }
    }
    if (!any) deaths.push_back(Event{EventKind::death, {static_cast<int>(i)}, {}, {}});
    if (e.cols.size() >= 2) {
      split[i] = true;
      splits.push_back(std::move(e));
    }
  }
  for (std::size_t j = 0; j < s.cols; ++j) {
    Event e{EventKind::merge, {}, {static_cast<int>(j)}, {}};
    bool any = false;
    for (std::size_t i = 0; i < s.rows; ++i) {
      any = any || s.at(i, j) != 0.0;
      if (s.at(i, j) >= tau) {
        e.rows.push_back(static_cast<int>(i));
        e.values.push_back(s.at(i, j));
      }
    }
    if (!any) births.push_back(Event{EventKind::birth, {}, {static_cast<int>(j)}, {}});
    if (e.rows.size() >= 2) {
      merged[j] = true;
      merges.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      if (s.at(i, j) >= tau && !split[i] && !merged[j])
        persists.push_back(
            Event{EventKind::persist, {static_cast<int>(i)}, {static_cast<int>(j)}, {s.at(i, j)}});

  std::vector<Event> out;
  for (auto* group : {&deaths, &births, &merges, &splits, &persists})
    out.insert(out.end(), group->begin(), group->end());
  return out;
}

TransitionReport make_report(const Partition& at_t, const Partition& at_t1, Measure measure,
                             double tau) {
  TransitionReport r;
  r.similarity = similarity_matrix(at_t, at_t1, measure);
  if (measure == Measure::overlap_target) r.indices = indices(r.similarity);
  r.events = classify_events(r.similarity, tau);
  r.tau = tau;
  return r;
}

std::string similarity_csv(const SimilarityMatrix& s, const std::vector<std::string>& labels_t,
                           const std::vector<std::string>& labels_t1) {
  std::string out = "cluster";
  for (std::size_t j = 0; j < s.cols; ++j) out += "," + csv_field(label_or_throw(labels_t1, j, "t+1"));
  out += "\n";
  for (std::size_t i = 0; i < s.rows; ++i) {
    out += csv_field(label_or_throw(labels_t, i, "t"));
    for (std::size_t j = 0; j < s.cols; ++j) out += "," + fixed6(s.at(i, j));
    out += "\n";
  }
  return out;
}

std::string report_json(const TransitionReport& report, const std::vector<std::string>& labels_t,
                        const std::vector<std::string>& labels_t1) {
  using nlohmann::json;
  const auto& s = report.similarity;
  json doc;
  doc["measure"] = std::string(to_string(s.measure));
  doc["tau"] = report.tau;
  doc["clusters_t"] = json::array();
  for (std::size_t i = 0; i < s.rows; ++i)
    doc["clusters_t"].push_back(
        {{"id", i}, {"label", label_or_throw(labels_t, i, "t")}, {"size", s.row_sizes[i]}});
  doc["clusters_t1"] = json::array();
  for (std::size_t j = 0; j < s.cols; ++j) {
    json c = {{"id", j}, {"label", label_or_throw(labels_t1, j, "t+1")}, {"size", s.col_sizes[j]}};
    if (!report.indices.ci.empty()) {
      c["ci"] = report.indices.ci[j];
      c["ni"] = report.indices.ni[j];
    }
    doc["clusters_t1"].push_back(std::move(c));
  }
  doc["similarity"] = json::array();
  for (std::size_t i = 0; i < s.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s.cols; ++j) row.push_back(s.at(i, j));
    doc["similarity"].push_back(std::move(row));
  }
  doc["events"] = json::array();
  for (const auto& e : report.events)
    doc["events"].push_back({{"kind", std::string(to_string(e.kind))},
                             {"rows", e.rows},
                             {"cols", e.cols},
                             {"values", e.values}});
  return doc.dump(2) + "\n";
}

std::string alluvial_csv(const TransitionReport& report, const std::vector<std::string>& labels_t,
                         const std::vector<std::string>& labels_t1) {
  const auto& s = report.similarity;
  struct Flow {
    std::size_t source, target;
    std::int64_t weight;
  };
  std::vector<Flow> flows;
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      if (s.shared(i, j) > 0) flows.push_back({i, j, s.shared(i, j)});
  std::sort(flows.begin(), flows.end(), [&](const Flow& a, const Flow& b) {
    if (s.row_sizes[a.source] != s.row_sizes[b.source])
      return s.row_sizes[a.source] > s.row_sizes[b.source];
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  std::string out = "source_cluster,target_cluster,flow_weight,source_label,target_label\n";
  for (const auto& f : flows)
    out += std::to_string(f.source) + "," + std::to_string(f.target) + "," +
           std::to_string(f.weight) + "," + csv_field(label_or_throw(labels_t, f.source, "t")) +
           "," + csv_field(label_or_throw(labels_t1, f.target, "t+1")) + "\n";
  return out;
}

void alluvial_export(const TransitionReport& report, const std::vector<std::string>& labels_t,
                     const std::vector<std::string>& labels_t1,
                     const std::filesystem::path& path) {
  write_file_atomic(path, alluvial_csv(report, labels_t, labels_t1));
}

}  // namespace techconv
