#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/breakcheck.hpp"
#include "techconv/community.hpp"
#include "techconv/corpus.hpp"
#include "techconv/lexicon.hpp"
#include "techconv/stats.hpp"
#include "techconv/transition.hpp"

namespace techconv {

/// Settings shared by all subcommands. Precedence: flag > config file >
/// these defaults.
struct PipelineConfig {
  std::filesystem::path lexicon;  // empty: no lexicon, tags only
  Field field = Field::both;
  PairMode pairs = PairMode::all;
  std::size_t top_n = 100;
  Measure measure = Measure::overlap_target;
  double tau = 0.1;
  double resolution = 1.0;
  bool size_weighted = false;
  std::filesystem::path out_dir = "out";

  void validate() const;
  AnalysisOptions analysis() const;
};

/// Applies a flat key/value file on top of `config`. JSON objects and
/// `key = value` lines (with # comments) are both accepted. Keys: lexicon,
/// field, pairs, top_n, measure, tau, resolution, weighting, out.
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);
void apply_config_text(PipelineConfig& config, std::string_view text);

TermLexicon load_lexicon_or_empty(const std::filesystem::path& path);

/// Cluster labels as "<id>:<suggested label>", indexed by cluster id.
std::vector<std::string> display_labels(const std::vector<ClusterLabel>& labels);

struct ClusterResult {
  WindowClustering clustering;
  std::vector<ClusterLabel> labels;
};

ClusterResult run_cluster(const Corpus& corpus, const TermLexicon& lexicon,
                          const TimeWindow& window, const PipelineConfig& config);
void write_cluster_outputs(const ClusterResult& result, const std::filesystem::path& dir,
                           const std::string& stem);

struct CompareResult {
  ClusterResult at_t;
  ClusterResult at_t1;
  TransitionReport report;
};

CompareResult run_compare(const Corpus& corpus, const TermLexicon& lexicon,
                          const TimeWindow& window_t, const TimeWindow& window_t1,
                          const PipelineConfig& config);
/// graph_t.{graphml,json}, graph_t1.*, partition_t.json, partition_t1.json,
/// labels_t.json, labels_t1.json, similarity.csv, report.json, alluvial.csv
void write_compare_outputs(const CompareResult& result, const std::filesystem::path& dir);
std::string event_summary(const CompareResult& result);

/// One window per non-empty line: "START:END [label]"; '#' starts a comment.
std::vector<TimeWindow> parse_window_list(std::string_view text);

struct SeriesResult {
  IndexSeries series;
  stats::BreakTestResult chow_ci;
  stats::BreakTestResult chow_ni;
};

/// Chow regressors are {1, point index}; breakpoint indexes the series
/// points and must lie strictly inside it.
SeriesResult run_series(const Corpus& corpus, const TermLexicon& lexicon,
                        const std::vector<TimeWindow>& windows, std::size_t breakpoint,
                        const PipelineConfig& config);
void write_series_outputs(const SeriesResult& result, const std::filesystem::path& dir);

struct CorrelationRow {
  std::string term;
  std::string source_a;
  std::string source_b;
  std::optional<double> r;
  std::string error;  // set when r is undefined
};

struct TrendResult {
  std::vector<TrendTable> tables;
  std::vector<CorrelationRow> correlations;
};

/// Needs at least 2 sources. A term whose correlation is undefined for a
/// source pair gets an error row; other terms and pairs are still reported.
TrendResult run_trend(const std::vector<Corpus>& corpora, const TermLexicon& lexicon,
                      const std::vector<std::string>& terms, Period period,
                      const PipelineConfig& config);
void write_trend_outputs(const TrendResult& result, const std::filesystem::path& dir);
std::string correlation_csv(const std::vector<CorrelationRow>& rows);

}  // namespace techconv
