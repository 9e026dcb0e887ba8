#pragma once

#include <string>
#include <utility>
#include <vector>

#include "techconv/cograph.hpp"
#include "techconv/community.hpp"
#include "techconv/corpus.hpp"
#include "techconv/lexicon.hpp"
#include "techconv/stats.hpp"
#include "techconv/transition.hpp"

namespace techconv {

/// Per-window analysis settings shared by the pairwise comparison and the
/// index series.
struct AnalysisOptions {
  BuildOptions build;
  std::size_t top_n = 100;
  double tau = 0.1;
  double resolution = 1.0;
  bool size_weighted = false;  // mean CI/NI weighted by t+1 cluster size
};

struct WindowClustering {
  TimeWindow window;
  CoGraph graph;  // after the top-n cut
  Partition partition;
};

/// Filter, build, cut, cluster. An edgeless graph is an InputError naming
/// the window.
WindowClustering cluster_window(const Corpus& corpus, const TermLexicon& lexicon,
                                const TimeWindow& window, const AnalysisOptions& options);

struct IndexPoint {
  TimeWindow window;
  double mean_ci = 0.0;
  double mean_ni = 0.0;
};

struct IndexSeries {
  std::vector<IndexPoint> points;
  std::string description;
};

/// One point per consecutive window pair, labelled with the later window.
IndexSeries index_series(const Corpus& corpus, const TermLexicon& lexicon,
                         const std::vector<TimeWindow>& windows, const AnalysisOptions& options);

std::string series_csv(const IndexSeries& series);
std::string break_test_json(const stats::BreakTestResult& result, const std::string& series_name);

enum class Period { year, quarter };

Period parse_period(std::string_view s);
std::string period_key(const Date& d, Period period);

struct TrendTable {
  std::string term;
  std::vector<std::string> periods;   // contiguous, oldest first
  std::vector<std::string> sources;
  std::vector<std::vector<double>> counts;  // [source][period]
};

/// Documents per period that contain `term` among their items. Periods span
/// the earliest to the latest document date over all sources, with zeros
/// filled in.
TrendTable term_trend(const std::vector<Corpus>& corpora, const TermLexicon& lexicon,
                      const std::string& term, Period period, Field field = Field::both);

std::string trend_csv(const std::vector<TrendTable>& tables);

}  // namespace techconv
