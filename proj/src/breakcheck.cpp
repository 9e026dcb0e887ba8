#include "techconv/breakcheck.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("breakcheck", message); }

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

// Periods as integers: year, or year * 4 + quarter index.
long period_ordinal(const Date& d, Period period) {
  return period == Period::year ? d.year : static_cast<long>(d.year) * 4 + (d.month - 1) / 3;
}

std::string period_name(long ordinal, Period period) {
  if (period == Period::year) return std::to_string(ordinal);
  const long year = ordinal >= 0 ? ordinal / 4 : (ordinal - 3) / 4;
  return std::to_string(year) + "Q" + std::to_string(ordinal - year * 4 + 1);
}

}  // namespace

WindowClustering cluster_window(const Corpus& corpus, const TermLexicon& lexicon,
                                const TimeWindow& window, const AnalysisOptions& options) {
  if (options.top_n == 0) fail("top_n must be at least 1");
  const Corpus in_window = window_filter(corpus, window);
  CoGraph graph = top_n_filter(build_cooccurrence(in_window, lexicon, options.build), options.top_n);
  if (graph.edge_count() == 0)
    throw InputError("pipeline", "window '" + window.label + "' (" + window.start.to_string() +
                                     ":" + window.end.to_string() + ") yields an edgeless graph (" +
                                     std::to_string(in_window.size()) + " documents)");
  Partition partition = louvain(graph, LouvainOptions{options.resolution});
  return WindowClustering{window, std::move(graph), std::move(partition)};
}

IndexSeries index_series(const Corpus& corpus, const TermLexicon& lexicon,
                         const std::vector<TimeWindow>& windows, const AnalysisOptions& options) {
  if (windows.size() < 3)
    fail("index series needs at least 3 windows, got " + std::to_string(windows.size()));
  for (std::size_t k = 1; k < windows.size(); ++k)
    if (!(windows[k - 1].start < windows[k].start))
      fail("windows must be strictly increasing by start date ('" + windows[k].label + "')");

  std::vector<WindowClustering> clustered;
  clustered.reserve(windows.size());
  for (const auto& w : windows) clustered.push_back(cluster_window(corpus, lexicon, w, options));

  IndexSeries series;
  series.description = std::string(options.size_weighted ? "size-weighted" : "unweighted") +
                       " mean CI/NI over t+1 clusters";
  for (std::size_t k = 1; k < clustered.size(); ++k) {
    const auto report = make_report(clustered[k - 1].partition, clustered[k].partition,
                                     Measure::overlap_target, options.tau);
    const auto& s = report.similarity;
    double ci = 0.0;
    double weight = 0.0;
    for (std::size_t j = 0; j < s.cols; ++j) {
      const double w = options.size_weighted ? static_cast<double>(s.col_sizes[j]) : 1.0;
      ci += w * report.indices.ci[j];
      weight += w;
    }
    ci /= weight;
    series.points.push_back(IndexPoint{windows[k], ci, 1.0 - ci});
  }
  return series;
}

std::string series_csv(const IndexSeries& series) {
  std::string out = "window_start,window_end,mean_ci,mean_ni\n";
  for (const auto& p : series.points)
    out += p.window.start.to_string() + "," + p.window.end.to_string() + "," + fixed9(p.mean_ci) +
           "," + fixed9(p.mean_ni) + "\n";
  return out;
}

std::string break_test_json(const stats::BreakTestResult& r, const std::string& series_name) {
  nlohmann::json doc;
  doc["series"] = series_name;
  if (std::isinf(r.f_statistic))
    doc["f_statistic"] = "inf";
  else
    doc["f_statistic"] = r.f_statistic;
  doc["p_value"] = r.p_value;
  doc["p_value_display"] = stats::format_p_value(r.p_value);
  doc["breakpoint_index"] = r.breakpoint_index;
  doc["k"] = r.k;
  doc["n1"] = r.n1;
  doc["n2"] = r.n2;
  doc["ssr_pooled"] = r.ssr_pooled;
  doc["ssr_segments"] = r.ssr_segments;
  return doc.dump(2) + "\n";
}

Period parse_period(std::string_view s) {
  if (s == "year") return Period::year;
  if (s == "quarter") return Period::quarter;
  fail("unknown period '" + std::string(s) + "' (expected year|quarter)");
}

std::string period_key(const Date& d, Period period) {
  return period_name(period_ordinal(d, period), period);
}

TrendTable term_trend(const std::vector<Corpus>& corpora, const TermLexicon& lexicon,
                      const std::string& term, Period period, Field field) {
  if (!lexicon.contains(term)) fail("unknown term '" + term + "' (not in lexicon)");
  long lo = std::numeric_limits<long>::max();
  long hi = std::numeric_limits<long>::min();
  for (const auto& c : corpora)
    for (const auto& d : c.documents) {
      lo = std::min(lo, period_ordinal(d.date, period));
      hi = std::max(hi, period_ordinal(d.date, period));
    }
  TrendTable table;
  table.term = term;
  if (lo > hi) {
    for (const auto& c : corpora) table.sources.push_back(c.source_label);
    table.counts.assign(corpora.size(), {});
    return table;
  }
  for (long p = lo; p <= hi; ++p) table.periods.push_back(period_name(p, period));
  for (const auto& c : corpora) {
    table.sources.push_back(c.source_label);
    std::vector<double> counts(table.periods.size(), 0.0);
    for (const auto& d : c.documents)
      if (document_items(d, lexicon, field).count(term))
        counts[static_cast<std::size_t>(period_ordinal(d.date, period) - lo)] += 1.0;
    table.counts.push_back(std::move(counts));
  }
  return table;
}

std::string trend_csv(const std::vector<TrendTable>& tables) {
  std::string out = "term,period,source,count\n";
  for (const auto& t : tables)
    for (std::size_t s = 0; s < t.sources.size(); ++s)
      for (std::size_t p = 0; p < t.periods.size(); ++p)
        out += csv_field(t.term) + "," + t.periods[p] + "," + csv_field(t.sources[s]) + "," +
               std::to_string(static_cast<long long>(t.counts[s][p])) + "\n";
  return out;
}

}  // namespace techconv
