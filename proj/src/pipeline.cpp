#include "techconv/pipeline.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("cli", message); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    fail("config key '" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

void apply_key(PipelineConfig& config, const std::string& key, const std::string& value) {
  if (key == "lexicon") config.lexicon = value;
  else if (key == "field") config.field = parse_field(value);
  else if (key == "pairs") config.pairs = parse_pair_mode(value);
  else if (key == "top_n") config.top_n = to_size(key, value);
  else if (key == "measure") config.measure = parse_measure(value);
  else if (key == "tau") config.tau = to_double(key, value);
  else if (key == "resolution") config.resolution = to_double(key, value);
  else if (key == "weighting") {
    if (value != "unweighted" && value != "size") fail("weighting must be unweighted|size");
    config.size_weighted = value == "size";
  } else if (key == "out") config.out_dir = value;
  else fail("unknown config key '" + key + "'");
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string labels_json(const std::vector<ClusterLabel>& labels) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& l : labels)
    doc.push_back({{"cluster", l.cluster}, {"suggested_label", l.suggested_label},
                   {"top_tags", l.top_tags}});
  return doc.dump(2) + "\n";
}

}  // namespace

void PipelineConfig::validate() const {
  if (top_n < 1) fail("top_n must be at least 1");
  if (!(tau > 0.0 && tau < 1.0)) fail("tau must lie in (0, 1)");
  if (!(resolution > 0.0)) fail("resolution must be positive");
}

AnalysisOptions PipelineConfig::analysis() const {
  AnalysisOptions a;
  a.build = BuildOptions{field, pairs};
  a.top_n = top_n;
  a.tau = tau;
  a.resolution = resolution;
  a.size_weighted = size_weighted;
  return a;
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("config file is not valid JSON: ") + e.what());
    }
    for (const auto& [key, v] : doc.items()) {
      if (v.is_string()) apply_key(config, key, v.get<std::string>());
      else if (v.is_number_integer()) apply_key(config, key, std::to_string(v.get<long long>()));
      else if (v.is_number()) apply_key(config, key, fmt("%.17g", v.get<double>()));
      else fail("config key '" + key + "' must be a string or number");
    }
    return;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("config line " + std::to_string(line_no) + " is not 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    apply_key(config, key, value);
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  apply_config_text(config, read_file(path));
}

TermLexicon load_lexicon_or_empty(const std::filesystem::path& path) {
  return path.empty() ? TermLexicon{} : compile_lexicon(path);
}

std::vector<std::string> display_labels(const std::vector<ClusterLabel>& labels) {
  std::vector<std::string> out;
  for (const auto& l : labels) out.push_back(std::to_string(l.cluster) + ":" + l.suggested_label);
  return out;
}

ClusterResult run_cluster(const Corpus& corpus, const TermLexicon& lexicon,
                          const TimeWindow& window, const PipelineConfig& config) {
  config.validate();
  ClusterResult r{cluster_window(corpus, lexicon, window, config.analysis()), {}};
  r.labels = suggest_labels(r.clustering.graph, r.clustering.partition);
  return r;
}

void write_cluster_outputs(const ClusterResult& result, const std::filesystem::path& dir,
                           const std::string& stem) {
  std::filesystem::create_directories(dir);
  const auto& c = result.clustering;
  export_graphml(c.graph, dir / ("graph_" + stem + ".graphml"), &c.partition.assignment);
  export_graph_json(c.graph, dir / ("graph_" + stem + ".json"), &c.partition.assignment);
  save_partition(c.partition, dir / ("partition_" + stem + ".json"));
  write_file_atomic(dir / ("labels_" + stem + ".json"), labels_json(result.labels));
}

CompareResult run_compare(const Corpus& corpus, const TermLexicon& lexicon,
                          const TimeWindow& window_t, const TimeWindow& window_t1,
                          const PipelineConfig& config) {
  CompareResult r;
  r.at_t = run_cluster(corpus, lexicon, window_t, config);
  r.at_t1 = run_cluster(corpus, lexicon, window_t1, config);
  r.report = make_report(r.at_t.clustering.partition, r.at_t1.clustering.partition,
                         config.measure, config.tau);
  return r;
}

void write_compare_outputs(const CompareResult& r, const std::filesystem::path& dir) {
  write_cluster_outputs(r.at_t, dir, "t");
  write_cluster_outputs(r.at_t1, dir, "t1");
  const auto lt = display_labels(r.at_t.labels);
  const auto lt1 = display_labels(r.at_t1.labels);
  write_file_atomic(dir / "similarity.csv", similarity_csv(r.report.similarity, lt, lt1));
  write_file_atomic(dir / "report.json", report_json(r.report, lt, lt1));
  alluvial_export(r.report, lt, lt1, dir / "alluvial.csv");
}

std::string event_summary(const CompareResult& r) {
  const auto lt = display_labels(r.at_t.labels);
  const auto lt1 = display_labels(r.at_t1.labels);
  std::ostringstream out;
  out << "window t  : " << r.at_t.clustering.window.label << "  ("
      << r.at_t.clustering.graph.node_count() << " nodes, "
      << r.at_t.clustering.partition.cluster_count << " clusters, Q = "
      << fmt("%.4f", r.at_t.clustering.partition.modularity) << ")\n";
  out << "window t+1: " << r.at_t1.clustering.window.label << "  ("
      << r.at_t1.clustering.graph.node_count() << " nodes, "
      << r.at_t1.clustering.partition.cluster_count << " clusters, Q = "
      << fmt("%.4f", r.at_t1.clustering.partition.modularity) << ")\n\n";
  out << "event    t clusters                     t+1 clusters                   similarity\n";
  for (const auto& e : r.report.events) {
    std::string rows, cols, vals;
    for (int i : e.rows) rows += (rows.empty() ? "" : ", ") + lt[static_cast<std::size_t>(i)];
    for (int j : e.cols) cols += (cols.empty() ? "" : ", ") + lt1[static_cast<std::size_t>(j)];
    for (double v : e.values) vals += (vals.empty() ? "" : ", ") + fmt("%.2f", v);
    char line[512];
    std::snprintf(line, sizeof line, "%-8s %-30s %-30s %s\n",
                  std::string(to_string(e.kind)).c_str(), rows.empty() ? "-" : rows.c_str(),
                  cols.empty() ? "-" : cols.c_str(), vals.empty() ? "-" : vals.c_str());
    out << line;
  }
  if (!r.report.indices.ci.empty()) {
    out << "\ncluster (t+1)                   CI      NI\n";
    for (std::size_t j = 0; j < lt1.size(); ++j) {
      char line[256];
      std::snprintf(line, sizeof line, "%-30s %6.3f  %6.3f\n", lt1[j].c_str(),
                    r.report.indices.ci[j], r.report.indices.ni[j]);
      out << line;
    }
  }
  return out.str();
}

std::vector<TimeWindow> parse_window_list(std::string_view text) {
  std::vector<TimeWindow> windows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto space = body.find_first_of(" \t");
    const std::string spec = body.substr(0, space);
    const std::string label = space == std::string::npos ? std::string{} : trim(body.substr(space));
    try {
      windows.push_back(parse_window(spec, label));
    } catch (const InputError& e) {
      fail("window list line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return windows;
}

SeriesResult run_series(const Corpus& corpus, const TermLexicon& lexicon,
                        const std::vector<TimeWindow>& windows, std::size_t breakpoint,
                        const PipelineConfig& config) {
  config.validate();
  if (windows.size() < 3) fail("series needs at least 3 windows");
  const std::size_t points = windows.size() - 1;
  if (breakpoint == 0 || breakpoint >= points)
    fail("breakpoint must lie strictly inside the series (1.." + std::to_string(points - 1) +
         "), got " + std::to_string(breakpoint));
  SeriesResult r;
  r.series = index_series(corpus, lexicon, windows, config.analysis());
  std::vector<double> x, ci, ni;
  for (std::size_t i = 0; i < r.series.points.size(); ++i) {
    x.push_back(static_cast<double>(i));
    ci.push_back(r.series.points[i].mean_ci);
    ni.push_back(r.series.points[i].mean_ni);
  }
  r.chow_ci = stats::chow_test(x, ci, breakpoint);
  r.chow_ni = stats::chow_test(x, ni, breakpoint);
  return r;
}

void write_series_outputs(const SeriesResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "series.csv", series_csv(r.series));
  write_file_atomic(dir / "chow_ci.json", break_test_json(r.chow_ci, "mean_ci"));
  write_file_atomic(dir / "chow_ni.json", break_test_json(r.chow_ni, "mean_ni"));
}

TrendResult run_trend(const std::vector<Corpus>& corpora, const TermLexicon& lexicon,
                      const std::vector<std::string>& terms, Period period,
                      const PipelineConfig& config) {
  if (corpora.size() < 2) fail("trend comparison needs at least 2 sources");
  TrendResult r;
  for (const auto& term : terms) {
    auto table = term_trend(corpora, lexicon, term, period, config.field);
    for (std::size_t a = 0; a < table.sources.size(); ++a) {
      for (std::size_t b = a + 1; b < table.sources.size(); ++b) {
        CorrelationRow row{term, table.sources[a], table.sources[b], std::nullopt, {}};
        try {
          row.r = stats::pearson(table.counts[a], table.counts[b]);
        } catch (const InputError& e) {
          row.error = e.what();
        }
        r.correlations.push_back(std::move(row));
      }
    }
    r.tables.push_back(std::move(table));
  }
  return r;
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "term,source_a,source_b,r,error\n";
  for (const auto& row : rows)
    out += csv_field(row.term) + "," + csv_field(row.source_a) + "," + csv_field(row.source_b) +
           "," + (row.r ? fmt("%.6f", *row.r) : std::string{}) + "," + csv_field(row.error) + "\n";
  return out;
}

void write_trend_outputs(const TrendResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "trend.csv", trend_csv(r.tables));
  write_file_atomic(dir / "correlation.csv", correlation_csv(r.correlations));
}

}  // namespace techconv
