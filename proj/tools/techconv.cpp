// techconv: co-occurrence clustering and cluster-transition analysis.
//
//   techconv cluster --corpus C --window START:END [--lexicon L] --out DIR
//   techconv compare --corpus C --window-t A:B --window-t1 C:D --out DIR
//   techconv series  --corpus C --windows FILE --breakpoint K --out DIR
//   techconv trend   --source LABEL=PATH ... --terms FILE --lexicon L --out DIR
//   techconv synth   --spec SPEC.json --out DIR [--seed N] [--with-text]
//
// Exit codes: 0 ok, 1 internal error, 2 usage or input error.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"
#include "techconv/kernels.hpp"
#include "techconv/pipeline.hpp"
#include "techconv/synth.hpp"

namespace {

using namespace techconv;

struct Flags {
  std::string corpus;
  std::string lexicon;
  std::string config;
  std::string out;
  std::string field;
  std::string pairs;
  std::string measure;
  std::string weighting;
  std::size_t top_n = 0;
  double tau = 0.0;
  double resolution = 0.0;
};

void add_common(CLI::App* cmd, Flags& f, bool analysis) {
  cmd->add_option("--config", f.config, "Flat JSON or key = value config file");
  cmd->add_option("--out", f.out, "Output directory");
  if (!analysis) return;
  cmd->add_option("--corpus", f.corpus, "Corpus file (.jsonl or .csv)")->required();
  cmd->add_option("--lexicon", f.lexicon, "Lexicon JSON file");
  cmd->add_option("--field", f.field, "Node sources: text|tags|both");
  cmd->add_option("--pairs", f.pairs, "Counted pairs: all|tech-tag");
  cmd->add_option("--top-n", f.top_n, "Nodes kept per window (default 100)");
  cmd->add_option("--measure", f.measure, "overlap_target|jaccard");
  cmd->add_option("--tau", f.tau, "Event threshold in (0, 1) (default 0.1)");
  cmd->add_option("--resolution", f.resolution, "Modularity resolution (default 1.0)");
  cmd->add_option("--weighting", f.weighting, "Series mean: unweighted|size");
}

PipelineConfig resolve(const CLI::App* cmd, const Flags& f) {
  PipelineConfig config;
  if (!f.config.empty()) apply_config_file(config, f.config);
  auto given = [&](const char* name) {
    const auto* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--lexicon")) config.lexicon = f.lexicon;
  if (given("--field")) config.field = parse_field(f.field);
  if (given("--pairs")) config.pairs = parse_pair_mode(f.pairs);
  if (given("--top-n")) config.top_n = f.top_n;
  if (given("--measure")) config.measure = parse_measure(f.measure);
  if (given("--tau")) config.tau = f.tau;
  if (given("--resolution")) config.resolution = f.resolution;
  if (given("--weighting")) {
    if (f.weighting != "unweighted" && f.weighting != "size")
      throw InputError("cli", "--weighting must be unweighted|size");
    config.size_weighted = f.weighting == "size";
  }
  if (given("--out")) config.out_dir = f.out;
  config.validate();
  return config;
}

std::pair<std::string, std::string> split_source(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InputError("cli", "--source expects LABEL=PATH, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::vector<std::string> read_terms(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    terms.push_back(line);
  }
  return terms;
}

int run(int argc, char** argv) {
  CLI::App app{"Technology convergence analysis over co-occurrence networks"};
  app.require_subcommand(1);
  bool show_isa = false;
  app.add_flag("--show-isa", show_isa, "Print the selected kernel ISA to stderr");

  Flags f;
  std::string window, window_t, window_t1, windows_file, spec_path, terms_file, period = "year";
  std::vector<std::string> sources;
  std::size_t breakpoint = 0;
  std::uint64_t seed = 0;
  bool with_text = false;

  auto* cluster = app.add_subcommand("cluster", "Build and cluster one window");
  add_common(cluster, f, true);
  cluster->add_option("--window", window, "START:END")->required();

  auto* compare = app.add_subcommand("compare", "Compare clusterings of two windows");
  add_common(compare, f, true);
  compare->add_option("--window-t", window_t, "Earlier window START:END")->required();
  compare->add_option("--window-t1", window_t1, "Later window START:END")->required();

  auto* series = app.add_subcommand("series", "CI/NI series over windows plus Chow test");
  add_common(series, f, true);
  series->add_option("--windows", windows_file, "Window list file")->required();
  series->add_option("--breakpoint", breakpoint, "Series index where the second segment starts")
      ->required();

  auto* trend = app.add_subcommand("trend", "Per-period term counts and correlations");
  add_common(trend, f, false);
  trend->add_option("--source", sources, "LABEL=PATH, repeat per source")->required();
  trend->add_option("--terms", terms_file, "File with one term per line")->required();
  trend->add_option("--lexicon", f.lexicon, "Lexicon JSON file")->required();
  trend->add_option("--field", f.field, "text|tags|both");
  trend->add_option("--period", period, "year|quarter");

  auto* synth = app.add_subcommand("synth", "Generate a planted synthetic corpus");
  add_common(synth, f, false);
  synth->add_option("--spec", spec_path, "Plant spec JSON")->required();
  synth->add_option("--seed", seed, "Override the spec's seed");
  synth->add_flag("--with-text", with_text, "Put terms into the text instead of tags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (show_isa) std::cerr << "kernels: " << kernels::isa_name(kernels::active().isa) << "\n";

  if (*cluster) {
    const auto config = resolve(cluster, f);
    const auto corpus = load_corpus(f.corpus);
    const auto lexicon = load_lexicon_or_empty(config.lexicon);
    const auto result = run_cluster(corpus, lexicon, parse_window(window), config);
    write_cluster_outputs(result, config.out_dir, "window");
    std::cout << result.clustering.graph.node_count() << " nodes, "
              << result.clustering.partition.cluster_count << " clusters, Q = "
              << result.clustering.partition.modularity << "\n";
    for (const auto& l : result.labels) {
      std::cout << l.cluster << ":";
      for (const auto& t : l.top_tags) std::cout << " " << t << ";";
      std::cout << "\n";
    }
  } else if (*compare) {
    const auto config = resolve(compare, f);
    const auto corpus = load_corpus(f.corpus);
    const auto lexicon = load_lexicon_or_empty(config.lexicon);
    const auto result = run_compare(corpus, lexicon, parse_window(window_t, "t"),
                                    parse_window(window_t1, "t+1"), config);
    write_compare_outputs(result, config.out_dir);
    std::cout << event_summary(result);
  } else if (*series) {
    const auto config = resolve(series, f);
    const auto windows = parse_window_list(read_file(windows_file));
    if (windows.size() < 3) throw InputError("cli", "series needs at least 3 windows");
    if (breakpoint == 0 || breakpoint + 1 >= windows.size())
      throw InputError("cli", "--breakpoint must lie strictly inside the series (1.." +
                                  std::to_string(windows.size() - 2) + ")");
    const auto corpus = load_corpus(f.corpus);
    const auto lexicon = load_lexicon_or_empty(config.lexicon);
    const auto result = run_series(corpus, lexicon, windows, breakpoint, config);
    write_series_outputs(result, config.out_dir);
    std::cout << series_csv(result.series) << "\n";
    for (const auto* r : {&result.chow_ci, &result.chow_ni}) {
      std::cout << (r == &result.chow_ci ? "CI" : "NI") << ": Chow F = " << r->f_statistic
                << ", p = " << stats::format_p_value(r->p_value) << "\n";
    }
  } else if (*trend) {
    const auto config = resolve(trend, f);
    std::vector<Corpus> corpora;
    for (const auto& s : sources) {
      const auto [label, path] = split_source(s);
      auto c = load_corpus(path);
      c.source_label = label;
      corpora.push_back(std::move(c));
    }
    const auto lexicon = compile_lexicon(config.lexicon);
    const auto result =
        run_trend(corpora, lexicon, read_terms(terms_file), parse_period(period), config);
    write_trend_outputs(result, config.out_dir);
    std::cout << correlation_csv(result.correlations);
  } else if (*synth) {
    auto spec = synth::load_plant_spec(spec_path);
    if (synth->get_option("--seed")->count() > 0) spec.seed = seed;
    if (with_text) spec.with_text = true;
    PipelineConfig config;
    if (!f.config.empty()) apply_config_file(config, f.config);
    if (!f.out.empty()) config.out_dir = f.out;
    const auto out = synth::generate_corpus(spec);
    std::filesystem::create_directories(config.out_dir);
    save_corpus(out.corpus, config.out_dir / "corpus.jsonl", CorpusFormat::jsonl);
    write_file_atomic(config.out_dir / "ground_truth.json", synth::ground_truth_json(out.truth));
    write_file_atomic(config.out_dir / "lexicon.json", synth::lexicon_json(out.truth));
    std::cout << out.corpus.size() << " documents written to " << config.out_dir.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const techconv::InputError& e) {
    std::cerr << "error[" << e.module() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}
