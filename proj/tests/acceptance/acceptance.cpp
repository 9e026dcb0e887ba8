// Acceptance runner: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "techconv/breakcheck.hpp"
#include "techconv/community.hpp"
#include "techconv/error.hpp"
#include "techconv/fileio.hpp"
#include "techconv/pipeline.hpp"
#include "techconv/stats.hpp"
#include "techconv/synth.hpp"
#include "techconv/transition.hpp"

using namespace techconv;
namespace fs = std::filesystem;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
  Outcome outcome = Outcome::pass;
  std::string detail;
};

Verdict pass(std::string detail) { return {Outcome::pass, std::move(detail)}; }
Verdict fail(std::string detail) { return {Outcome::fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> labels_of(const CoGraph& g, const ClusterMap& m) {
  std::vector<int> out;
  for (const auto& n : g.nodes()) out.push_back(m.at(n.name));
  return out;
}

ClusterMap map_of(const CoGraph& g, const std::vector<int>& labels) {
  ClusterMap m;
  for (std::size_t i = 0; i < labels.size(); ++i) m[g.nodes()[i].name] = labels[i];
  return m;
}

bool same_grouping(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return a.size() == b.size();
}

CoGraph from_edges(const std::vector<std::pair<std::string, std::string>>& list) {
  std::map<std::string, std::int64_t> df;
  std::vector<Edge> edges;
  for (const auto& [u, v] : list) {
    edges.push_back({u, v, 1});
    ++df[u];
    ++df[v];
  }
  std::vector<Node> nodes;
  for (const auto& [name, f] : df) nodes.push_back({name, NodeKind::tag, f});
  return CoGraph(nodes, edges);
}

// 1. Louvain against exhaustive search on small graphs.
Verdict modularity_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  int graphs = 0, below = 0, mismatched = 0;
  double worst_ratio = 1.0, worst_diff = 0.0;
  for (; graphs < 250; ++graphs) {
    const std::size_t n = 2 + rng() % 7;
    const auto g = oracle::random_connected_graph(rng, n, density(rng), 5);
    const auto d = oracle::dense(g);
    const double best = oracle::best_modularity(d);
    const auto p = louvain(g);
    const double q_oracle = oracle::modularity(d, labels_of(g, p.assignment));
    worst_diff = std::max(worst_diff, std::abs(q_oracle - p.modularity));
    if (std::abs(q_oracle - p.modularity) > 1e-12) ++mismatched;
    if (p.modularity < 0.9 * best - 1e-12) ++below;
    if (best > 1e-12) worst_ratio = std::min(worst_ratio, p.modularity / best);

    // the formula must also agree away from Louvain's output
    std::vector<int> random_labels(n);
    for (auto& l : random_labels) l = static_cast<int>(rng() % 3);
    const double qr = modularity(g, map_of(g, random_labels));
    worst_diff = std::max(worst_diff, std::abs(qr - oracle::modularity(d, random_labels)));
    if (std::abs(qr - oracle::modularity(d, random_labels)) > 1e-12) ++mismatched;
  }
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << graphs << " graphs, worst Q/Q* = " << worst_ratio << ", max |dQ| = " << worst_diff
      << ", " << secs << " s";
  if (below || mismatched || secs >= 60.0) return fail(msg.str());
  return pass(msg.str());
}

// 2. Canonical Louvain cases.
Verdict louvain_canonical() {
  std::vector<std::string> problems;
  const auto bridge = from_edges({{"a", "b"}, {"a", "c"}, {"b", "c"}, {"d", "e"}, {"d", "f"},
                                  {"e", "f"}, {"c", "d"}});
  if (!same_grouping(labels_of(bridge, louvain(bridge).assignment), {0, 0, 0, 1, 1, 1}))
    problems.push_back("bridged triangles");

  std::vector<std::pair<std::string, std::string>> k4;
  for (const char* p : {"p", "q"})
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) k4.emplace_back(p + std::to_string(i), p + std::to_string(j));
  const auto cliques = from_edges(k4);
  if (!same_grouping(labels_of(cliques, louvain(cliques).assignment), {0, 0, 0, 0, 1, 1, 1, 1}))
    problems.push_back("two K4");

  ClusterMap one;
  for (const auto& n : bridge.nodes()) one[n.name] = 0;
  if (modularity(bridge, one) != 0.0) problems.push_back("single cluster Q != 0");
  const auto edge = from_edges({{"a", "b"}});
  if (modularity(edge, {{"a", 0}, {"b", 1}}) != -0.5) problems.push_back("single edge Q != -0.5");

  if (!problems.empty()) {
    std::string s;
    for (const auto& p : problems) s += p + "; ";
    return fail(s);
  }
  return pass("bridged triangles, two K4, Q=0, Q=-0.5");
}

// 3. Transition algebra on random partition pairs.
Verdict transition_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(777);
  int bad = 0;
  const int pairs = 600;
  auto groups = [](const std::vector<std::vector<std::string>>& cl) {
    ClusterMap m;
    for (std::size_t c = 0; c < cl.size(); ++c)
      for (const auto& name : cl[c]) m[name] = static_cast<int>(c);
    return make_partition(m);
  };
  auto canon = [](const std::vector<Event>& events, const std::vector<int>& row_map,
                  const std::vector<int>& col_map) {
    std::multiset<std::pair<int, std::pair<std::set<int>, std::set<int>>>> out;
    for (const auto& e : events) {
      std::set<int> rs, cs;
      for (int v : e.rows) rs.insert(row_map[static_cast<std::size_t>(v)]);
      for (int v : e.cols) cs.insert(col_map[static_cast<std::size_t>(v)]);
      out.insert({static_cast<int>(e.kind), {rs, cs}});
    }
    return out;
  };
  for (int trial = 0; trial < pairs; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    auto random_clusters = [&](std::size_t offset) {
      const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 7);
      std::vector<std::vector<std::string>> cl(k);
      for (std::size_t i = 0; i < k; ++i) cl[i].push_back("n" + std::to_string(offset + i));
      for (std::size_t i = k; i < n; ++i)
        if (rng() % 4 != 0) cl[rng() % k].push_back("n" + std::to_string(offset + i));
      return cl;
    };
    const auto ct = random_clusters(0);
    const auto ct1 = random_clusters(rng() % 12);
    const double tau = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
    const auto r = make_report(groups(ct), groups(ct1), Measure::overlap_target, tau);
    const auto& s = r.similarity;
    bool ok = true;

    std::set<std::string> earlier;
    for (const auto& c : ct) earlier.insert(c.begin(), c.end());
    for (std::size_t j = 0; j < s.cols; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < s.rows; ++i) col += s.at(i, j);
      std::size_t present = 0;
      for (const auto& m : ct1[j]) present += earlier.count(m);
      ok &= col <= 1.0 + 1e-12;
      ok &= std::abs(col - static_cast<double>(present) / static_cast<double>(ct1[j].size())) <= 1e-12;
      ok &= std::abs(r.indices.ci[j] + r.indices.ni[j] - 1.0) <= 1e-12;
      ok &= r.indices.ci[j] >= 0.0 && r.indices.ci[j] <= 1.0;
      const bool birth = std::any_of(r.events.begin(), r.events.end(), [&](const Event& e) {
        return e.kind == EventKind::birth && e.cols[0] == static_cast<int>(j);
      });
      ok &= birth == (r.indices.ci[j] == 0.0);
    }
    for (std::size_t i = 0; i < s.rows; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < s.cols; ++j) row += s.at(i, j);
      const bool death = std::any_of(r.events.begin(), r.events.end(), [&](const Event& e) {
        return e.kind == EventKind::death && e.rows[0] == static_cast<int>(i);
      });
      ok &= death == (row == 0.0);
    }
    const auto d = biadjacency(s);
    for (std::size_t a = 0; a < d.size; ++a)
      for (std::size_t b = 0; b < d.size; ++b) {
        ok &= d.at(a, b) == d.at(b, a);
        if ((a < s.rows) == (b < s.rows)) ok &= d.at(a, b) == 0.0;
      }

    // random relabeling of cluster ids at both times
    std::vector<int> row_perm(ct.size()), col_perm(ct1.size());
    std::iota(row_perm.begin(), row_perm.end(), 0);
    std::iota(col_perm.begin(), col_perm.end(), 0);
    std::shuffle(row_perm.begin(), row_perm.end(), rng);
    std::shuffle(col_perm.begin(), col_perm.end(), rng);
    std::vector<std::vector<std::string>> pt(ct.size()), pt1(ct1.size());
    for (std::size_t i = 0; i < ct.size(); ++i) pt[static_cast<std::size_t>(row_perm[i])] = ct[i];
    for (std::size_t j = 0; j < ct1.size(); ++j) pt1[static_cast<std::size_t>(col_perm[j])] = ct1[j];
    const auto rp = make_report(groups(pt), groups(pt1), Measure::overlap_target, tau);
    for (std::size_t i = 0; i < s.rows; ++i)
      for (std::size_t j = 0; j < s.cols; ++j)
        ok &= rp.similarity.at(static_cast<std::size_t>(row_perm[i]), static_cast<std::size_t>(col_perm[j])) ==
              s.at(i, j);
    std::vector<int> id_r(ct.size()), id_c(ct1.size());
    std::iota(id_r.begin(), id_r.end(), 0);
    std::iota(id_c.begin(), id_c.end(), 0);
    ok &= canon(rp.events, id_r, id_c) == canon(r.events, row_perm, col_perm);
    if (!ok) ++bad;
  }
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << pairs << " partition pairs, " << bad << " violations, " << secs << " s";
  if (bad || secs >= 30.0) return fail(msg.str());
  return pass(msg.str());
}

// 4. Planted event recovery through the full window pipeline.
struct Scenario {
  std::string name;
  std::vector<synth::PlantedCommunity> before, after;
  std::vector<synth::PlantedEvent> events;
};

synth::PlantedCommunity comm(std::string name, std::size_t size) {
  return {std::move(name), size, 1.0, {}};
}

synth::PlantSpec spec_for(const Scenario& s, std::uint64_t seed) {
  synth::PlantSpec spec;
  spec.windows = {parse_window("2022-01-01:2022-04-01"), parse_window("2022-04-01:2022-07-01")};
  spec.communities = {s.before, s.after};
  spec.events = s.events;
  spec.docs_per_window = 100;
  spec.noise_rate = 0.05;
  spec.seed = seed;
  return spec;
}

// Names each detected cluster after the planted community it overlaps most.
std::vector<std::string> name_clusters(const Partition& p,
                                       const std::vector<synth::PlantedCommunity>& planted) {
  std::vector<std::string> names;
  for (const auto& members : p.clusters()) {
    std::string best = "?";
    std::size_t best_overlap = 0;
    for (const auto& c : planted) {
      std::size_t shared = 0;
      for (const auto& m : members)
        shared += std::count(c.members.begin(), c.members.end(), m) > 0 ? 1 : 0;
      if (shared > best_overlap) {
        best_overlap = shared;
        best = c.name;
      }
    }
    names.push_back(best);
  }
  return names;
}

struct Measured {
  std::multiset<synth::TruthEvent> detected, planted;
  std::map<std::string, double> ni;  // by planted name of the t+1 cluster
  const synth::TruthTransition* truth = nullptr;
};

Measured measure(const synth::PlantSpec& spec, const synth::SynthOutput& out) {
  AnalysisOptions options;
  const auto w0 = cluster_window(out.corpus, TermLexicon{}, spec.windows[0], options);
  const auto w1 = cluster_window(out.corpus, TermLexicon{}, spec.windows[1], options);
  const auto report = make_report(w0.partition, w1.partition, Measure::overlap_target, options.tau);
  const auto rows = name_clusters(w0.partition, out.truth.communities[0]);
  const auto cols = name_clusters(w1.partition, out.truth.communities[1]);
  Measured m;
  for (const auto& e : report.events) {
    synth::TruthEvent te{e.kind, {}, {}};
    for (int r : e.rows) te.sources.push_back(rows[static_cast<std::size_t>(r)]);
    for (int c : e.cols) te.targets.push_back(cols[static_cast<std::size_t>(c)]);
    std::sort(te.sources.begin(), te.sources.end());
    std::sort(te.targets.begin(), te.targets.end());
    m.detected.insert(te);
  }
  for (auto te : out.truth.transitions.at(0).events) {
    std::sort(te.sources.begin(), te.sources.end());
    std::sort(te.targets.begin(), te.targets.end());
    m.planted.insert(te);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) m.ni[cols[j]] = report.indices.ni[j];
  m.truth = &out.truth.transitions.at(0);
  return m;
}

Verdict planted_recovery() {
  using EK = EventKind;
  const std::vector<Scenario> scenarios = {
      {"birth", {comm("A", 6), comm("B", 6)}, {comm("A", 6), comm("B", 6), comm("N", 6)},
       {{EK::persist, 0, {"A"}, {"A"}, 1.0}, {EK::persist, 0, {"B"}, {"B"}, 1.0}}},
      {"death", {comm("A", 6), comm("B", 6), comm("D", 6)}, {comm("A", 6), comm("B", 6)},
       {{EK::persist, 0, {"A"}, {"A"}, 1.0}, {EK::persist, 0, {"B"}, {"B"}, 1.0},
        {EK::death, 0, {"D"}, {}, 1.0}}},
      {"merge", {comm("A", 6), comm("B", 6), comm("C", 6)}, {comm("M", 12), comm("C", 6)},
       {{EK::merge, 0, {"A", "B"}, {"M"}, 1.0}, {EK::persist, 0, {"C"}, {"C"}, 1.0}}},
      {"split", {comm("A", 12), comm("C", 6)}, {comm("S1", 6), comm("S2", 6), comm("C", 6)},
       {{EK::split, 0, {"A"}, {"S1", "S2"}, 1.0}, {EK::persist, 0, {"C"}, {"C"}, 1.0}}},
  };
  std::ostringstream msg;
  bool ok = true;
  for (const auto& s : scenarios) {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto spec = spec_for(s, seed);
      const auto m = measure(spec, synth::generate_corpus(spec));
      hits += m.detected == m.planted ? 1 : 0;
    }
    msg << s.name << " " << hits << "/20; ";
    ok &= hits >= 18;
  }

  for (double mixing : {0.25, 0.5, 0.75}) {
    const Scenario s{"mix",
                     {comm("A", 10), comm("B", 10)},
                     {comm("A", 10), comm("B", 10)},
                     {{EK::persist, 0, {"A"}, {"A"}, mixing}, {EK::persist, 0, {"B"}, {"B"}, mixing}}};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto spec = spec_for(s, seed);
      const auto out = synth::generate_corpus(spec);
      const auto m = measure(spec, out);
      for (std::size_t j = 0; j < m.truth->cols.size(); ++j) {
        const auto it = m.ni.find(m.truth->cols[j]);
        const double got = it == m.ni.end() ? -1.0 : it->second;
        worst = std::max(worst, std::abs(got - m.truth->ni[j]));
      }
    }
    msg << "NI@" << mixing << " max err " << worst << "; ";
    ok &= worst <= 0.1;
  }
  std::string detail = msg.str();
  if (detail.size() >= 2) detail.resize(detail.size() - 2);
  return ok ? pass(detail) : fail(detail);
}

// 5. Chow test against the long double normal-equation oracle.
Verdict chow_oracle() {
  std::ostringstream msg;
  bool ok = true;
  std::mt19937_64 rng(5150);
  std::normal_distribution<double> noise(0.0, 1.0);

  double worst_rel = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 8 + rng() % 40;
    const std::size_t bp = 3 + rng() % (n - 6);
    std::vector<double> x(n), y(n);
    const double jump = 4.0 * noise(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i);
      y[i] = 0.1 * x[i] + noise(rng) + (i >= bp ? jump : 0.0);
    }
    const double ours = stats::chow_test(x, y, bp).f_statistic;
    const double ref = static_cast<double>(oracle::chow_f(x, y, bp));
    worst_rel = std::max(worst_rel, std::abs(ours - ref) / std::max(std::abs(ref), 1e-300));
  }
  msg << "50 series max rel err " << worst_rel << "; ";
  ok &= worst_rel <= 1e-6;

  std::vector<double> x(12), y(12);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i);
    y[i] = 3.0 * x[i] + 2.0;
  }
  const auto flat = stats::chow_test(x, y, 6);
  msg << "no-break F " << flat.f_statistic << " p " << flat.p_value << "; ";
  ok &= flat.f_statistic <= 1e-9 && std::abs(flat.p_value - 1.0) <= 1e-9;

  int rejected = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> xs(20), ys(20);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = static_cast<double>(i);
      ys[i] = noise(rng) + (i >= 10 ? 10.0 : 0.0);
    }
    rejected += stats::chow_test(xs, ys, 10).p_value < 0.01 ? 1 : 0;
  }
  msg << "10-sigma shift rejected " << rejected << "/1000; ";
  ok &= rejected >= 950;

  double worst_beta = 0.0;
  int grid = 0;
  for (double a : {0.5, 1.0, 2.5, 7.0, 15.0})
    for (double b : {0.5, 1.0, 4.0, 12.0})
      for (double xv : {0.01, 0.2, 0.45, 0.7, 0.99}) {
        const double diff = std::abs(stats::incomplete_beta(a, b, xv) -
                                     static_cast<double>(oracle::incomplete_beta_series(a, b, xv)));
        worst_beta = std::max(worst_beta, diff);
        ++grid;
      }
  msg << "incomplete beta " << grid << " points max err " << worst_beta;
  ok &= worst_beta <= 1e-10;
  return ok ? pass(msg.str()) : fail(msg.str());
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("\"") + TECHCONV_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 6. compare twice through the CLI, byte for byte.
Verdict determinism() {
  const auto dir = fs::temp_directory_path() / "techconv_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_file_atomic(dir / "spec.json", R"({
    "seed": 99, "docs_per_window": 150, "noise_rate": 0.05,
    "windows": ["2022-01-01:2022-04-01", "2022-04-01:2022-07-01"],
    "communities": [[{"name": "A", "size": 8}, {"name": "B", "size": 8}, {"name": "C", "size": 6}],
                    [{"name": "M", "size": 12}, {"name": "C", "size": 6}, {"name": "N", "size": 5}]],
    "events": [{"kind": "merge", "window": 0, "sources": ["A", "B"], "targets": ["M"], "mixing": 0.75},
               {"kind": "persist", "window": 0, "sources": ["C"], "targets": ["C"], "mixing": 0.5}]
  })");
  const auto log = dir / "log.txt";
  if (run_cli("synth --with-text --spec \"" + (dir / "spec.json").string() + "\" --out \"" +
                  (dir / "data").string() + "\"",
              log) != 0)
    return fail("synth failed: " + read_file(log));
  const std::string common = "compare --corpus \"" + (dir / "data" / "corpus.jsonl").string() +
                             "\" --lexicon \"" + (dir / "data" / "lexicon.json").string() +
                             "\" --window-t 2022-01-01:2022-04-01 --window-t1 2022-04-01:2022-07-01";
  for (const char* run : {"run1", "run2"})
    if (run_cli(common + " --out \"" + (dir / run).string() + "\"", log) != 0)
      return fail(std::string("compare failed: ") + read_file(log));
  std::size_t files = 0, graphml = 0;
  for (const auto& entry : fs::directory_iterator(dir / "run1")) {
    ++files;
    if (entry.path().extension() == ".graphml") ++graphml;
    const auto twin = dir / "run2" / entry.path().filename();
    if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin))
      return fail("differs: " + entry.path().filename().string());
  }
  std::size_t files2 = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir / "run2")) ++files2;
  fs::remove_all(dir);
  if (files != files2 || files == 0 || graphml != 2) return fail("unexpected output file set");
  return pass(std::to_string(files) + " files identical (" + std::to_string(graphml) + " GraphML)");
}

// 7. Counting identity and top-n laws.
Verdict counting_identity() {
  std::mt19937_64 rng(4242);
  int bad = 0, corpora = 0;
  for (; corpora < 300; ++corpora) {
    Corpus c;
    std::int64_t brute = 0;
    const std::size_t docs = 1 + rng() % 20;
    for (std::size_t d = 0; d < docs; ++d) {
      Document doc;
      doc.id = "d" + std::to_string(d);
      doc.date = Date{2020, 1, 1};
      std::set<std::string> items;
      for (std::size_t k = rng() % 8; k > 0; --k) items.insert("t" + std::to_string(rng() % 15));
      doc.tags.assign(items.begin(), items.end());
      for (std::size_t i = 0; i < doc.tags.size(); ++i)
        for (std::size_t j = i + 1; j < doc.tags.size(); ++j) ++brute;
      c.documents.push_back(doc);
    }
    const auto g = build_cooccurrence(c, TermLexicon{});
    if (g.total_weight() != brute) ++bad;
    for (std::size_t n = 1; n <= g.node_count() + 1; ++n) {
      const auto f = top_n_filter(g, n);
      if (!(top_n_filter(f, n) == f)) ++bad;
      std::set<std::string> small, large;
      for (const auto& node : f.nodes()) small.insert(node.name);
      const auto wider = top_n_filter(g, n + 1);
      for (const auto& node : wider.nodes()) large.insert(node.name);
      if (!std::includes(large.begin(), large.end(), small.begin(), small.end())) ++bad;
    }
  }
  const std::string msg = std::to_string(corpora) + " corpora, " + std::to_string(bad) + " violations";
  return bad ? fail(msg) : pass(msg);
}

// 8. Real-data directional check, only when the dataset is supplied.
Verdict real_data() {
  const char* corpus_path = std::getenv("TECHCONV_KAGGLE_CORPUS");
  if (corpus_path == nullptr || *corpus_path == '\0')
    return {Outcome::skip, "set TECHCONV_KAGGLE_CORPUS to run"};
  const char* lexicon_path = std::getenv("TECHCONV_KAGGLE_LEXICON");
  const char* windows_path = std::getenv("TECHCONV_KAGGLE_WINDOWS");

  std::vector<TimeWindow> windows;
  if (windows_path != nullptr && *windows_path != '\0') {
    windows = parse_window_list(read_file(windows_path));
  } else {
    // ten adjacent four-month windows, January 2017 through April 2020
    Date start{2017, 1, 1};
    for (int k = 0; k < 10; ++k) {
      Date end = start;
      end.month += 4;
      if (end.month > 12) {
        end.month -= 12;
        ++end.year;
      }
      windows.push_back(make_window(start, end, start.to_string()));
      start = end;
    }
  }
  PipelineConfig config;
  if (lexicon_path != nullptr && *lexicon_path != '\0') config.lexicon = lexicon_path;
  const auto corpus = load_corpus(corpus_path);
  const auto lexicon = load_lexicon_or_empty(config.lexicon);
  const std::size_t points = windows.size() - 1;
  if (points < 6) return fail("need at least 7 windows for a final-segment Chow test");
  const std::size_t breakpoint = points - 3;
  const auto r = run_series(corpus, lexicon, windows, breakpoint, config);
  const auto& pts = r.series.points;
  bool last_highest = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    last_highest &= pts.back().mean_ni > pts[i].mean_ni;
  std::ostringstream msg;
  msg << "last NI " << pts.back().mean_ni << (last_highest ? " is" : " is not")
      << " the maximum; Chow NI p = " << stats::format_p_value(r.chow_ni.p_value);
  return last_highest && r.chow_ni.p_value < 0.01 ? pass(msg.str()) : fail(msg.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 modularity oracle", modularity_oracle},
      {"2 louvain canonical cases", louvain_canonical},
      {"3 transition algebra", transition_algebra},
      {"4 planted event recovery", planted_recovery},
      {"5 chow test oracle", chow_oracle},
      {"6 compare determinism", determinism},
      {"7 counting identity", counting_identity},
      {"8 real-data discontinuity", real_data},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << tag << "  criterion " << name << "  (" << v.detail << ")" << std::endl;
    failures += v.outcome == Outcome::fail ? 1 : 0;
  }
  return failures == 0 ? 0 : 1;
}
