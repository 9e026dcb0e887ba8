#include "techconv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"

namespace techconv::synth {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw InputError("synth", message); }

EventKind parse_kind(const std::string& s) {
  for (auto k : {EventKind::birth, EventKind::death, EventKind::merge, EventKind::split,
                 EventKind::persist})
    if (to_string(k) == s) return k;
  fail("unknown event kind '" + s + "'");
}

class TermFactory {
 public:
  std::string fresh() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "term%05zu", next_++);
    return buf;
  }

 private:
  std::size_t next_ = 0;
};

std::size_t find_community(const std::vector<PlantedCommunity>& list, const std::string& name,
                           std::size_t window) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].name == name) return i;
  fail("event refers to unknown community '" + name + "' in window " + std::to_string(window));
}

void validate(const PlantSpec& spec) {
  if (spec.windows.empty()) fail("spec needs at least one window");
  if (spec.communities.size() != spec.windows.size())
    fail("communities must be listed for each of the " + std::to_string(spec.windows.size()) +
         " windows");
  if (spec.docs_per_window == 0) fail("docs_per_window must be positive");
  if (spec.tags_per_doc < 2) fail("tags_per_doc must be at least 2");
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 1.0)) fail("noise_rate must lie in [0, 1)");
  for (std::size_t k = 1; k < spec.windows.size(); ++k)
    if (!(spec.windows[k - 1].start < spec.windows[k].start))
      fail("windows must be increasing by start date");
  for (std::size_t k = 0; k < spec.communities.size(); ++k) {
    std::set<std::string> names;
    if (spec.communities[k].empty()) fail("window " + std::to_string(k) + " has no communities");
    for (const auto& c : spec.communities[k]) {
      if (c.size == 0) fail("community '" + c.name + "' is empty");
      if (!names.insert(c.name).second)
        fail("community '" + c.name + "' appears twice in window " + std::to_string(k));
      if (!(c.intra_rate >= 0.0 && c.intra_rate <= 1.0))
        fail("intra_rate of '" + c.name + "' must lie in [0, 1]");
    }
  }
  std::set<std::pair<std::size_t, std::string>> used_sources, used_targets;
  for (const auto& e : spec.events) {
    if (e.window + 1 >= spec.windows.size())
      fail("event window " + std::to_string(e.window) + " has no following window");
    if (!(e.mixing >= 0.0 && e.mixing <= 1.0)) fail("mixing strength must lie in [0, 1]");
    const std::size_t ns = e.sources.size();
    const std::size_t nt = e.targets.size();
    bool shape_ok = false;
    switch (e.kind) {
      case EventKind::persist: shape_ok = ns == 1 && nt == 1; break;
      case EventKind::merge: shape_ok = ns >= 2 && nt == 1 && e.mixing > 0.0; break;
      case EventKind::split: shape_ok = ns == 1 && nt >= 2 && e.mixing > 0.0; break;
      case EventKind::birth: shape_ok = ns == 0 && nt == 1; break;
      case EventKind::death: shape_ok = ns == 1 && nt == 0; break;
    }
    if (!shape_ok)
      fail(std::string("malformed ") + std::string(to_string(e.kind)) +
           " event (check source/target counts and mixing > 0 for merge/split)");
    for (const auto& s : e.sources) {
      find_community(spec.communities[e.window], s, e.window);
      if (!used_sources.insert({e.window, s}).second)
        fail("community '" + s + "' is the source of more than one event");
    }
    for (const auto& t : e.targets) {
      find_community(spec.communities[e.window + 1], t, e.window + 1);
      if (!used_targets.insert({e.window + 1, t}).second)
        fail("community '" + t + "' is the target of more than one event");
    }
  }
}

// Members inherited by each target of one event.
std::map<std::string, std::vector<std::string>> inherit(const PlantedEvent& e,
                                                        const std::vector<PlantedCommunity>& before,
                                                        const std::vector<PlantedCommunity>& after) {
  std::map<std::string, std::vector<std::string>> out;
  auto quota = [&](const std::string& target) {
    const auto& c = after[find_community(after, target, e.window + 1)];
    return static_cast<std::size_t>(std::llround(e.mixing * static_cast<double>(c.size)));
  };
  auto source = [&](const std::string& name) -> const PlantedCommunity& {
    return before[find_community(before, name, e.window)];
  };
  switch (e.kind) {
    case EventKind::persist: {
      const auto& src = source(e.sources[0]);
      const std::size_t h = quota(e.targets[0]);
      if (h > src.members.size())
        fail("'" + e.targets[0] + "' cannot inherit " + std::to_string(h) + " members from '" +
             src.name + "'");
      out[e.targets[0]].assign(src.members.begin(), src.members.begin() + static_cast<long>(h));
      break;
    }
    case EventKind::merge: {
      const std::size_t h = quota(e.targets[0]);
      std::vector<std::size_t> cursor(e.sources.size(), 0);
      auto& taken = out[e.targets[0]];
      while (taken.size() < h) {
        bool progressed = false;
        for (std::size_t s = 0; s < e.sources.size() && taken.size() < h; ++s) {
          const auto& src = source(e.sources[s]);
          if (cursor[s] < src.members.size()) {
            taken.push_back(src.members[cursor[s]++]);
            progressed = true;
          }
        }
        if (!progressed)
          fail("merge sources hold fewer than " + std::to_string(h) + " members");
      }
      break;
    }
    case EventKind::split: {
      const auto& src = source(e.sources[0]);
      std::size_t offset = 0;
      for (const auto& t : e.targets) {
        const std::size_t h = quota(t);
        if (offset + h > src.members.size())
          fail("split of '" + src.name + "' hands out more members than it has");
        out[t].assign(src.members.begin() + static_cast<long>(offset),
                      src.members.begin() + static_cast<long>(offset + h));
        offset += h;
      }
      break;
    }
    case EventKind::birth:
      out[e.targets[0]];
      break;
    case EventKind::death:
      break;
  }
  return out;
}

TruthTransition describe_transition(std::size_t from, const std::vector<PlantedCommunity>& before,
                                    const std::vector<PlantedCommunity>& after) {
  TruthTransition t;
  t.from = from;
  std::set<std::string> earlier_vocab;
  for (const auto& c : before) {
    t.rows.push_back(c.name);
    earlier_vocab.insert(c.members.begin(), c.members.end());
  }
  for (const auto& c : after) t.cols.push_back(c.name);
  t.overlap.assign(before.size(), std::vector<std::int64_t>(after.size(), 0));
  t.similarity.assign(before.size(), std::vector<double>(after.size(), 0.0));
  for (std::size_t i = 0; i < before.size(); ++i) {
    const std::set<std::string> rows(before[i].members.begin(), before[i].members.end());
    for (std::size_t j = 0; j < after.size(); ++j) {
      std::int64_t shared = 0;
      for (const auto& m : after[j].members) shared += rows.count(m) ? 1 : 0;
      t.overlap[i][j] = shared;
      t.similarity[i][j] =
          static_cast<double>(shared) / static_cast<double>(after[j].members.size());
    }
  }
  for (const auto& c : after) {
    std::size_t inherited = 0;
    for (const auto& m : c.members) inherited += earlier_vocab.count(m);
    const double ci = static_cast<double>(inherited) / static_cast<double>(c.members.size());
    t.ci.push_back(ci);
    t.ni.push_back(1.0 - ci);
  }

  std::vector<std::size_t> fed_by(after.size(), 0), feeds(before.size(), 0);
  for (std::size_t i = 0; i < before.size(); ++i)
    for (std::size_t j = 0; j < after.size(); ++j)
      if (t.overlap[i][j] > 0) {
        ++feeds[i];
        ++fed_by[j];
      }
  for (std::size_t i = 0; i < before.size(); ++i)
    if (feeds[i] == 0) t.events.push_back({EventKind::death, {before[i].name}, {}});
  for (std::size_t j = 0; j < after.size(); ++j)
    if (fed_by[j] == 0) t.events.push_back({EventKind::birth, {}, {after[j].name}});
  for (std::size_t j = 0; j < after.size(); ++j) {
    if (fed_by[j] < 2) continue;
    TruthEvent e{EventKind::merge, {}, {after[j].name}};
    for (std::size_t i = 0; i < before.size(); ++i)
      if (t.overlap[i][j] > 0) e.sources.push_back(before[i].name);
    t.events.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (feeds[i] < 2) continue;
    TruthEvent e{EventKind::split, {before[i].name}, {}};
    for (std::size_t j = 0; j < after.size(); ++j)
      if (t.overlap[i][j] > 0) e.targets.push_back(after[j].name);
    t.events.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < before.size(); ++i)
    for (std::size_t j = 0; j < after.size(); ++j)
      if (t.overlap[i][j] > 0 && feeds[i] < 2 && fed_by[j] < 2)
        t.events.push_back({EventKind::persist, {before[i].name}, {after[j].name}});
  return t;
}

Document make_document(const PlantSpec& spec, std::size_t window, std::size_t index,
                       const std::vector<PlantedCommunity>& communities,
                       const std::vector<std::string>& vocab, SplitMix64& rng) {
  const auto& w = spec.windows[window];
  const long span = w.end.days() - w.start.days();
  Document doc;
  doc.id = "w" + std::to_string(window) + "-d" + std::to_string(index);
  doc.date = Date::from_days(w.start.days() +
                             static_cast<long>(index) * span /
                                 static_cast<long>(spec.docs_per_window));

  const auto& home = communities[rng.below(communities.size())];
  std::vector<std::string> items;
  auto add = [&](const std::string& term) {
    if (std::find(items.begin(), items.end(), term) == items.end()) items.push_back(term);
  };
  for (std::size_t slot = 0; slot < spec.tags_per_doc; ++slot) {
    if (rng.bernoulli(home.intra_rate)) {
      std::vector<const std::string*> open;
      for (const auto& m : home.members)
        if (std::find(items.begin(), items.end(), m) == items.end()) open.push_back(&m);
      if (!open.empty()) add(*open[rng.below(open.size())]);
    } else {
      add(vocab[rng.below(vocab.size())]);
    }
  }
  for (std::size_t slot = 0; slot < spec.tags_per_doc; ++slot)
    if (rng.bernoulli(spec.noise_rate)) add(vocab[rng.below(vocab.size())]);

  if (spec.with_text) {
    doc.text = "Notes on";
    for (std::size_t i = 0; i < items.size(); ++i)
      doc.text += (i == 0 ? " " : ", ") + items[i];
    doc.text += ".";
  } else {
    doc.tags = std::move(items);
  }
  return doc;
}

}  // namespace

PlantSpec parse_plant_spec(std::string_view json_text) {
  try {
    const auto doc = json::parse(json_text);
    PlantSpec spec;
    spec.seed = doc.value("seed", std::uint64_t{1});
    spec.docs_per_window = doc.value("docs_per_window", std::size_t{100});
    spec.tags_per_doc = doc.value("tags_per_doc", std::size_t{4});
    spec.noise_rate = doc.value("noise_rate", 0.0);
    spec.with_text = doc.value("with_text", false);
    for (const auto& w : doc.at("windows")) {
      if (w.is_string())
        spec.windows.push_back(parse_window(w.get<std::string>()));
      else
        spec.windows.push_back(make_window(parse_date(w.at("start").get<std::string>()),
                                           parse_date(w.at("end").get<std::string>()),
                                           w.value("label", std::string{})));
    }
    for (const auto& per_window : doc.at("communities")) {
      auto& list = spec.communities.emplace_back();
      for (const auto& c : per_window) {
        PlantedCommunity pc;
        pc.name = c.at("name").get<std::string>();
        pc.size = c.at("size").get<std::size_t>();
        pc.intra_rate = c.value("intra_rate", 1.0);
        list.push_back(std::move(pc));
      }
    }
    if (doc.contains("events"))
      for (const auto& e : doc.at("events")) {
        PlantedEvent pe;
        pe.kind = parse_kind(e.at("kind").get<std::string>());
        pe.window = e.at("window").get<std::size_t>();
        pe.sources = e.value("sources", std::vector<std::string>{});
        pe.targets = e.value("targets", std::vector<std::string>{});
        pe.mixing = e.value("mixing", 1.0);
        spec.events.push_back(std::move(pe));
      }
    return spec;
  } catch (const json::exception& e) {
    fail(std::string("malformed plant spec: ") + e.what());
  }
}

PlantSpec load_plant_spec(const std::filesystem::path& path) {
  return parse_plant_spec(read_file(path));
}

SynthOutput generate_corpus(const PlantSpec& spec) {
  validate(spec);
  TermFactory terms;
  GroundTruth truth;
  truth.communities = spec.communities;

  for (auto& c : truth.communities[0])
    for (std::size_t i = 0; i < c.size; ++i) c.members.push_back(terms.fresh());

  for (std::size_t k = 0; k + 1 < truth.communities.size(); ++k) {
    std::map<std::string, std::vector<std::string>> inherited;
    for (const auto& e : spec.events)
      if (e.window == k) inherited.merge(inherit(e, truth.communities[k], truth.communities[k + 1]));
    for (auto& c : truth.communities[k + 1]) {
      c.members = inherited[c.name];
      while (c.members.size() < c.size) c.members.push_back(terms.fresh());
    }
    truth.transitions.push_back(
        describe_transition(k, truth.communities[k], truth.communities[k + 1]));
  }

  SplitMix64 rng(spec.seed);
  SynthOutput out;
  out.corpus.source_label = "synth";
  for (std::size_t k = 0; k < spec.windows.size(); ++k) {
    const auto& communities = truth.communities[k];
    std::vector<std::string> vocab;
    for (const auto& c : communities) vocab.insert(vocab.end(), c.members.begin(), c.members.end());
    for (std::size_t d = 0; d < spec.docs_per_window; ++d)
      out.corpus.documents.push_back(make_document(spec, k, d, communities, vocab, rng));
  }
  out.truth = std::move(truth);
  return out;
}

std::string ground_truth_json(const GroundTruth& truth) {
  json doc;
  doc["windows"] = json::array();
  for (const auto& list : truth.communities) {
    json w = json::array();
    for (const auto& c : list) w.push_back({{"name", c.name}, {"members", c.members}});
    doc["windows"].push_back({{"communities", std::move(w)}});
  }
  doc["transitions"] = json::array();
  for (const auto& t : truth.transitions) {
    json events = json::array();
    for (const auto& e : t.events)
      events.push_back({{"kind", std::string(to_string(e.kind))},
                        {"sources", e.sources},
                        {"targets", e.targets}});
    doc["transitions"].push_back({{"from", t.from},
                                  {"to", t.from + 1},
                                  {"rows", t.rows},
                                  {"cols", t.cols},
                                  {"overlap", t.overlap},
                                  {"similarity", t.similarity},
                                  {"ci", t.ci},
                                  {"ni", t.ni},
                                  {"events", std::move(events)}});
  }
  return doc.dump(2) + "\n";
}

std::string lexicon_json(const GroundTruth& truth) {
  std::set<std::string> all;
  for (const auto& list : truth.communities)
    for (const auto& c : list) all.insert(c.members.begin(), c.members.end());
  json doc = json::array();
  for (const auto& term : all) doc.push_back({{"canonical", term}, {"patterns", json::array({term})}});
  return doc.dump(2) + "\n";
}

}  // namespace techconv::synth
