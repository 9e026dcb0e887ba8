#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/corpus.hpp"
#include "techconv/transition.hpp"

namespace techconv::synth {

/// SplitMix64 (Steele, Lea, Flood). The generator's output depends only on
/// this sequence, so corpora reproduce across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::uint64_t state_;
};

struct PlantedCommunity {
  std::string name;
  std::size_t size = 0;
  double intra_rate = 1.0;  // chance a tag slot draws from the own community
  std::vector<std::string> members;  // filled by the generator
};

/// Transition from window `window` to `window + 1`.
///   persist: 1 source -> 1 target     merge: >= 2 sources -> 1 target
///   split:   1 source -> >= 2 targets birth: no source     death: no target
/// A target inherits round(mixing * size) members from its sources; the rest
/// are fresh terms. Merges draw round-robin over the sources, splits hand out
/// consecutive disjoint slices of the source.
struct PlantedEvent {
  EventKind kind = EventKind::persist;
  std::size_t window = 0;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  double mixing = 1.0;
};

struct PlantSpec {
  std::vector<TimeWindow> windows;
  std::vector<std::vector<PlantedCommunity>> communities;  // per window
  std::vector<PlantedEvent> events;
  std::size_t docs_per_window = 100;
  std::size_t tags_per_doc = 4;
  double noise_rate = 0.0;  // per slot chance of an extra uniform tag from the window vocabulary
  std::uint64_t seed = 1;
  bool with_text = false;  // put terms in the text instead of the tags
};

PlantSpec parse_plant_spec(std::string_view json_text);
PlantSpec load_plant_spec(const std::filesystem::path& path);

/// Threshold-free reading of the planted flows: a target with no inherited
/// member is a birth, one fed by two or more sources a merge, and so on.
struct TruthEvent {
  EventKind kind = EventKind::persist;
  std::vector<std::string> sources;
  std::vector<std::string> targets;

  auto operator<=>(const TruthEvent&) const = default;
};

struct TruthTransition {
  std::size_t from = 0;  // window index; the later window is from + 1
  std::vector<std::string> rows;  // community names at `from`
  std::vector<std::string> cols;  // community names at `from + 1`
  std::vector<std::vector<std::int64_t>> overlap;
  std::vector<std::vector<double>> similarity;  // overlap_target
  std::vector<double> ci;
  std::vector<double> ni;
  std::vector<TruthEvent> events;
};

struct GroundTruth {
  std::vector<std::vector<PlantedCommunity>> communities;  // members filled in
  std::vector<TruthTransition> transitions;
};

struct SynthOutput {
  Corpus corpus;
  GroundTruth truth;
};

/// Throws InputError for inconsistent specs (unknown or reused communities,
/// too few members to inherit from, empty communities, ...).
SynthOutput generate_corpus(const PlantSpec& spec);

std::string ground_truth_json(const GroundTruth& truth);
/// Lexicon with one literal pattern per planted term.
std::string lexicon_json(const GroundTruth& truth);

}  // namespace techconv::synth
