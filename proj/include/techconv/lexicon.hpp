#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "techconv/corpus.hpp"

namespace techconv {

struct TermPattern {
  std::string canonical;
  std::vector<std::string> patterns;
};

/// Compiled technology lexicon. Immutable after construction and safe to
/// share across threads.
///
/// Patterns use the ICU regular-expression dialect, restricted to what the
/// mainstream engines share: no backreferences. Each pattern is matched
/// case-insensitively and only where it is not flanked by a letter, digit,
/// or underscore, so "ai" never fires inside "maintain".
class TermLexicon {
 public:
  TermLexicon() = default;
  explicit TermLexicon(std::vector<TermPattern> entries);

  const std::vector<TermPattern>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view canonical) const;

  /// Canonical terms with at least one pattern hit in `text`.
  std::set<std::string> extract(std::string_view text) const;

 private:
  struct Compiled;
  std::vector<TermPattern> entries_;
  std::shared_ptr<const Compiled> compiled_;
};

TermLexicon compile_lexicon_json(std::string_view json_text);
TermLexicon compile_lexicon(const std::filesystem::path& path);

std::set<std::string> extract_terms(const Document& doc, const TermLexicon& lexicon);

}  // namespace techconv
