#include "techconv/lexicon.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <unicode/regex.h>
#include <unicode/unistr.h>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"
#include "techconv/text.hpp"

namespace techconv {

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("lexicon", message); }

icu::UnicodeString to_unicode(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

bool has_backreference(std::string_view pattern) {
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i] != '\\') continue;
    const char next = pattern[i + 1];
    if ((next >= '1' && next <= '9') || next == 'k') return true;
    ++i;  // skip the escaped character
  }
  return false;
}

constexpr std::string_view kWordChar = "[\\p{L}\\p{N}_]";

}  // namespace

struct TermLexicon::Compiled {
  // patterns[i][j] compiles entries_[i].patterns[j]
  std::vector<std::vector<std::unique_ptr<icu::RegexPattern>>> patterns;
};

TermLexicon::TermLexicon(std::vector<TermPattern> entries) : entries_(std::move(entries)) {
  auto compiled = std::make_shared<Compiled>();
  std::unordered_set<std::string> seen;
  for (auto& entry : entries_) {
    entry.canonical = text::normalize_tag(entry.canonical);
    if (entry.canonical.empty()) fail("entry with empty canonical term");
    if (!seen.insert(entry.canonical).second)
      fail("duplicate canonical term '" + entry.canonical + "'");
    if (entry.patterns.empty()) fail("entry '" + entry.canonical + "' has no patterns");

    auto& slot = compiled->patterns.emplace_back();
    const icu::UnicodeString probe = to_unicode(entry.canonical);
    bool self_match = false;
    for (const auto& pattern : entry.patterns) {
      const std::string where = "entry '" + entry.canonical + "', pattern '" + pattern + "'";
      if (has_backreference(pattern)) fail(where + ": backreferences are not supported");
      const std::string anchored = "(?<!" + std::string(kWordChar) + ")(?:" + pattern + ")(?!" +
                                   std::string(kWordChar) + ")";
      UParseError parse_error{};
      UErrorCode status = U_ZERO_ERROR;
      std::unique_ptr<icu::RegexPattern> re(icu::RegexPattern::compile(
          to_unicode(anchored), UREGEX_CASE_INSENSITIVE, parse_error, status));
      if (U_FAILURE(status) || !re)
        fail(where + ": does not compile (" + u_errorName(status) + ")");

      std::unique_ptr<icu::RegexMatcher> m(re->matcher(probe, status));
      if (U_SUCCESS(status) && m->find()) self_match = true;
      slot.push_back(std::move(re));
    }
    // Abbreviation patterns need not match the canonical form, but at least one pattern must.
    if (!self_match) fail("entry '" + entry.canonical + "': no pattern matches the canonical form");
  }
  compiled_ = std::move(compiled);
}

bool TermLexicon::contains(std::string_view canonical) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const TermPattern& e) { return e.canonical == canonical; });
}

std::set<std::string> TermLexicon::extract(std::string_view raw_text) const {
  std::set<std::string> hits;
  if (raw_text.empty() || !compiled_) return hits;
  const icu::UnicodeString input = to_unicode(text::fold_case(raw_text));
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (const auto& re : compiled_->patterns[i]) {
      UErrorCode status = U_ZERO_ERROR;
      std::unique_ptr<icu::RegexMatcher> m(re->matcher(input, status));
      if (U_SUCCESS(status) && m->find()) {
        hits.insert(entries_[i].canonical);
        break;
      }
    }
  }
  return hits;
}

TermLexicon compile_lexicon_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) fail("lexicon file must be a JSON array");
  std::vector<TermPattern> entries;
  std::size_t index = 0;
  for (const auto& item : doc) {
    const std::string where = "entry #" + std::to_string(index++);
    if (!item.is_object() || !item.contains("canonical") || !item["canonical"].is_string())
      fail(where + ": missing string field 'canonical'");
    if (!item.contains("patterns") || !item["patterns"].is_array())
      fail(where + ": missing array field 'patterns'");
    TermPattern entry;
    entry.canonical = item["canonical"].get<std::string>();
    for (const auto& p : item["patterns"]) {
      if (!p.is_string()) fail(where + ": non-string pattern");
      entry.patterns.push_back(p.get<std::string>());
    }
    entries.push_back(std::move(entry));
  }
  return TermLexicon(std::move(entries));
}

TermLexicon compile_lexicon(const std::filesystem::path& path) {
  return compile_lexicon_json(read_file(path));
}

std::set<std::string> extract_terms(const Document& doc, const TermLexicon& lexicon) {
  return lexicon.extract(doc.text);
}

}  // namespace techconv
