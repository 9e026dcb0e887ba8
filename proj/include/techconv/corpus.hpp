#pragma once

#include <compare>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace techconv {

/// Calendar date at day precision (proleptic Gregorian).
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  /// Days since 1970-01-01.
  long days() const;
  static Date from_days(long days);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
  bool operator==(const Date&) const = default;
};

/// Parses "YYYY-MM-DD"; a trailing time component ("T..." or " ...") is
/// dropped. Throws InputError on anything else.
Date parse_date(std::string_view s);

/// Half-open [start, end).
struct TimeWindow {
  Date start;
  Date end;
  std::string label;

  bool contains(const Date& d) const { return start <= d && d < end; }
  bool operator==(const TimeWindow&) const = default;
};

TimeWindow make_window(Date start, Date end, std::string label = {});

/// "START:END" with ISO dates. The label defaults to the spec string itself.
TimeWindow parse_window(std::string_view spec, std::string label = {});

struct Document {
  std::string id;
  Date date;
  std::string text;
  std::vector<std::string> tags;  // normalized, deduplicated, first-seen order

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::string source_label;

  std::size_t size() const { return documents.size(); }
  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { jsonl, csv };

CorpusFormat corpus_format_from_path(const std::filesystem::path& path);

/// Normalizes and deduplicates a raw tag list; empty tags are dropped.
std::vector<std::string> normalize_tags(const std::vector<std::string>& raw);

Corpus parse_corpus(std::string_view contents, CorpusFormat format, std::string source_label = {});
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path);

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

Corpus window_filter(const Corpus& corpus, const TimeWindow& window);

}  // namespace techconv
