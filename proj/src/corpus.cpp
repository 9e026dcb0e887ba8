#include "techconv/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "techconv/error.hpp"
#include "techconv/fileio.hpp"
#include "techconv/text.hpp"

namespace techconv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw InputError("corpus", message); }

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool parse_fixed_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// One CSV record with the physical line it started on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> parse_csv(std::string_view in) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = in.size();
  while (i < n) {
    CsvRecord rec;
    rec.line = line;
    std::string field;
    bool end_of_record = false;
    while (!end_of_record) {
      field.clear();
      if (i < n && in[i] == '"') {
        ++i;
        for (;;) {
          if (i >= n) fail("line " + std::to_string(rec.line) + ": unterminated quoted field");
          const char c = in[i++];
          if (c == '"') {
            if (i < n && in[i] == '"') {
              field.push_back('"');
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (i < n && in[i] != ',' && in[i] != '\n' && in[i] != '\r')
          fail("line " + std::to_string(line) + ": unexpected character after closing quote");
      } else {
        while (i < n && in[i] != ',' && in[i] != '\n' && in[i] != '\r') field.push_back(in[i++]);
      }
      rec.fields.push_back(field);
      if (i < n && in[i] == ',') {
        ++i;
        continue;
      }
      if (i < n && in[i] == '\r') ++i;
      if (i < n && in[i] == '\n') {
        ++i;
        ++line;
      }
      end_of_record = true;
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<std::string> split_tags(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(';', start);
    const std::size_t end = pos == std::string_view::npos ? s.size() : pos;
    out.emplace_back(s.substr(start, end - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_unique(const Corpus& corpus) {
  std::unordered_set<std::string> seen;
  for (const auto& d : corpus.documents)
    if (!seen.insert(d.id).second) fail("duplicate document id '" + d.id + "'");
}

Corpus parse_jsonl(std::string_view contents) {
  Corpus corpus;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(where + ": invalid JSON (" + e.what() + ")");
    }
    if (!rec.is_object()) fail(where + ": record is not a JSON object");

    Document doc;
    if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get<std::string>().empty())
      fail(where + ": field 'id' missing or not a nonempty string");
    doc.id = rec["id"].get<std::string>();
    if (!rec.contains("date") || !rec["date"].is_string())
      fail(where + ": field 'date' missing or not a string");
    try {
      doc.date = parse_date(rec["date"].get<std::string>());
    } catch (const InputError& e) {
      fail(where + ": field 'date': " + e.what());
    }
    const bool has_text = rec.contains("text");
    const bool has_tags = rec.contains("tags");
    if (!has_text && !has_tags) fail(where + ": field 'text' or 'tags' required");
    if (has_text) {
      if (!rec["text"].is_string()) fail(where + ": field 'text' is not a string");
      doc.text = rec["text"].get<std::string>();
    }
    if (has_tags) {
      if (!rec["tags"].is_array()) fail(where + ": field 'tags' is not an array");
      std::vector<std::string> raw;
      for (const auto& t : rec["tags"]) {
        if (!t.is_string()) fail(where + ": field 'tags' contains a non-string");
        raw.push_back(t.get<std::string>());
      }
      doc.tags = normalize_tags(raw);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus parse_csv_corpus(std::string_view contents) {
  Corpus corpus;
  auto records = parse_csv(contents);
  if (records.empty()) return corpus;
  const auto& header = records.front().fields;
  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail("line 1: header lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_id = column("id");
  const std::size_t c_date = column("date");
  const std::size_t c_text = column("text");
  const std::size_t c_tags = column("tags");
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "line " + std::to_string(rec.line);
    if (rec.fields.size() != header.size())
      fail(where + ": expected " + std::to_string(header.size()) + " fields, got " +
           std::to_string(rec.fields.size()));
    Document doc;
    doc.id = rec.fields[c_id];
    if (doc.id.empty()) fail(where + ": field 'id' is empty");
    try {
      doc.date = parse_date(rec.fields[c_date]);
    } catch (const InputError& e) {
      fail(where + ": field 'date': " + e.what());
    }
    doc.text = rec.fields[c_text];
    if (!rec.fields[c_tags].empty()) doc.tags = normalize_tags(split_tags(rec.fields[c_tags]));
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace

long Date::days() const {
  // days_from_civil (H. Hinnant)
  const int y = year - (month <= 2 ? 1 : 0);
  const long era = (y >= 0 ? y : y - 399) / 400;
  const long yoe = y - era * 400;
  const long doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date Date::from_days(long z) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const long doe = z - era * 146097;
  const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const long mp = (5 * doy + 2) / 153;
  Date d;
  d.day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  d.month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  d.year = static_cast<int>(yoe + era * 400 + (d.month <= 2 ? 1 : 0));
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Date parse_date(std::string_view s) {
  const std::string shown(s);
  if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s = s.substr(0, 10);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw InputError("corpus", "invalid date '" + shown + "' (expected YYYY-MM-DD)");
  Date d;
  if (!parse_fixed_int(s.substr(0, 4), d.year) || !parse_fixed_int(s.substr(5, 2), d.month) ||
      !parse_fixed_int(s.substr(8, 2), d.day) || d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month))
    throw InputError("corpus", "invalid date '" + shown + "'");
  return d;
}

TimeWindow make_window(Date start, Date end, std::string label) {
  if (!(start < end))
    throw InputError("corpus", "window start " + start.to_string() + " is not before end " +
                                   end.to_string());
  if (label.empty()) label = start.to_string() + ":" + end.to_string();
  return TimeWindow{start, end, std::move(label)};
}

TimeWindow parse_window(std::string_view spec, std::string label) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw InputError("corpus", "window '" + std::string(spec) + "' is not START:END");
  return make_window(parse_date(spec.substr(0, colon)), parse_date(spec.substr(colon + 1)),
                     std::move(label));
}

CorpusFormat corpus_format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return CorpusFormat::csv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return CorpusFormat::jsonl;
  throw InputError("corpus", "cannot infer corpus format from '" + path.string() +
                                 "' (use .jsonl or .csv)");
}

std::vector<std::string> normalize_tags(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& t : raw) {
    std::string norm = text::normalize_tag(t);
    if (norm.empty()) continue;
    if (seen.insert(norm).second) out.push_back(std::move(norm));
  }
  return out;
}

Corpus parse_corpus(std::string_view contents, CorpusFormat format, std::string source_label) {
  Corpus corpus =
      format == CorpusFormat::jsonl ? parse_jsonl(contents) : parse_csv_corpus(contents);
  check_unique(corpus);
  corpus.source_label = std::move(source_label);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  return parse_corpus(read_file(path), format, path.stem().string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  return load_corpus(path, corpus_format_from_path(path));
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::jsonl) {
    for (const auto& d : corpus.documents) {
      json rec = json::object();
      rec["id"] = d.id;
      rec["date"] = d.date.to_string();
      rec["text"] = d.text;
      rec["tags"] = d.tags;
      out += rec.dump();
      out += '\n';
    }
    return out;
  }
  out = "id,date,text,tags\n";
  for (const auto& d : corpus.documents) {
    std::string tags;
    for (std::size_t i = 0; i < d.tags.size(); ++i) {
      if (d.tags[i].find(';') != std::string::npos)
        fail("tag '" + d.tags[i] + "' contains ';' and cannot be written as CSV");
      if (i) tags += ';';
      tags += d.tags[i];
    }
    out += csv_field(d.id) + ',' + d.date.to_string() + ',' + csv_field(d.text) + ',' +
           csv_field(tags) + '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  write_file_atomic(path, serialize_corpus(corpus, format));
}

Corpus window_filter(const Corpus& corpus, const TimeWindow& window) {
  Corpus out;
  out.source_label = corpus.source_label;
  for (const auto& d : corpus.documents)
    if (window.contains(d.date)) out.documents.push_back(d);
  return out;
}

}  // namespace techconv
