#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "techconv/corpus.hpp"
#include "techconv/error.hpp"

using namespace techconv;

namespace {

Corpus sample() {
  return parse_corpus(
      "{\"id\":\"a\",\"date\":\"2020-01-15\",\"text\":\"robots, drones\",\"tags\":[\"AI\",\"ai\"]}\n"
      "{\"id\":\"b\",\"date\":\"2020-03-01T12:30:00Z\",\"tags\":[\" Machine   Learning \"]}\n"
      "{\"id\":\"c\",\"date\":\"2020-04-30\",\"text\":\"say \\\"hi\\\", ok\"}\n",
      CorpusFormat::jsonl);
}

std::string error_of(const std::string& contents, CorpusFormat format) {
  try {
    parse_corpus(contents, format);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("dates parse, truncate times, and reject nonsense") {
  CHECK(parse_date("2020-02-29") == Date{2020, 2, 29});
  CHECK(parse_date("2020-02-29T23:59:59") == Date{2020, 2, 29});
  CHECK_THROWS_AS(parse_date("2019-02-29"), InputError);
  CHECK_THROWS_AS(parse_date("2020-13-01"), InputError);
  CHECK_THROWS_AS(parse_date("20-01-01"), InputError);
  CHECK(Date::from_days(Date{2021, 7, 4}.days()) == Date{2021, 7, 4});
  CHECK(Date{1970, 1, 1}.days() == 0);
  CHECK(Date{2000, 3, 1}.days() - Date{2000, 2, 28}.days() == 2);
}

TEST_CASE("windows are half-open and validated") {
  const auto w = parse_window("2020-01-01:2020-05-01");
  CHECK(w.contains(Date{2020, 1, 1}));
  CHECK(w.contains(Date{2020, 4, 30}));
  CHECK_FALSE(w.contains(Date{2020, 5, 1}));
  CHECK_THROWS_AS(parse_window("2020-05-01:2020-01-01"), InputError);
  CHECK_THROWS_AS(parse_window("2020-05-01"), InputError);
}

TEST_CASE("load_corpus: empty, case folding, count") {
  CHECK(parse_corpus("", CorpusFormat::jsonl).size() == 0);
  CHECK(parse_corpus("id,date,text,tags\n", CorpusFormat::csv).size() == 0);

  const auto one = parse_corpus(
      R"({"id":"a","date":"2020-02-01","text":"","tags":["AI","ai"]})", CorpusFormat::jsonl);
  REQUIRE(one.size() == 1);
  CHECK(one.documents[0].tags == std::vector<std::string>{"ai"});

  const auto c = sample();
  REQUIRE(c.size() == 3);
  CHECK(c.documents[0].id == "a");
  CHECK(c.documents[1].id == "b");
  CHECK(c.documents[2].id == "c");
  CHECK(c.documents[1].tags == std::vector<std::string>{"machine learning"});
  CHECK(c.documents[1].date == Date{2020, 3, 1});
}

TEST_CASE("unicode tags are case folded") {
  const auto c = parse_corpus(R"({"id":"x","date":"2020-01-01","tags":["STRASSE","Straße","ÉCOLE"]})",
                              CorpusFormat::jsonl);
  CHECK(c.documents[0].tags == std::vector<std::string>{"strasse", "école"});
}

TEST_CASE("malformed records name line and field") {
  auto msg = error_of("{\"id\":\"a\",\"date\":\"2020-01-01\",\"text\":\"\"}\n"
                      "{\"id\":\"b\",\"date\":\"2020-01-xx\",\"text\":\"\"}\n",
                      CorpusFormat::jsonl);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("date") != std::string::npos);

  msg = error_of("{\"id\":\"a\",\"date\":\"2020-01-01\"}\n", CorpusFormat::jsonl);
  CHECK(msg.find("line 1") != std::string::npos);
  CHECK(msg.find("text") != std::string::npos);

  msg = error_of("{\"date\":\"2020-01-01\",\"text\":\"x\"}\n", CorpusFormat::jsonl);
  CHECK(msg.find("'id'") != std::string::npos);

  msg = error_of("id,date,text,tags\na,2020-01-01,x,\nb,2020-01-02,\"multi\nline\",t\nc,bad,x,\n",
                 CorpusFormat::csv);
  CHECK(msg.find("line 5") != std::string::npos);
  CHECK(msg.find("date") != std::string::npos);
}

TEST_CASE("duplicate ids are rejected with the id") {
  const auto msg = error_of(
      "{\"id\":\"dup\",\"date\":\"2020-01-01\",\"text\":\"\"}\n"
      "{\"id\":\"dup\",\"date\":\"2020-01-02\",\"text\":\"\"}\n",
      CorpusFormat::jsonl);
  CHECK(msg.find("'dup'") != std::string::npos);
}

TEST_CASE("csv reader handles RFC-4180 quoting and ';' tags") {
  const auto c = parse_corpus(
      "id,date,text,tags\r\n"
      "a,2020-01-01,\"he said \"\"hi\"\", then left\",AI;Robots; ai \r\n"
      "b,2020-01-02,\"two\nlines\",\r\n",
      CorpusFormat::csv);
  REQUIRE(c.size() == 2);
  CHECK(c.documents[0].text == "he said \"hi\", then left");
  CHECK(c.documents[0].tags == std::vector<std::string>{"ai", "robots"});
  CHECK(c.documents[1].text == "two\nlines");
  CHECK(c.documents[1].tags.empty());
}

TEST_CASE("round trip: load, serialize, load gives an equal corpus") {
  const auto c = sample();
  for (auto format : {CorpusFormat::jsonl, CorpusFormat::csv}) {
    const auto again = parse_corpus(serialize_corpus(c, format), format);
    CHECK(again.documents == c.documents);
  }
  const auto path = std::filesystem::temp_directory_path() / "techconv_roundtrip.csv";
  save_corpus(c, path, CorpusFormat::csv);
  CHECK(load_corpus(path).documents == c.documents);
  std::filesystem::remove(path);
}

TEST_CASE("window_filter: empty, full cover, end boundary") {
  const auto c = sample();
  CHECK(window_filter(c, parse_window("2021-01-01:2021-02-01")).size() == 0);
  CHECK(window_filter(c, parse_window("2020-01-01:2020-05-01")).size() == 3);
  const auto cut = window_filter(c, parse_window("2020-01-01:2020-04-30"));
  CHECK(cut.size() == 2);
  CHECK(c.size() == 3);
}

TEST_CASE("window_filter properties: tiling partitions, idempotence") {
  std::mt19937_64 rng(5);
  Corpus c;
  for (int i = 0; i < 200; ++i) {
    Document d;
    d.id = "d" + std::to_string(i);
    d.date = Date::from_days(Date{2019, 1, 1}.days() + static_cast<long>(rng() % 730));
    c.documents.push_back(d);
  }
  const std::vector<TimeWindow> tiles = {parse_window("2019-01-01:2019-07-01"),
                                         parse_window("2019-07-01:2020-03-15"),
                                         parse_window("2020-03-15:2021-01-01")};
  std::vector<std::string> seen;
  for (const auto& w : tiles) {
    const auto part = window_filter(c, w);
    CHECK(window_filter(part, w) == part);
    for (const auto& d : part.documents) seen.push_back(d.id);
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(seen.size() == c.size());
}
