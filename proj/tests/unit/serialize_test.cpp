#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <ertrace/serialize.hpp>

#include "expect_error.hpp"
#include "test_support.hpp"

using namespace ertrace;

namespace {

AnnotatedEntry plain(DataEntry entry, const char* method = "original") {
  return AnnotatedEntry{std::move(entry), {}, {}, MethodId(method)};
}

const char* kViewSelectionLeft =
    "COL title VAL a formal perspective on the view selection problem COL authors VAL rada "
    "chirkova, dan suciu, alon y. halevy COL venue VAL vldb j. COL year VAL 2002";
const char* kViewSelectionRight =
    "COL title VAL a formal perspective on the view selection problem COL authors VAL rada "
    "chirkova, alon y. halevy, dan suciu COL venue VAL very large data bases COL year VAL 2002";

AnnotatedEntry mariposa_doduo() {
  AnnotatedEntry e;
  e.entry = DataEntry{{{"title", "the mariposa distributed database management system"},
                       {"authors", "jeff sidell"},
                       {"venue", "sigmod record"},
                       {"year", "1996"}}};
  e.column_types = {{"title", "business.industry"},
                    {"authors", "people.person"},
                    {"venue", "organization.organization"},
                    {"year", "time.event"}};
  e.method = MethodId("doduo");
  return e;
}

EntityMentionAnnotation mention(const DataEntry& entry, const std::string& column,
                                const std::string& text, const std::string& type) {
  const auto& value = entry.find(column)->value;
  const auto start = value.find(text);
  return {column, start, start + text.size(), text, type};
}

}  // namespace

TEST(SerializeGolden, ViewSelectionPairWithoutAugmentation) {
  const auto left = plain(ertrace::testing::view_selection_left());
  const auto right = plain(ertrace::testing::view_selection_right());
  EXPECT_EQ(serialize_entry(left, PromptStyle::kSlash).text, kViewSelectionLeft);
  EXPECT_EQ(serialize_entry(right, PromptStyle::kSlash).text, kViewSelectionRight);

  const auto pair = serialize_pair(2407, left, right, PromptStyle::kSlash);
  EXPECT_EQ(pair.text, std::string(kViewSelectionLeft) + " " + kViewSelectionRight);
  EXPECT_EQ(pair.left, kViewSelectionLeft);
  EXPECT_EQ(pair.right, kViewSelectionRight);
  EXPECT_EQ(pair.row_id, 2407u);
  EXPECT_EQ(pair.text.find("[CLS]"), std::string::npos);
}

TEST(PromptGolden, ColumnTypes) {
  const ColumnTypeAnnotation song{"name", "song_name"};
  const ColumnTypeAnnotation software{"title", "computer.software"};
  const ColumnTypeAnnotation venue{"venue", "organization.organization"};
  EXPECT_EQ(apply_column_prompt("name", &song, PromptStyle::kSlash), "name / song_name");
  EXPECT_EQ(apply_column_prompt("title", &software, PromptStyle::kSlash),
            "title / computer.software");
  EXPECT_EQ(apply_column_prompt("year", nullptr, PromptStyle::kSlash), "year");
  EXPECT_EQ(apply_column_prompt("venue", &venue, PromptStyle::kSpace),
            "venue organization.organization");
}

TEST(PromptGolden, EntityMentionsInPlace) {
  const std::string song =
      "Illusion ( feat . Echosmith ) Zedd True Colors Dance, Music, Electronic 2015 Interscope "
      "Records 6:30";
  const std::vector<EntityMentionAnnotation> single{{"name", 0, 8, "Illusion", "single"}};
  EXPECT_EQ(apply_value_prompt(song, single, PromptStyle::kSlash),
            "Illusion / single ( feat . Echosmith ) Zedd True Colors Dance, Music, Electronic "
            "2015 Interscope Records 6:30");

  const std::string title =
      "the demarcation protocol: a technique for maintaining constraints in distributed "
      "database systems vldb j. 1994";
  const std::vector<EntityMentionAnnotation> protocol{
      {"title", 0, 24, "the demarcation protocol", "computer network protocol"}};
  EXPECT_EQ(apply_value_prompt(title, protocol, PromptStyle::kSlash),
            "the demarcation protocol / computer network protocol: a technique for maintaining "
            "constraints in distributed database systems vldb j. 1994");
}

TEST(PromptGolden, RightToLeftSplice) {
  const std::vector<EntityMentionAnnotation> m{{"c", 2, 3, "b", "y"}, {"c", 0, 1, "a", "x"}};
  EXPECT_EQ(apply_value_prompt("a b a", m, PromptStyle::kSlash), "a / x b / y a");
  EXPECT_EQ(apply_value_prompt("a b a", {}, PromptStyle::kSpace), "a b a");
}

TEST(PromptGolden, OverlapRejected) {
  const std::vector<EntityMentionAnnotation> m{{"c", 0, 3, "a b", "x"}, {"c", 2, 5, "b a", "y"}};
  EXPECT_ERROR_CODE(apply_value_prompt("a b a", m, PromptStyle::kSlash),
                    ErrorCode::kOverlappingMentions);
}

TEST(SerializeGolden, DoduoColumnTypesBothConnectors) {
  const auto e = mariposa_doduo();
  EXPECT_EQ(serialize_entry(e, PromptStyle::kSlash).text,
            "COL title / business.industry VAL the mariposa distributed database management "
            "system COL authors / people.person VAL jeff sidell COL venue / "
            "organization.organization VAL sigmod record COL year / time.event VAL 1996");
  EXPECT_EQ(serialize_entry(e, PromptStyle::kSpace).text,
            "COL title business.industry VAL the mariposa distributed database management system "
            "COL authors people.person VAL jeff sidell COL venue organization.organization VAL "
            "sigmod record COL year time.event VAL 1996");
}

TEST(SerializeGolden, DoduoWithParenthesizedEntityTypes) {
  AnnotatedEntry e;
  e.entry = DataEntry{{{"title", "reminiscences on influential papers"},
                       {"authors",
                        "hector garcia-molina , patricia g. selinger , tomasz imielinski , david "
                        "maier , jeffrey d. ullman , richard t. snodgrass"},
                       {"venue", "sigmod record"},
                       {"year", "1998"}}};
  e.column_types = {{"title", "business.industry"},
                    {"authors", "people.person"},
                    {"venue", "organization.organization"},
                    {"year", "time.event"}};
  e.mentions = {mention(e.entry, "authors", "hector garcia-molina", "(scientist)"),
                mention(e.entry, "venue", "sigmod", "(album)"),
                mention(e.entry, "year", "1998", "(periodic process)")};
  e.method = MethodId("doduo_el");
  EXPECT_EQ(serialize_entry(e, PromptStyle::kSpace).text,
            "COL title business.industry VAL reminiscences on influential papers COL authors "
            "people.person VAL hector garcia-molina (scientist) , patricia g. selinger , tomasz "
            "imielinski , david maier , jeffrey d. ullman , richard t. snodgrass COL venue "
            "organization.organization VAL sigmod (album) record COL year time.event VAL 1998 "
            "(periodic process)");
}

TEST(Serialize, EmptyValue) {
  EXPECT_EQ(serialize_entry(plain(DataEntry{{{"t", ""}}}), PromptStyle::kSlash).text, "COL t VAL ");
}

TEST(Serialize, PairOfEntryWithItself) {
  const auto e = plain(DataEntry{{{"a", "x"}}});
  EXPECT_EQ(serialize_pair(0, e, e, PromptStyle::kSlash).text, "COL a VAL x COL a VAL x");
}

TEST(Serialize, PairIsOrderSensitive) {
  const auto l = plain(ertrace::testing::view_selection_left());
  const auto r = plain(ertrace::testing::view_selection_right());
  EXPECT_NE(serialize_pair(0, l, r, PromptStyle::kSlash).text,
            serialize_pair(0, r, l, PromptStyle::kSlash).text);
}

TEST(Serialize, PairMethodMismatch) {
  const auto l = plain(DataEntry{{{"a", "x"}}}, "original");
  const auto r = plain(DataEntry{{{"a", "x"}}}, "doduo");
  EXPECT_ERROR_CODE(serialize_pair(0, l, r, PromptStyle::kSlash), ErrorCode::kMethodMismatch);
}

TEST(Parse, TwoColumns) {
  const auto e = parse_serialized("COL a VAL 1 COL b VAL 2");
  EXPECT_EQ(e, (DataEntry{{{"a", "1"}, {"b", "2"}}}));
}

TEST(Parse, MissingValueMarker) {
  EXPECT_ERROR_CODE(parse_serialized("COL a VAL x COL y"), ErrorCode::kMalformed);
  EXPECT_ERROR_CODE(parse_serialized("a VAL x"), ErrorCode::kMalformed);
}

TEST(Parse, ReservedMarkerInPayload) {
  EXPECT_ERROR_CODE(parse_serialized("COL a VAL x VAL y"), ErrorCode::kAmbiguousSerialization);
}

TEST(Parse, EmptyValueRoundTrips) {
  EXPECT_EQ(parse_serialized("COL t VAL "), (DataEntry{{{"t", ""}}}));
}

namespace {

std::string random_word(std::mt19937_64& rng) {
  static const char* kWords[] = {"vldb", "j.", "data", "Colour", "value", "x", "COLA", "VALUE",
                                 "2002", "garcia-molina", ",", "/"};
  return kWords[rng() % std::size(kWords)];
}

std::string random_phrase(std::mt19937_64& rng, std::size_t max_words) {
  std::string out;
  const auto n = 1 + rng() % max_words;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += random_word(rng);
  }
  return out;
}

// A reserved-marker-free entry with distinct column names and annotations
// that respect the span invariants.
AnnotatedEntry random_annotated(std::mt19937_64& rng) {
  AnnotatedEntry e;
  e.method = MethodId("m");
  const auto columns = 1 + rng() % 5;
  for (std::size_t c = 0; c < columns; ++c) {
    const std::string name = "c" + std::to_string(c) + (rng() % 2 ? "_" + random_word(rng) : "");
    e.entry.columns.push_back({name, random_phrase(rng, 6)});
    if (rng() % 2) e.column_types.push_back({name, "type." + random_word(rng)});
    const auto& value = e.entry.columns.back().value;
    std::size_t pos = 0;
    while (pos < value.size() && rng() % 3 == 0) {
      const auto end = value.find(' ', pos);
      const auto stop = end == std::string::npos ? value.size() : end;
      if (stop > pos) {
        e.mentions.push_back({name, pos, stop, value.substr(pos, stop - pos), random_word(rng)});
      }
      pos = stop + 1;
      while (pos < value.size() && rng() % 2) {
        const auto next = value.find(' ', pos);
        pos = next == std::string::npos ? value.size() : next + 1;
      }
    }
  }
  return e;
}

}  // namespace

TEST(SerializeProperties, IdentityIgnoresStyle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto e = random_annotated(rng);
    e.column_types.clear();
    e.mentions.clear();
    EXPECT_EQ(serialize_entry(e, PromptStyle::kSlash).text,
              serialize_entry(e, PromptStyle::kSpace).text);
  }
}

TEST(SerializeProperties, AnnotationsNeverShorten) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto e = random_annotated(rng);
    auto bare = e;
    bare.column_types.clear();
    bare.mentions.clear();
    for (auto style : {PromptStyle::kSlash, PromptStyle::kSpace}) {
      const auto full = serialize_entry(e, style).text.size();
      EXPECT_GE(full, serialize_entry(bare, style).text.size());
      // Dropping any single annotation never lengthens the text either.
      if (!e.mentions.empty()) {
        auto fewer = e;
        fewer.mentions.pop_back();
        EXPECT_LE(serialize_entry(fewer, style).text.size(), full);
      }
    }
  }
}

TEST(SerializeProperties, ParseRecoversAugmentedColumns) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto e = random_annotated(rng);
    const auto style = i % 2 ? PromptStyle::kSlash : PromptStyle::kSpace;
    const auto parsed = parse_serialized(serialize_entry(e, style).text);
    ASSERT_EQ(parsed.size(), e.entry.size());
    for (std::size_t c = 0; c < parsed.size(); ++c) {
      const auto& col = e.entry.columns[c];
      const auto mentions = e.mentions_for(col.name);
      EXPECT_EQ(parsed.columns[c].name,
                apply_column_prompt(col.name, e.column_type(col.name), style));
      EXPECT_EQ(parsed.columns[c].value, apply_value_prompt(col.value, mentions, style));
    }
  }
}

TEST(SerializeProperties, ColumnOrderMatters) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    auto e = random_annotated(rng);
    if (e.entry.size() < 2) continue;
    const auto before = serialize_entry(e, PromptStyle::kSlash).text;
    auto& cols = e.entry.columns;
    std::vector<std::size_t> order(cols.size());
    std::iota(order.begin(), order.end(), 0);
    while (std::next_permutation(order.begin(), order.end())) {
      auto permuted = e;
      for (std::size_t k = 0; k < order.size(); ++k) permuted.entry.columns[k] = cols[order[k]];
      EXPECT_NE(serialize_entry(permuted, PromptStyle::kSlash).text, before);
    }
  }
}
