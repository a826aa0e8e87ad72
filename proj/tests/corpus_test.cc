// Copyright 2026 The Augtag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <sstream>
#include <string>

#include "augtag/corpus.h"
#include "augtag/errors.h"
#include "test_support.h"

namespace augtag {
namespace {

using testing::Fixture;
using testing::ParseConllText;

TEST_CASE("conll parser reads sentences and interns labels in order") {
  Corpus c = ParseConllText(
      "-DOCSTART- -X- O\n\nJohn NNP B-PER\nran VBD O\n\n\nParis NNP B-LOC\n");
  REQUIRE(c.sentences.size() == 2);
  CHECK(c.sentences[0].size() == 2);
  CHECK(c.sentences[1].tokens[0].surface == "Paris");
  CHECK(c.inventory.labels() == std::vector<std::string>{"B-PER", "O", "B-LOC"});
  CHECK(c.inventory.counts() == std::vector<int64_t>{1, 1, 1});
  CHECK(c.num_tokens() == 3);
  CHECK(c.GoldLabelNames()[0] == std::vector<std::string>{"B-PER", "O"});
}

TEST_CASE("conll parser honours column selection") {
  std::istringstream in("a X B-LOC\nb Y O\n");
  Corpus c = ParseConll(in, ColumnSpec{0, 1});
  CHECK(c.inventory.labels() == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("conll parser rejects ragged rows with the line number") {
  try {
    ParseConllText("a NN O\nb O\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("conll parser rejects empty input and single-column rows") {
  CHECK_THROWS_AS(ParseConllText(""), ParseError);
  CHECK_THROWS_AS(ParseConllText("\n\n"), ParseError);
  CHECK_THROWS_AS(ParseConllText("lonely\n"), ParseError);
}

TEST_CASE("test split resolves against the training inventory") {
  Corpus train = ParseConllText("a O\nb B-LOC\nc O\n");
  ParseOptions options;
  options.split = Split::kTest;
  options.reference = &train.inventory;
  Corpus test = ParseConllText("d B-LOC\n", options);
  CHECK(test.split == Split::kTest);
  CHECK(test.inventory == train.inventory);
  CHECK(test.inventory.counts() == std::vector<int64_t>{2, 1});
  CHECK_THROWS_AS(ParseConllText("d B-PER\n", options), ParseError);
}

TEST_CASE("slot corpus strips BOS and EOS with their labels") {
  std::istringstream in(
      "# comment\n\nBOS from boston EOS\tO O B-city atis_flight\n"
      "to denver\tO B-city\n");
  Corpus c = ParseSlotCorpus(in);
  REQUIRE(c.sentences.size() == 2);
  CHECK(c.sentences[0].size() == 2);
  CHECK(c.sentences[0].tokens[1].surface == "boston");
  CHECK(c.inventory.Find("atis_flight") == kNoLabel);
  CHECK(c.inventory.counts() == std::vector<int64_t>{2, 2});
}

TEST_CASE("slot corpus errors") {
  std::istringstream missing_tab("a b O O\n");
  CHECK_THROWS_AS(ParseSlotCorpus(missing_tab), ParseError);
  std::istringstream ragged("a b\tO\n");
  CHECK_THROWS_AS(ParseSlotCorpus(ragged), ParseError);
  std::istringstream empty_record("BOS EOS\tO O\n");
  CHECK_THROWS_AS(ParseSlotCorpus(empty_record), ParseError);
}

TEST_CASE("writers round-trip through the parsers") {
  Corpus c = LoadCorpus(Fixture("train.conll"), CorpusFormat::kConll);
  std::ostringstream conll;
  WriteConll(c, conll);
  Corpus back = ParseConllText(conll.str());
  CHECK(back.GoldLabelNames() == c.GoldLabelNames());
  CHECK(back.sentences[2].tokens[1].surface == "Corp");

  std::ostringstream slots;
  WriteSlotCorpus(c, slots);
  std::istringstream in(slots.str());
  CHECK(ParseSlotCorpus(in).GoldLabelNames() == c.GoldLabelNames());
}

TEST_CASE("missing corpus file is an I/O error") {
  CHECK_THROWS_AS(LoadCorpus("/nonexistent/corpus", CorpusFormat::kConll),
                  IoError);
}

TEST_CASE("format names") {
  CHECK(ParseCorpusFormat("slots") == CorpusFormat::kSlots);
  CHECK(CorpusFormatName(CorpusFormat::kConll) == "conll");
  CHECK_THROWS_AS(ParseCorpusFormat("xml"), ValidationError);
}

TEST_CASE("normalization lowercases ASCII") {
  CHECK(NormalizeWord("PaRiS") == "paris");
}

TEST_CASE("minority threshold is a strict share cut") {
  TagInventory inv({"O", "X"}, 0.25);
  inv.AddCount(0, 3);
  inv.AddCount(1, 1);
  CHECK_FALSE(inv.IsMinority(1));  // exactly 1/4
  inv.AddCount(0, 1);
  CHECK(inv.IsMinority(1));
  CHECK_THROWS_AS(inv.set_minority_threshold(0.0), ValidationError);
  CHECK_THROWS_AS(inv.set_minority_threshold(1.5), ValidationError);
}

// Hand count of fixtures/train.conll: 38 tokens; O 26, B-LOC 7, B-PER 2,
// I-PER 1, B-ORG 1, I-ORG 1.
TEST_CASE("tag statistics on the fixture match a hand count") {
  ParseOptions options;
  options.minority_threshold = 0.1;
  Corpus c = LoadCorpus(Fixture("train.conll"), CorpusFormat::kConll, options);
  TagStatistics s = ComputeTagStatistics(c);
  CHECK(s.total_tokens == 38);
  CHECK(s.minority.size() == 4);
  CHECK(s.majority.size() == 2);
  CHECK(s.minority_tokens == 5);
  CHECK(s.majority_tokens == 33);

  std::ostringstream out;
  WriteStatisticsReport(s, c.inventory, out);
  CHECK(out.str() ==
        "minority_threshold=0.1\nminority_tag_types=4\nminority_tokens=5\n"
        "majority_tag_types=2\nmajority_tokens=33\ntotal_tag_types=6\n"
        "total_tokens=38\nminority_labels=B-PER,I-PER,B-ORG,I-ORG\n"
        "majority_labels=O,B-LOC\n");

  c.split = Split::kTest;
  CHECK_THROWS_AS(ComputeTagStatistics(c), ValidationError);
}

TEST_CASE("slot fixture parses") {
  Corpus c = LoadCorpus(Fixture("atis_sample.txt"), CorpusFormat::kSlots);
  CHECK(c.num_tokens() == 12);
  CHECK(c.inventory.size() == 3);
}

}  // namespace
}  // namespace augtag
