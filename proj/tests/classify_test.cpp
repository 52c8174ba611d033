// Copyright 2026 The Polyak Authors.
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


#include <set>
#include <sstream>

#include "doctest.h"
#include "polyak/classify.hpp"
#include "support.hpp"

namespace polyak {
namespace {

GaussWord W(const char* s) { return GaussWord::parse(s); }

TEST_CASE("small ranks collapse to one class") {
  const Classification c = classify(3, testing::table(4));
  REQUIRE(c.classes.size() == 1);
  CHECK(c.classes[0].words.size() == 1 + 1 + 3 + 15);
  CHECK(c.classes[0].words.front() == W("-"));
  CHECK(c.unresolved.empty());
  CHECK(testing::partition_matches(c, {}, 0).ok);

  const Classification e = classify(2, build_table(1));
  CHECK(e.classes.size() == 1);
  std::ostringstream os;
  write_report(os, e);
  CHECK(os.str().rfind("# classification max-rank 2 degree 1\nclasses 1\n", 0) == 0);
}

TEST_CASE("rank 4 under the degree 5 invariant") {
  const Classification c = classify(4, testing::table(5));
  CHECK(c.classes.size() == 4);
  const testing::Check r = testing::gamma5_classification(c);
  INFO(r.detail);
  CHECK(r.ok);
}

TEST_CASE("classes never mix invariant values") {
  const InvariantTable& t = testing::table(5);
  const Classification c = classify(4, t);
  std::set<Value> values;
  for (const HomotopyClass& hc : c.classes) {
    for (const GaussWord& w : hc.words) CHECK(evaluate(t, w) == hc.value);
    values.insert(hc.value);
  }
  // Without unresolved pairs, values and classes correspond one to one.
  CHECK(values.size() == c.classes.size());
}

TEST_CASE("classifying the representatives again changes nothing") {
  const Classification c = classify(4, testing::table(5));
  std::vector<GaussWord> reps;
  for (const HomotopyClass& hc : c.classes) reps.push_back(hc.words.front());
  const Classification again = classify_words(reps, testing::table(5));
  REQUIRE(again.classes.size() == c.classes.size());
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    CHECK(again.classes[i].words == std::vector<GaussWord>{c.classes[i].words.front()});
    CHECK(again.classes[i].value == c.classes[i].value);
  }
  // Duplicates are dropped.
  const Classification dup = classify_words({W("ABAB"), W("ABAB"), W("-")}, testing::table(5));
  REQUIRE(dup.classes.size() == 1);
  CHECK(dup.classes[0].words.size() == 2);
  CHECK(dup.class_of(W("ABAB")) == 0);
  CHECK(dup.class_of(W("ABACDCBD")) == 1);
}

TEST_CASE("results do not depend on the worker count") {
  ClassifyOptions one, many;
  one.workers = 1;
  many.workers = 4;
  std::ostringstream a, b;
  write_assignments(a, classify(4, testing::table(5), one));
  write_assignments(b, classify(4, testing::table(5), many));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) {
    std::istringstream fields(line);
    std::string word;
    std::size_t id = 0;
    int components = 0;
    fields >> word >> id;
    for (std::uint64_t x; fields >> x;) ++components;
    CHECK(components == 7);
    ++lines;
  }
  CHECK(lines == 1 + 1 + 3 + 15 + 105);
}

TEST_CASE("rank 5 under the degree 6 invariant") {
  const Classification c = classify(5, testing::table(6));
  CHECK(c.classes.size() == 40);
  const testing::Check r = testing::gamma6_classification(c);
  INFO(r.detail);
  CHECK(r.ok);
  std::ostringstream os;
  write_report(os, c);
  CHECK(os.str().find("unresolved 1\n") != std::string::npos);
}

}  // namespace
}  // namespace polyak
