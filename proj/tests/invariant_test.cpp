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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "polyak/invariant.hpp"
#include "support.hpp"

namespace polyak {
namespace {

GaussWord W(const char* s) { return GaussWord::parse(s); }

const std::vector<std::string> kGamma4Words{"ABACDCBD", "ABCACDBD", "ABCADBDC",
                                            "ABCBDACD", "ABCDBDAC", "ABCDCADB"};

TEST_CASE("degree 4 table is the six listed words") {
  const InvariantTable& t = testing::table(4);
  CHECK(t.moduli() == std::vector<std::uint64_t>{2});
  std::vector<std::string> words;
  for (const auto& [w, v] : t.entries()) {
    words.push_back(w.str());
    CHECK(v.components == std::vector<std::uint64_t>{1});
  }
  CHECK(words == kGamma4Words);
}

TEST_CASE("degree 3 and lower tables are empty") {
  for (int n = 1; n <= 3; ++n) {
    const InvariantTable t = build_table(n);
    CHECK(t.size() == 0);
    CHECK(t.moduli().empty());
    CHECK(evaluate(t, W("ABACBC")).str() == "0");
  }
}

TEST_CASE("degree 4 evaluation") {
  const InvariantTable& t = testing::table(4);
  CHECK(evaluate(t, W("ABACDCBD")).components == std::vector<std::uint64_t>{1});
  CHECK(evaluate(t, W("-")).is_zero());
  CHECK(evaluate(t, W("ABCDABCD")).is_zero());
}

// Independent evaluation: sum over stored words of <w, p> v(w), with the
// subword counts taken from the string oracle.
Value oracle_evaluate(const InvariantTable& t, const GaussWord& p) {
  Value acc = t.zero();
  for (const auto& [w, v] : t.entries()) {
    t.accumulate(acc, v, static_cast<std::int64_t>(oracle::angle(w.str(), p.str())));
  }
  return acc;
}

TEST_CASE("evaluation agrees with subword counting") {
  std::mt19937_64 rng(31);
  for (int n : {4, 5}) {
    const InvariantTable& t = testing::table(n);
    for (int i = 0; i < 60; ++i) {
      const GaussWord p = testing::random_word(3 + static_cast<int>(rng() % 5), rng);
      CHECK(evaluate(t, p) == oracle_evaluate(t, p));
    }
  }
}

// Degree-5 reference rows: vectors in (Z/2)^6 (+) Z/4.
const std::vector<std::uint64_t> kGamma5Moduli{2, 2, 2, 2, 2, 2, 4};

std::vector<std::uint64_t> add_ref(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = (a[j] + b[j]) % kGamma5Moduli[j];
  return out;
}

TEST_CASE("degree 5 table matches the reference rows up to isomorphism") {
  const InvariantTable& t = testing::table(5);
  CHECK(t.moduli() == kGamma5Moduli);
  const auto rows = testing::load_gamma5_rows();
  REQUIRE(rows.size() == 30);

  // Same nonzero set.
  std::set<GaussWord> expect_words;
  for (const auto& row : rows) expect_words.insert(row.words.begin(), row.words.end());
  std::set<GaussWord> got_words;
  for (const auto& [w, v] : t.entries()) got_words.insert(w);
  CHECK(got_words == expect_words);

  // Same partition, and orders agree row by row.
  std::vector<Value> row_value;
  for (const auto& row : rows) {
    const Value v = t.generator_value(row.words[0]);
    for (const GaussWord& w : row.words) CHECK(t.generator_value(w) == v);
    row_value.push_back(v);
    CHECK(element_order(v, t.moduli()) ==
          element_order(Value{row.value}, kGamma5Moduli));
  }
  CHECK(std::set<Value>(row_value.begin(), row_value.end()).size() == rows.size());

  // The row values add like the reference vectors: for every pair of rows
  // the sum is zero, a third row, or neither, identically on both sides.
  std::map<std::vector<std::uint64_t>, std::size_t> ref_index;
  std::map<Value, std::size_t> got_index;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ref_index[rows[i].value] = i;
    got_index[row_value[i]] = i;
  }
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a; b < rows.size(); ++b) {
      const auto ref = add_ref(rows[a].value, rows[b].value);
      Value got = row_value[a];
      t.accumulate(got, row_value[b], 1);
      const bool ref_zero = std::all_of(ref.begin(), ref.end(), [](auto x) { return x == 0; });
      CHECK(ref_zero == got.is_zero());
      const auto r = ref_index.find(ref);
      const auto g = got_index.find(got);
      CHECK((r == ref_index.end()) == (g == got_index.end()));
      if (r != ref_index.end() && g != got_index.end()) CHECK(r->second == g->second);
    }
  }
}

TEST_CASE("degree 5 element orders and a doubling relation") {
  const InvariantTable& t = testing::table(5);
  CHECK(element_order(t.generator_value(W("ABACDCBD")), t.moduli()) == 4);
  CHECK(element_order(t.generator_value(W("ABCACDBD")), t.moduli()) == 4);
  CHECK(element_order(t.generator_value(W("ABACBDCD")), t.moduli()) == 2);
  Value twice = t.zero();
  t.accumulate(twice, t.generator_value(W("ABACDCBD")), 2);
  CHECK(twice == t.generator_value(W("ABACDECBDE")));
  CHECK_FALSE(twice.is_zero());
}

TEST_CASE("element order") {
  const std::vector<std::uint64_t> moduli{2, 4, 8};
  CHECK(element_order(Value{{0, 0, 0}}, moduli) == 1);
  CHECK(element_order(Value{{1, 0, 0}}, moduli) == 2);
  CHECK(element_order(Value{{0, 2, 0}}, moduli) == 2);
  CHECK(element_order(Value{{1, 1, 4}}, moduli) == 4);
  CHECK(element_order(Value{{0, 0, 3}}, moduli) == 8);
}

TEST_CASE("evaluate_combination") {
  const InvariantTable& t = testing::table(5);
  const GaussWord w = W("ABACDCBD");
  auto [sum, v] = evaluate_combination(t, {{{1, w}}});
  CHECK(sum == 1);
  CHECK(v == evaluate(t, w));
  auto [sum0, v0] = evaluate_combination(t, {{{2, w}, {-2, w}}});
  CHECK(sum0 == 0);
  CHECK(v0.is_zero());
  for (int n = 3; n <= 6; ++n) {
    auto [s, g2] = evaluate_combination(testing::table(n), {{{1, W("ABCACB")}, {2, W("ABAB")}}});
    CHECK(s == 3);
    CHECK(g2.is_zero());
  }
}

TEST_CASE("semi-letter resolution examples") {
  using LC = std::vector<std::pair<std::int64_t, GaussWord>>;
  CHECK(semiletter_resolution(W("AA"), 0b1).terms == LC{{-1, W("-")}, {1, W("AA")}});
  CHECK(semiletter_resolution(W("ABACBC"), 0).terms == LC{{1, W("ABACBC")}});
  CHECK(semiletter_resolution(W("ABAB"), 0b11).terms ==
        LC{{1, W("-")}, {-2, W("AA")}, {1, W("ABAB")}});
}

TEST_CASE("semi-letter degree bound") {
  for (int n : {4, 5}) {
    const testing::Check c = testing::semiletter_degree(testing::table(n), 200, 40 + n);
    INFO(c.detail);
    CHECK(c.ok);
  }
  // With only n marks the invariant need not vanish: ABACDCBD itself.
  const InvariantTable& t4 = testing::table(4);
  CHECK_FALSE(evaluate_combination(t4, semiletter_resolution(W("ABACDCBD"), 0b1111)).second.is_zero());
}

TEST_CASE("relators vanish and torsion is bounded") {
  for (int n = 4; n <= 6; ++n) {
    CAPTURE(n);
    const testing::Check r = testing::relator_vanishing(testing::presentation(n), testing::table(n));
    INFO(r.detail);
    CHECK(r.ok);
    const testing::Check b = testing::torsion_bound(testing::table(n));
    INFO(b.detail);
    CHECK(b.ok);
  }
}

TEST_CASE("homotopy invariance under random moves") {
  const testing::Check c = testing::homotopy_invariance(testing::table(5), 1500, 7);
  INFO(c.detail);
  CHECK(c.ok);
}

TEST_CASE("tables round-trip through files") {
  for (int n : {4, 5}) {
    const InvariantTable& t = testing::table(n);
    std::stringstream ss;
    save_table(ss, t);
    const InvariantTable back = load_table(ss);
    CHECK(back == t);
  }
  std::stringstream ss;
  save_table(ss, testing::table(4));
  CHECK(ss.str().rfind("# ftiv-table v1\ndegree 4\nmoduli 2\nABACDCBD 1\n", 0) == 0);
}

TEST_CASE("malformed tables are rejected") {
  const char* bad[] = {
      "",
      "# ftiv-table v2\ndegree 4\nmoduli 2\n",
      "# ftiv-table v1\ndegree 4\nmoduli 3\n",
      "# ftiv-table v1\ndegree 4\nmoduli 4 2\n",
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABACDCBD 2\n",     // component >= modulus
      "# ftiv-table v1\ndegree 4\nmoduli 2\nBABCDCAD 1\n",     // not canonical
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABBA 1\n",         // reducible
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABCDEABCDE 1\n",   // rank above degree
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABACDCBD 0\n",     // zero stored
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABACDCBD 1 1\n",   // too many components
      "# ftiv-table v1\ndegree 4\nmoduli 2\nABACDCBD 1\nABACDCBD 1\n",
      "# ftiv-table v1\ndegree 4\nmoduli 8\nABACDCBD 1\n",     // needs 2v = 0
  };
  for (std::size_t i = 0; i < std::size(bad); ++i) {
    CAPTURE(i);
    std::istringstream in(bad[i]);
    CHECK_THROWS(load_table(in));
  }
  std::istringstream ok("# ftiv-table v1\ndegree 5\nmoduli 8\nABACDCBD 4\n");
  CHECK_NOTHROW(load_table(ok));
}

}  // namespace
}  // namespace polyak
