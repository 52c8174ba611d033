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

// Shared by the unit tests and the acceptance runner: fixture loading,
// cached artifacts, and the randomized property checks.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polyak/classify.hpp"
#include "polyak/gaussword.hpp"
#include "polyak/invariant.hpp"
#include "polyak/presentation.hpp"

namespace polyak::testing {

struct Check {
  bool ok = true;
  std::string detail;
};

// Rows of the degree-5 reference table: value components and the words
// sharing that value.
struct ValueRow {
  std::vector<std::uint64_t> value;
  std::vector<GaussWord> words;
};
std::vector<ValueRow> load_gamma5_rows();

// Rows of the degree-6 classification of words up to rank 5. `open_split`
// is non-empty for the row whose two halves are not known to be homotopic.
struct ClassRow {
  std::vector<GaussWord> words;
  std::vector<GaussWord> open_split;
};
std::vector<ClassRow> load_gamma6_classes();

struct PatternRow {
  GaussWord word;
  std::vector<std::string> h2;  // "AB" = outer A, inner B
  std::vector<std::string> h3;  // "ABC"
};
std::vector<PatternRow> load_patterns();

// Built once per process.
const Presentation& presentation(int n);
const InvariantTable& table(int n);

GaussWord random_word(int rank, std::mt19937_64& rng);

// Random moves applied to random words never change the invariant.
Check homotopy_invariance(const InvariantTable& t, int moves, std::uint64_t seed);
// Words with degree+1 marked letters resolve to zero.
Check semiletter_degree(const InvariantTable& t, int samples, std::uint64_t seed);
// Every relation of the presentation evaluates to zero.
Check relator_vanishing(const Presentation& p, const InvariantTable& t);
// 2^{n-m+1} v(w) = 0 for every entry of rank m.
Check torsion_bound(const InvariantTable& t);
// Sparse mod-2^k SNF against the dense integer SNF on random small matrices.
Check snf_oracle(int matrices, std::uint64_t seed);
// Divisors do not depend on the order of the relation columns.
Check column_shuffle(const Presentation& p, int k, int shuffles, std::uint64_t seed);

// The classification's partition equals the given blocks plus one block of
// all remaining words; exactly `split_pairs` pairs are unresolved and every
// recorded trace replays. With `irreducible_only`, words with an adjacent
// double letter are left out of the comparison.
Check partition_matches(const Classification& c, const std::vector<std::vector<GaussWord>>& expect,
                        std::size_t split_pairs, bool irreducible_only = false);
// Classification up to rank <= 4 against the degree-5 reference rows.
Check gamma5_classification(const Classification& c);
// Classification up to rank 5 against the degree-6 reference classes, which
// list irreducible words only.
Check gamma6_classification(const Classification& c);

}  // namespace polyak::testing
