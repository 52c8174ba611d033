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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "polyak/gaussword.hpp"
#include "polyak/homotopy.hpp"
#include "polyak/invariant.hpp"

namespace polyak {

// A recorded homotopy between two words of the same class.
struct Link {
  GaussWord from;
  GaussWord to;
  std::vector<TraceStep> trace;
};

struct HomotopyClass {
  Value value;
  std::vector<GaussWord> words;  // sorted; words[0] is the representative
  std::vector<Link> links;       // spanning tree over `words`
};

struct Classification {
  int max_rank = 0;
  int degree = 0;
  // Ordered by value, then by representative.
  std::vector<HomotopyClass> classes;
  // Index pairs of classes with equal values that search could not join.
  std::vector<std::pair<std::size_t, std::size_t>> unresolved;

  // Index of the class holding `w`, or classes.size() if none.
  std::size_t class_of(const GaussWord& w) const;
};

struct ClassifyOptions {
  int rank_cap = 0;                              // 0: search default
  std::size_t node_budget = kDefaultNodeBudget;
  int workers = 0;
  std::ostream* log = nullptr;
};

// Classifies every canonical word of rank <= max_rank.
Classification classify(int max_rank, const InvariantTable& table, const ClassifyOptions& opts = {});
// Classifies the given words only (duplicates removed). Searches may pass
// through unlisted words.
Classification classify_words(std::vector<GaussWord> words, const InvariantTable& table,
                              const ClassifyOptions& opts = {});

// Human-readable blocks, one per class, then the unresolved pairs.
void write_report(std::ostream& out, const Classification& c);
// One line per word: "<word> <class-id> <value-components>".
void write_assignments(std::ostream& out, const Classification& c);

}  // namespace polyak
