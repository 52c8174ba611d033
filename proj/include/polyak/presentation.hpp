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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "polyak/gaussword.hpp"

namespace polyak {

using GeneratorId = std::uint32_t;

// Irreducible canonical words of rank 1..n, indexed rank-major then
// lexicographically. These generate H_n.
class GeneratorTable {
 public:
  GeneratorTable() = default;
  GeneratorTable(int degree, std::vector<GaussWord> words);

  int degree() const { return degree_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<GaussWord>& words() const { return words_; }
  const GaussWord& word(GeneratorId id) const { return words_[id]; }
  std::optional<GeneratorId> find(const GaussWord& w) const;

 private:
  int degree_ = 0;
  std::vector<GaussWord> words_;
  std::unordered_map<GaussWord, GeneratorId> index_;
};

struct Term {
  GeneratorId generator;
  std::int32_t coef;
  friend auto operator<=>(const Term&, const Term&) = default;
};

// Sparse integer relation among generators. Normalized vectors have terms
// sorted by generator id, no zero coefficients, and a positive leading
// coefficient.
struct RelationVector {
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  friend auto operator<=>(const RelationVector&, const RelationVector&) = default;
};

// Merges duplicate ids, drops zeros, sorts, and flips the sign so the
// lowest-indexed coefficient is positive.
RelationVector normalize(std::vector<Term> terms);

struct RelationBatch {
  std::vector<RelationVector> relations;  // normalized, nonempty, one per surviving match
  std::uint64_t matches = 0;              // every pattern match, empty or not
  std::uint64_t nonempty = 0;
};

struct RawCounts {
  std::uint64_t g2_matches = 0;
  std::uint64_t g3_matches = 0;
  std::uint64_t g2_nonempty = 0;
  std::uint64_t g3_nonempty = 0;
};

struct Presentation {
  int degree = 0;
  GeneratorTable generators;
  std::vector<RelationVector> relations;  // sorted, pairwise distinct
  RawCounts raw;
};

struct PresentationCounts {
  int degree = 0;
  std::uint64_t generators = 0;
  std::uint64_t unique_relations = 0;
  RawCounts raw;
};

struct BuildOptions {
  int workers = 0;               // 0 = hardware concurrency
  std::ostream* log = nullptr;   // progress lines, if set
};

GeneratorTable build_generators(int n);

// Generator id of `w`, or nullopt when the word vanishes in H_n (empty,
// rank above n, or containing an adjacent double). Throws std::logic_error
// if an irreducible word of rank <= n is missing from the table.
std::optional<GeneratorId> truncate_term(const GaussWord& w, const GeneratorTable& table);

// Relations from every match in the canonical words of rank <= n+1.
RelationBatch g2_relations(const GeneratorTable& table, const BuildOptions& opts = {});
RelationBatch g3_relations(const GeneratorTable& table, const BuildOptions& opts = {});

// Relation of a single G2 / G3 match, normalized (possibly empty).
RelationVector g2_relation(const GaussWord& w, const PatternMatch2& m, const GeneratorTable& table);
RelationVector g3_relation(const GaussWord& w, const PatternMatch3& m, const GeneratorTable& table);

Presentation build_presentation(int n, const BuildOptions& opts = {});

// Same counts as build_presentation without keeping the relations; used for
// degrees where only the sizes matter.
PresentationCounts count_presentation(int n, const BuildOptions& opts = {});

void write_presentation(std::ostream& out, const Presentation& p);
Presentation read_presentation(std::istream& in);

}  // namespace polyak
