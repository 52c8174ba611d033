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
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polyak/gaussword.hpp"
#include "polyak/presentation.hpp"
#include "polyak/smith.hpp"

namespace polyak {

// Element of Z/d_k (+) ... (+) Z/d_s; component j lies in [0, d_j).
struct Value {
  std::vector<std::uint64_t> components;

  bool is_zero() const;
  std::string str() const;  // space separated; "0" for the zero-dimensional value
  friend auto operator<=>(const Value&, const Value&) = default;
};

struct LinearCombination {
  std::vector<std::pair<std::int64_t, GaussWord>> terms;

  // Sums the coefficients of equal words and drops zeros; sorted by word.
  LinearCombination merged() const;
};

// The simplified universal invariant of degree n: the nonzero classes of
// the generators of H_n in the cyclic decomposition found by the SNF.
class InvariantTable {
 public:
  InvariantTable() = default;
  InvariantTable(int degree, std::vector<std::uint64_t> moduli);

  int degree() const { return degree_; }
  const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  const std::map<GaussWord, Value>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Adds an entry after reducing it; zero vectors are not stored.
  void set(const GaussWord& w, Value v);

  Value zero() const { return Value{std::vector<std::uint64_t>(moduli_.size(), 0)}; }
  // Class of the single generator `w` in H_n (zero if not stored).
  Value generator_value(const GaussWord& w) const;

  // acc += coef * v, componentwise modulo the moduli.
  void accumulate(Value& acc, const Value& v, std::int64_t coef) const;

  friend bool operator==(const InvariantTable&, const InvariantTable&) = default;

 private:
  int degree_ = 0;
  std::vector<std::uint64_t> moduli_;
  std::map<GaussWord, Value> entries_;
  int min_rank_ = kMaxRank + 1;
  int max_rank_ = 0;

  friend Value evaluate(const InvariantTable&, const GaussWord&);
};

struct TableBuildOptions {
  BuildOptions build;
  SnfOptions snf;
};

// Extracts the table from a presentation of H_n and its SNF (k = n - 1).
InvariantTable table_from_smith(const Presentation& p, const SmithResult& snf);

InvariantTable build_table(int n, const TableBuildOptions& opts = {});

// Sum over the subwords q of p of v(q).
Value evaluate(const InvariantTable& table, const GaussWord& p);

// (sum of coefficients, linear extension of evaluate).
std::pair<std::int64_t, Value> evaluate_combination(const InvariantTable& table,
                                                    const LinearCombination& x);

// Least power of two annihilating v.
std::uint64_t element_order(const Value& v, const std::vector<std::uint64_t>& moduli);

// Expansion of the marked letters as semi-letters: the sum over subsets T of
// `marked` of (-1)^|T| (w with T deleted), merged.
LinearCombination semiletter_resolution(const GaussWord& w, LetterMask marked);

// "# ftiv-table v1" / "degree n" / "moduli ..." / "<word> <c_k> ... <c_s>".
void save_table(std::ostream& out, const InvariantTable& table);
InvariantTable load_table(std::istream& in);

}  // namespace polyak
