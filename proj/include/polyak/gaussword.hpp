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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyak {

using Letter = std::uint8_t;

// Largest rank a GaussWord can hold. The text form uses A-Z, so parsing
// and formatting are limited to 26 letters independently of this bound.
inline constexpr int kMaxRank = 16;

// Thrown for sequences that are not Gauss words. `position` is the index of
// the offending letter in the input, or -1 when no single letter is at fault.
class GaussWordError : public std::invalid_argument {
 public:
  GaussWordError(const std::string& what, int position)
      : std::invalid_argument(what), position_(position) {}
  int position() const { return position_; }

 private:
  int position_;
};

// A canonical Gauss word: every letter occurs exactly twice and letters
// first appear in the order 0, 1, 2, ... . Fixed-capacity value type; the
// unused tail of the storage is always zero so comparisons and hashing can
// look at the whole array.
class GaussWord {
 public:
  GaussWord() = default;

  // Canonicalizes an arbitrary double-occurrence sequence.
  static GaussWord canonicalize(std::span<const int> seq);
  // Parses the text form ("ABACBC", "-" or "" for the empty word). Any
  // uppercase letters may be used; the result is canonical.
  static GaussWord parse(std::string_view text);

  int rank() const { return length_ / 2; }
  int length() const { return length_; }
  bool empty() const { return length_ == 0; }
  std::span<const Letter> letters() const { return {letters_.data(), length_}; }
  Letter operator[](int i) const { return letters_[i]; }

  // Text form; the empty word renders as "-".
  std::string str() const;

  // Lexicographic on the letter sequence, shorter prefix first.
  friend std::strong_ordering operator<=>(const GaussWord& a, const GaussWord& b);
  friend bool operator==(const GaussWord& a, const GaussWord& b) = default;

  std::size_t hash() const;

 private:
  std::array<Letter, 2 * kMaxRank> letters_{};
  std::uint8_t length_ = 0;

  friend class WordBuilder;
};

// Assembles a word from a letter sequence with arbitrary (not necessarily
// canonical) labels in [0, 2*kMaxRank); finish() relabels by first
// occurrence. Used by the hot paths that build many words.
class WordBuilder {
 public:
  void push(int letter) { buf_[size_++] = static_cast<Letter>(letter); }
  void clear() { size_ = 0; }
  int size() const { return size_; }
  GaussWord finish() const;

 private:
  std::array<Letter, 4 * kMaxRank> buf_{};
  int size_ = 0;
};

struct GaussWordHash {
  std::size_t operator()(const GaussWord& w) const { return w.hash(); }
};

// Positions of the two occurrences of each letter of a canonical word.
struct Occurrences {
  std::array<std::uint8_t, kMaxRank> first{};
  std::array<std::uint8_t, kMaxRank> second{};

  explicit Occurrences(const GaussWord& w);
};

// Letters of the H2/G2 pattern xAByBAz.
struct PatternMatch2 {
  Letter outer;
  Letter inner;
  friend bool operator==(const PatternMatch2&, const PatternMatch2&) = default;
};

// Letters of the H3/G3 pattern xAByACzBCt.
struct PatternMatch3 {
  Letter a;
  Letter b;
  Letter c;
  friend bool operator==(const PatternMatch3&, const PatternMatch3&) = default;
};

using LetterMask = std::uint32_t;

// (2r - 1)!!
std::uint64_t canonical_count(int rank);

// Calls `visit` on every canonical word of the given rank, in backtracking
// order (not lexicographic).
void for_each_canonical(int rank, const std::function<void(const GaussWord&)>& visit);

// Same, restricted to the words whose first letter's second occurrence sits
// at position `second_of_first`. Splits the enumeration into 2r-1 disjoint
// shards.
void for_each_canonical_shard(int rank, int second_of_first,
                              const std::function<void(const GaussWord&)>& visit);

// All canonical words of the given rank, lexicographically sorted.
std::vector<GaussWord> enumerate_canonical(int rank);

bool has_adjacent_double(const GaussWord& w);

// Keeps only the letters in `keep` (bit i = letter i) and canonicalizes.
GaussWord induced_subword(const GaussWord& w, LetterMask keep);

// Removes both occurrences of every letter in `letters` and canonicalizes.
GaussWord delete_letters(const GaussWord& w, LetterMask letters);

inline LetterMask full_mask(const GaussWord& w) {
  return (LetterMask{1} << w.rank()) - 1;
}

// Number of letter subsets of `w` whose induced subword is isomorphic to `u`.
std::uint64_t angle_bracket(const GaussWord& u, const GaussWord& w);

std::vector<PatternMatch2> match_h2(const GaussWord& w);
std::vector<PatternMatch3> match_h3(const GaussWord& w);

}  // namespace polyak

template <>
struct std::hash<polyak::GaussWord> {
  std::size_t operator()(const polyak::GaussWord& w) const { return w.hash(); }
};
