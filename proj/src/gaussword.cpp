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

#include "polyak/gaussword.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace polyak {

GaussWord GaussWord::canonicalize(std::span<const int> seq) {
  if (seq.size() > 2 * static_cast<std::size_t>(kMaxRank)) {
    throw GaussWordError("word longer than " + std::to_string(2 * kMaxRank) + " letters", -1);
  }
  std::map<int, int> count;
  std::map<int, int> first_seen;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int& c = count[seq[i]];
    if (++c > 2) {
      throw GaussWordError("letter occurs more than twice at position " + std::to_string(i),
                           static_cast<int>(i));
    }
    first_seen.emplace(seq[i], static_cast<int>(i));
  }
  for (const auto& [letter, c] : count) {
    if (c != 2) {
      int pos = first_seen[letter];
      throw GaussWordError("letter occurs only once at position " + std::to_string(pos), pos);
    }
  }
  std::map<int, Letter> relabel;
  GaussWord w;
  for (int x : seq) {
    auto it = relabel.find(x);
    if (it == relabel.end()) {
      it = relabel.emplace(x, static_cast<Letter>(relabel.size())).first;
    }
    w.letters_[w.length_++] = it->second;
  }
  return w;
}

GaussWord GaussWord::parse(std::string_view text) {
  if (text == "-") return {};
  std::vector<int> seq;
  seq.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch < 'A' || ch > 'Z') {
      throw GaussWordError(std::string("invalid character '") + ch + "' at position " +
                               std::to_string(i),
                           static_cast<int>(i));
    }
    seq.push_back(ch - 'A');
  }
  return canonicalize(seq);
}

std::string GaussWord::str() const {
  if (length_ == 0) return "-";
  std::string s;
  s.reserve(length_);
  for (int i = 0; i < length_; ++i) s.push_back(static_cast<char>('A' + letters_[i]));
  return s;
}

std::strong_ordering operator<=>(const GaussWord& a, const GaussWord& b) {
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.begin() + a.length_,
                                                b.letters_.begin(), b.letters_.begin() + b.length_);
}

std::size_t GaussWord::hash() const {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL ^ length_;
  for (int i = 0; i < length_; ++i) {
    h ^= letters_[i];
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

GaussWord WordBuilder::finish() const {
  std::array<std::uint8_t, 4 * kMaxRank> relabel;
  relabel.fill(0xff);
  GaussWord w;
  Letter next = 0;
  for (int i = 0; i < size_; ++i) {
    std::uint8_t& r = relabel[buf_[i]];
    if (r == 0xff) r = next++;
    w.letters_[i] = r;
  }
  w.length_ = static_cast<std::uint8_t>(size_);
  return w;
}

Occurrences::Occurrences(const GaussWord& w) {
  std::array<bool, kMaxRank> seen{};
  for (int i = 0; i < w.length(); ++i) {
    Letter x = w[i];
    if (!seen[x]) {
      first[x] = static_cast<std::uint8_t>(i);
      seen[x] = true;
    } else {
      second[x] = static_cast<std::uint8_t>(i);
    }
  }
}

std::uint64_t canonical_count(int rank) {
  std::uint64_t n = 1;
  for (int k = 2 * rank - 1; k > 1; k -= 2) n *= static_cast<std::uint64_t>(k);
  return n;
}

namespace {

// Fills the leftmost empty slot with the next letter and tries every empty
// slot to its right for the second occurrence.
class Enumerator {
 public:
  Enumerator(int rank, const std::function<void(const GaussWord&)>& visit)
      : length_(2 * rank), visit_(visit) {
    slots_.fill(-1);
  }

  void run(int next_letter, int start) {
    int first = start;
    while (first < length_ && slots_[first] >= 0) ++first;
    if (first == length_) {
      emit();
      return;
    }
    slots_[first] = next_letter;
    for (int second = first + 1; second < length_; ++second) {
      if (slots_[second] >= 0) continue;
      slots_[second] = next_letter;
      run(next_letter + 1, first + 1);
      slots_[second] = -1;
    }
    slots_[first] = -1;
  }

  void run_shard(int second_of_first) {
    if (length_ == 0) {
      emit();
      return;
    }
    slots_[0] = 0;
    slots_[second_of_first] = 0;
    run(1, 1);
  }

 private:
  void emit() {
    builder_.clear();
    for (int i = 0; i < length_; ++i) builder_.push(slots_[i]);
    visit_(builder_.finish());
  }

  int length_;
  const std::function<void(const GaussWord&)>& visit_;
  std::array<int, 2 * kMaxRank> slots_{};
  WordBuilder builder_;
};

void check_rank(int rank) {
  if (rank < 0 || rank > kMaxRank) {
    throw std::invalid_argument("rank out of range: " + std::to_string(rank));
  }
}

}  // namespace

void for_each_canonical(int rank, const std::function<void(const GaussWord&)>& visit) {
  check_rank(rank);
  Enumerator e(rank, visit);
  e.run(0, 0);
}

void for_each_canonical_shard(int rank, int second_of_first,
                              const std::function<void(const GaussWord&)>& visit) {
  check_rank(rank);
  if (rank > 0 && (second_of_first < 1 || second_of_first >= 2 * rank)) {
    throw std::invalid_argument("shard index out of range");
  }
  Enumerator e(rank, visit);
  e.run_shard(second_of_first);
}

std::vector<GaussWord> enumerate_canonical(int rank) {
  std::vector<GaussWord> words;
  words.reserve(canonical_count(rank));
  for_each_canonical(rank, [&](const GaussWord& w) { words.push_back(w); });
  std::sort(words.begin(), words.end());
  return words;
}

bool has_adjacent_double(const GaussWord& w) {
  for (int i = 0; i + 1 < w.length(); ++i) {
    if (w[i] == w[i + 1]) return true;
  }
  return false;
}

GaussWord induced_subword(const GaussWord& w, LetterMask keep) {
  WordBuilder b;
  for (Letter x : w.letters()) {
    if (keep >> x & 1u) b.push(x);
  }
  return b.finish();
}

GaussWord delete_letters(const GaussWord& w, LetterMask letters) {
  return induced_subword(w, ~letters);
}

std::uint64_t angle_bracket(const GaussWord& u, const GaussWord& w) {
  const int k = u.rank();
  const int r = w.rank();
  if (k > r) return 0;
  if (k == 0) return 1;
  std::uint64_t count = 0;
  const LetterMask limit = LetterMask{1} << r;
  // Gosper's hack over the k-subsets of the r letters.
  for (LetterMask s = (LetterMask{1} << k) - 1; s < limit;) {
    if (induced_subword(w, s) == u) ++count;
    LetterMask low = s & -s;
    LetterMask ripple = s + low;
    s = (((ripple ^ s) >> 2) / low) | ripple;
  }
  return count;
}

std::vector<PatternMatch2> match_h2(const GaussWord& w) {
  std::vector<PatternMatch2> out;
  const Occurrences occ(w);
  const int n = w.length();
  for (int a = 0; a < w.rank(); ++a) {
    int p = occ.first[a] + 1;
    if (p >= n) continue;
    Letter b = w[p];
    if (occ.first[b] != p) continue;
    if (occ.second[b] + 1 == occ.second[a]) {
      out.push_back({static_cast<Letter>(a), b});
    }
  }
  return out;
}

std::vector<PatternMatch3> match_h3(const GaussWord& w) {
  std::vector<PatternMatch3> out;
  const Occurrences occ(w);
  const int n = w.length();
  for (int a = 0; a < w.rank(); ++a) {
    int p = occ.first[a] + 1;
    int q = occ.second[a] + 1;
    if (q >= n) continue;
    Letter b = w[p];
    Letter c = w[q];
    if (occ.first[b] != p || occ.first[c] != q) continue;
    if (occ.second[c] == occ.second[b] + 1) {
      out.push_back({static_cast<Letter>(a), b, c});
    }
  }
  return out;
}

}  // namespace polyak
