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

#include "polyak/homotopy.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace polyak {

std::string to_string(MoveTag tag) { return "H" + std::to_string(static_cast<int>(tag)); }

std::string to_string(MoveDirection direction) {
  switch (direction) {
    case MoveDirection::kExpand:
      return "expand";
    case MoveDirection::kReduce:
      return "reduce";
    case MoveDirection::kExchange:
      return "exchange";
  }
  return "?";
}

namespace {

using Positions = std::array<std::uint8_t, 3>;

MoveApplication make(MoveTag tag, MoveDirection dir, int p0, int p1 = 0, int p2 = 0) {
  return {tag, dir,
          Positions{static_cast<std::uint8_t>(p0), static_cast<std::uint8_t>(p1),
                    static_cast<std::uint8_t>(p2)}};
}

// Tag of the exchange swapping the pairs at p1 < p2 < p3, if those pairs
// carry letters A, B, C as {A,B}, {A,C}, {B,C}.
std::optional<MoveTag> exchange_tag(const GaussWord& w, int p1, int p2, int p3) {
  const int n = w.length();
  if (!(p1 >= 0 && p1 + 1 < p2 && p2 + 1 < p3 && p3 + 1 < n)) return std::nullopt;
  auto shared = [&](int x, int y) -> int {
    int hits = 0, letter = -1;
    for (int i : {x, x + 1}) {
      for (int j : {y, y + 1}) {
        if (w[i] == w[j]) {
          ++hits;
          letter = w[i];
        }
      }
    }
    return hits == 1 ? letter : -1;
  };
  for (int p : {p1, p2, p3}) {
    if (w[p] == w[p + 1]) return std::nullopt;
  }
  const int a = shared(p1, p2);
  const int b = shared(p1, p3);
  const int c = shared(p2, p3);
  if (a < 0 || b < 0 || c < 0 || a == b || a == c || b == c) return std::nullopt;
  bool o1 = w[p1] == a;  // pair1 reads AB
  bool o2 = w[p2] == a;  // pair2 reads AC
  bool o3 = w[p3] == b;  // pair3 reads BC
  if (!o1) {
    o2 = !o2;
    o3 = !o3;
  }
  if (o2 && o3) return MoveTag::kH3;
  if (!o2 && o3) return MoveTag::kH5;
  if (!o2 && !o3) return MoveTag::kH6;
  return MoveTag::kH7;
}

GaussWord swap_pairs(const GaussWord& w, const Positions& p) {
  std::array<int, 2 * kMaxRank> seq;
  for (int i = 0; i < w.length(); ++i) seq[i] = w[i];
  for (int q : p) std::swap(seq[q], seq[q + 1]);
  WordBuilder b;
  for (int i = 0; i < w.length(); ++i) b.push(seq[i]);
  return b.finish();
}

GaussWord remove_letters(const GaussWord& w, int x, int y = -1) {
  LetterMask m = LetterMask{1} << x;
  if (y >= 0) m |= LetterMask{1} << y;
  return delete_letters(w, m);
}

// w[0:i] P Q w[i:j] R S w[j:], with P/Q the new letters r and r+1.
GaussWord insert_pairs(const GaussWord& w, int i, int j, bool reversed_second) {
  const int r = w.rank();
  WordBuilder b;
  for (int k = 0; k < i; ++k) b.push(w[k]);
  b.push(r);
  b.push(r + 1);
  for (int k = i; k < j; ++k) b.push(w[k]);
  b.push(reversed_second ? r + 1 : r);
  b.push(reversed_second ? r : r + 1);
  for (int k = j; k < w.length(); ++k) b.push(w[k]);
  return b.finish();
}

GaussWord insert_double(const GaussWord& w, int i) {
  WordBuilder b;
  for (int k = 0; k < i; ++k) b.push(w[k]);
  b.push(w.rank());
  b.push(w.rank());
  for (int k = i; k < w.length(); ++k) b.push(w[k]);
  return b.finish();
}

}  // namespace

bool move_applies(const GaussWord& w, const MoveApplication& m) {
  const int n = w.length();
  const int i = m.positions[0];
  const int j = m.positions[1];
  switch (m.tag) {
    case MoveTag::kH1:
      if (m.direction == MoveDirection::kReduce) return i + 1 < n && w[i] == w[i + 1];
      if (m.direction == MoveDirection::kExpand) return i <= n && w.rank() < kMaxRank;
      return false;
    case MoveTag::kH2:
    case MoveTag::kH4: {
      const bool h2 = m.tag == MoveTag::kH2;
      if (m.direction == MoveDirection::kExpand) return i <= j && j <= n && w.rank() + 2 <= kMaxRank;
      if (m.direction != MoveDirection::kReduce) return false;
      if (!(i + 2 <= j && j + 1 < n)) return false;
      if (w[i] == w[i + 1]) return false;
      return h2 ? (w[j] == w[i + 1] && w[j + 1] == w[i]) : (w[j] == w[i] && w[j + 1] == w[i + 1]);
    }
    default:
      if (m.direction != MoveDirection::kExchange) return false;
      return exchange_tag(w, m.positions[0], m.positions[1], m.positions[2]) == m.tag;
  }
}

GaussWord apply_move(const GaussWord& w, const MoveApplication& m) {
  if (!move_applies(w, m)) {
    throw std::invalid_argument(to_string(m.tag) + " " + to_string(m.direction) +
                                " does not apply to " + w.str());
  }
  const int i = m.positions[0];
  const int j = m.positions[1];
  switch (m.tag) {
    case MoveTag::kH1:
      return m.direction == MoveDirection::kReduce ? remove_letters(w, w[i]) : insert_double(w, i);
    case MoveTag::kH2:
    case MoveTag::kH4:
      if (m.direction == MoveDirection::kReduce) return remove_letters(w, w[i], w[i + 1]);
      return insert_pairs(w, i, j, m.tag == MoveTag::kH2);
    default:
      return swap_pairs(w, m.positions);
  }
}

std::vector<Neighbor> neighbors(const GaussWord& w, int rank_cap) {
  std::vector<Neighbor> out;
  const int n = w.length();
  const int r = w.rank();
  const Occurrences occ(w);
  auto other = [&](int pos) { return occ.first[w[pos]] == pos ? occ.second[w[pos]] : occ.first[w[pos]]; };

  // Reductions.
  for (int i = 0; i + 1 < n; ++i) {
    if (w[i] == w[i + 1]) {
      out.push_back({remove_letters(w, w[i]), make(MoveTag::kH1, MoveDirection::kReduce, i)});
    }
  }
  for (int x = 0; x < r; ++x) {
    const int i = occ.first[x];
    if (i + 1 >= n) continue;
    const int y = w[i + 1];
    if (occ.first[y] != i + 1) continue;
    if (occ.second[y] + 1 == occ.second[x]) {
      out.push_back({remove_letters(w, x, y),
                     make(MoveTag::kH2, MoveDirection::kReduce, i, occ.second[y])});
    }
    if (occ.second[x] + 1 == occ.second[y]) {
      out.push_back({remove_letters(w, x, y),
                     make(MoveTag::kH4, MoveDirection::kReduce, i, occ.second[x])});
    }
  }

  // Exchanges: pair1 at p1 shares letter A with pair2 (through A's other
  // occurrence), and the remaining occurrences of B and C must be adjacent.
  for (int p1 = 0; p1 + 1 < n; ++p1) {
    if (w[p1] == w[p1 + 1]) continue;
    for (int side = 0; side < 2; ++side) {
      const int a_pos = p1 + side;
      const int b_pos = p1 + 1 - side;
      const int a_other = other(a_pos);
      if (a_other < p1) continue;
      for (int p2 : {a_other - 1, a_other}) {
        if (p2 < p1 + 2 || p2 + 1 >= n) continue;
        const int c_pos = (p2 == a_other) ? p2 + 1 : p2;
        if (w[c_pos] == w[a_pos] || w[c_pos] == w[b_pos]) continue;
        const int b_other = other(b_pos);
        const int c_other = other(c_pos);
        if (b_other < p1 || c_other < p2) continue;
        const int lo = std::min(b_other, c_other);
        if (std::max(b_other, c_other) != lo + 1 || lo < p2 + 2) continue;
        auto tag = exchange_tag(w, p1, p2, lo);
        if (!tag) continue;
        Positions pos{static_cast<std::uint8_t>(p1), static_cast<std::uint8_t>(p2),
                      static_cast<std::uint8_t>(lo)};
        out.push_back({swap_pairs(w, pos), MoveApplication{*tag, MoveDirection::kExchange, pos}});
      }
    }
  }

  // Expansions.
  if (r + 1 <= rank_cap && r + 1 <= kMaxRank) {
    for (int i = 0; i <= n; ++i) {
      out.push_back({insert_double(w, i), make(MoveTag::kH1, MoveDirection::kExpand, i)});
    }
  }
  if (r + 2 <= rank_cap && r + 2 <= kMaxRank) {
    for (int i = 0; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        out.push_back({insert_pairs(w, i, j, true), make(MoveTag::kH2, MoveDirection::kExpand, i, j)});
        out.push_back({insert_pairs(w, i, j, false), make(MoveTag::kH4, MoveDirection::kExpand, i, j)});
      }
    }
  }
  return out;
}

namespace {

struct Visit {
  GaussWord word;
  std::uint32_t parent;
  MoveApplication move;  // parent -> word
};

constexpr std::uint32_t kRoot = UINT32_MAX;

class Side {
 public:
  explicit Side(const GaussWord& root) {
    nodes_.push_back({root, kRoot, {}});
    index_.emplace(root, 0);
    frontier_.push_back(0);
  }

  std::optional<std::uint32_t> find(const GaussWord& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Visit& node(std::uint32_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t frontier_size() const { return frontier_.size(); }
  bool exhausted() const { return frontier_.empty(); }

  // Expands one BFS level; stops at the first word seen by `other`.
  // Returns (this side's node, other side's node) on contact.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> step(const Side& other, int cap,
                                                              std::size_t budget,
                                                              std::size_t other_size) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t id : frontier_) {
      const GaussWord w = nodes_[id].word;
      for (Neighbor& nb : neighbors(w, cap)) {
        if (index_.count(nb.word)) continue;
        const auto idx = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({nb.word, id, nb.move});
        index_.emplace(nb.word, idx);
        if (auto hit = other.find(nb.word)) return std::make_pair(idx, *hit);
        next.push_back(idx);
        if (nodes_.size() + other_size > budget) {
          frontier_.clear();
          overflow_ = true;
          return std::nullopt;
        }
      }
    }
    frontier_ = std::move(next);
    return std::nullopt;
  }

  bool overflow() const { return overflow_; }

  // Words from the root to node i, root first.
  std::vector<std::uint32_t> path_to(std::uint32_t i) const {
    std::vector<std::uint32_t> path;
    for (std::uint32_t k = i; k != kRoot; k = nodes_[k].parent) path.push_back(k);
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  std::vector<Visit> nodes_;
  std::unordered_map<GaussWord, std::uint32_t> index_;
  std::vector<std::uint32_t> frontier_;
  bool overflow_ = false;
};

// A move taking `from` to `to`, preferring `tag`.
MoveApplication find_move(const GaussWord& from, const GaussWord& to, MoveTag tag, int cap) {
  std::optional<MoveApplication> any;
  for (const Neighbor& nb : neighbors(from, cap)) {
    if (nb.word != to) continue;
    if (nb.move.tag == tag) return nb.move;
    if (!any) any = nb.move;
  }
  if (!any) throw std::logic_error("no move from " + from.str() + " to " + to.str());
  return *any;
}

}  // namespace

SearchOutcome search(const GaussWord& w1, const GaussWord& w2, int rank_cap,
                     std::size_t node_budget) {
  SearchOutcome out;
  const int cap = std::max({rank_cap > 0 ? rank_cap : std::max(w1.rank(), w2.rank()) + 2,
                            w1.rank(), w2.rank()});
  out.frontier_rank_cap = cap;
  if (w1 == w2) {
    out.status = SearchStatus::kConnected;
    out.nodes_explored = 1;
    return out;
  }

  Side fwd(w1), bwd(w2);
  std::optional<std::pair<std::uint32_t, std::uint32_t>> meet;  // (fwd node, bwd node)
  while (!fwd.exhausted() && !bwd.exhausted()) {
    if (fwd.frontier_size() <= bwd.frontier_size()) {
      meet = fwd.step(bwd, cap, node_budget, bwd.size());
    } else {
      auto hit = bwd.step(fwd, cap, node_budget, fwd.size());
      if (hit) meet = std::make_pair(hit->second, hit->first);
    }
    if (meet || fwd.overflow() || bwd.overflow()) break;
  }
  out.nodes_explored = fwd.size() + bwd.size();
  if (!meet) return out;

  out.status = SearchStatus::kConnected;
  for (std::uint32_t id : fwd.path_to(meet->first)) {
    const Visit& v = fwd.node(id);
    if (v.parent != kRoot) out.trace.push_back({v.move, v.word});
  }
  // Walk the backward tree from the meeting word to its root, inverting
  // each recorded move.
  std::vector<std::uint32_t> back = bwd.path_to(meet->second);
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    const Visit& v = bwd.node(*it);
    if (v.parent == kRoot) break;
    const GaussWord& target = bwd.node(v.parent).word;
    out.trace.push_back({find_move(v.word, target, v.move.tag, cap), target});
  }
  return out;
}

bool replay_trace(const GaussWord& source, const std::vector<TraceStep>& trace,
                  const GaussWord& target) {
  GaussWord cur = source;
  for (const TraceStep& step : trace) {
    if (!move_applies(cur, step.move)) return false;
    cur = apply_move(cur, step.move);
    if (cur != step.after) return false;
  }
  return cur == target;
}

void write_trace(std::ostream& out, const std::vector<TraceStep>& trace) {
  for (const TraceStep& step : trace) {
    out << to_string(step.move.tag) << ' ' << to_string(step.move.direction) << ' '
        << step.after.str() << '\n';
  }
}

}  // namespace polyak
