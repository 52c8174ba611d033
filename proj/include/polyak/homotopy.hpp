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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyak/gaussword.hpp"

namespace polyak {

// H1-H3 are the homotopy moves; H4-H7 are moves derived from them:
//   H1  xAAy <-> xy
//   H2  xAByBAz <-> xyz
//   H3  xAByACzBCt <-> xBAyCAzCBt
//   H4  xAByABz <-> xyz
//   H5  xAByCAzBCt <-> xBAyACzCBt
//   H6  xAByCAzCBt <-> xBAyACzBCt
//   H7  xAByACzCBt <-> xBAyCAzBCt
enum class MoveTag : std::uint8_t { kH1 = 1, kH2, kH3, kH4, kH5, kH6, kH7 };
enum class MoveDirection : std::uint8_t { kExpand, kReduce, kExchange };

// One move applied to a specific word. Position meaning by kind:
//   H1 reduce:          [0] = start of the adjacent pair AA
//   H1 expand:          [0] = insertion point (0..length)
//   H2/H4 reduce:       [0], [1] = starts of the two adjacent pairs
//   H2/H4 expand:       [0] <= [1] = insertion points in the source word
//   H3/H5/H6/H7:        [0] < [1] < [2] = starts of the three swapped pairs
struct MoveApplication {
  MoveTag tag;
  MoveDirection direction;
  std::array<std::uint8_t, 3> positions{};

  friend bool operator==(const MoveApplication&, const MoveApplication&) = default;
};

std::string to_string(MoveTag tag);
std::string to_string(MoveDirection direction);

struct Neighbor {
  GaussWord word;
  MoveApplication move;
};

// Every word one move away. Expansions are only produced while the result
// has rank <= rank_cap; reductions and exchanges are always produced.
std::vector<Neighbor> neighbors(const GaussWord& w, int rank_cap);

// Applies `move` to `w`. Throws std::invalid_argument if it does not apply.
GaussWord apply_move(const GaussWord& w, const MoveApplication& move);

// True iff `move` can be applied to `w` (pattern present at its positions).
bool move_applies(const GaussWord& w, const MoveApplication& move);

struct TraceStep {
  MoveApplication move;
  GaussWord after;
};

enum class SearchStatus { kConnected, kUnknown };

struct SearchOutcome {
  SearchStatus status = SearchStatus::kUnknown;
  std::vector<TraceStep> trace;   // source to target when connected
  std::size_t nodes_explored = 0;
  int frontier_rank_cap = 0;
};

inline constexpr std::size_t kDefaultNodeBudget = 1000000;

// Bidirectional breadth-first search over canonical words. rank_cap <= 0
// selects max(rank(w1), rank(w2)) + 2.
SearchOutcome search(const GaussWord& w1, const GaussWord& w2, int rank_cap = 0,
                     std::size_t node_budget = kDefaultNodeBudget);

// True iff the trace replays from `source` and ends at `target`.
bool replay_trace(const GaussWord& source, const std::vector<TraceStep>& trace,
                  const GaussWord& target);

// One line per move: "<tag> <direction> <word-after>".
void write_trace(std::ostream& out, const std::vector<TraceStep>& trace);

}  // namespace polyak
