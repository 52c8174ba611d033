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

#include "polyak/classify.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "polyak/parallel.hpp"

namespace polyak {

namespace {

bool rank_major_less(const GaussWord& a, const GaussWord& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  return a < b;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Keeps the smaller index as root, so a root is its set's least element.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::size_t Classification::class_of(const GaussWord& w) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (std::binary_search(classes[i].words.begin(), classes[i].words.end(), w, rank_major_less)) {
      return i;
    }
  }
  return classes.size();
}

Classification classify(int max_rank, const InvariantTable& table, const ClassifyOptions& opts) {
  if (max_rank < 0) throw std::invalid_argument("max rank must be nonnegative");
  std::vector<GaussWord> words;
  for (int r = 0; r <= max_rank; ++r) {
    auto level = enumerate_canonical(r);
    words.insert(words.end(), level.begin(), level.end());
  }
  return classify_words(std::move(words), table, opts);
}

Classification classify_words(std::vector<GaussWord> words, const InvariantTable& table,
                              const ClassifyOptions& opts) {
  std::sort(words.begin(), words.end(), rank_major_less);
  words.erase(std::unique(words.begin(), words.end()), words.end());
  const int max_rank = words.empty() ? 0 : words.back().rank();
  std::unordered_map<GaussWord, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);

  const int workers = resolve_workers(opts.workers);
  std::vector<Value> values(words.size());
  {
    std::atomic<std::size_t> next{0};
    run_workers(workers, [&](int) {
      for (std::size_t i; (i = next.fetch_add(1)) < words.size();) {
        values[i] = evaluate(table, words[i]);
      }
    });
  }
  if (opts.log) *opts.log << "classify: evaluated " << words.size() << " words\n";

  DisjointSets sets(words.size());
  std::vector<Link> links;

  // Words that shrink by H1, H2 or H4 to another listed word join its class.
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const Neighbor& nb : neighbors(words[i], words[i].rank())) {
      if (nb.move.direction != MoveDirection::kReduce) continue;
      auto found = index.find(nb.word);
      if (found == index.end()) continue;
      const std::size_t j = found->second;
      if (values[i] != values[j]) {
        throw std::logic_error("invariant differs between " + words[i].str() + " and " +
                               nb.word.str());
      }
      sets.unite(i, j);
      links.push_back({words[i], nb.word, {TraceStep{nb.move, nb.word}}});
      break;
    }
  }

  // Remaining components, grouped by value; each group is merged by search.
  std::map<Value, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (sets.find(i) == i) groups[values[i]].push_back(i);
  }
  if (opts.log) {
    *opts.log << "classify: " << groups.size() << " values, components after reduction: ";
    std::size_t comps = 0;
    for (const auto& [v, g] : groups) comps += g.size();
    *opts.log << comps << "\n";
  }

  std::vector<std::vector<std::size_t>*> group_list;
  for (auto& [v, g] : groups) group_list.push_back(&g);
  std::vector<std::vector<Link>> group_links(group_list.size());
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> group_unresolved(group_list.size());
  std::mutex log_mutex;
  {
    std::atomic<std::size_t> next{0};
    run_workers(workers, [&](int) {
      for (std::size_t g; (g = next.fetch_add(1)) < group_list.size();) {
        std::vector<std::size_t> established;
        for (std::size_t root : *group_list[g]) {
          bool merged = false;
          for (std::size_t other : established) {
            SearchOutcome so = search(words[root], words[other], opts.rank_cap, opts.node_budget);
            if (opts.log) {
              std::lock_guard lock(log_mutex);
              *opts.log << "classify: search " << words[root].str() << " ~ " << words[other].str()
                        << (so.status == SearchStatus::kConnected ? " connected" : " unknown")
                        << " (" << so.nodes_explored << " nodes)\n";
            }
            if (so.status == SearchStatus::kConnected) {
              sets.unite(root, other);
              group_links[g].push_back({words[root], words[other], std::move(so.trace)});
              merged = true;
              break;
            }
          }
          if (!merged) established.push_back(root);
        }
        for (std::size_t a = 0; a < established.size(); ++a) {
          for (std::size_t b = a + 1; b < established.size(); ++b) {
            group_unresolved[g].emplace_back(established[a], established[b]);
          }
        }
      }
    });
  }
  for (auto& gl : group_links) {
    for (Link& l : gl) links.push_back(std::move(l));
  }

  // Assemble classes.
  std::map<std::size_t, std::size_t> class_index;  // root -> position in `built`
  std::vector<HomotopyClass> built;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, fresh] = class_index.emplace(root, built.size());
    if (fresh) built.push_back({values[root], {}, {}});
    built[it->second].words.push_back(words[i]);
  }
  for (Link& l : links) {
    built[class_index.at(sets.find(index.at(l.from)))].links.push_back(std::move(l));
  }
  for (HomotopyClass& hc : built) std::sort(hc.words.begin(), hc.words.end(), rank_major_less);

  std::vector<std::size_t> order(built.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (built[a].value != built[b].value) return built[a].value < built[b].value;
    return rank_major_less(built[a].words.front(), built[b].words.front());
  });
  std::vector<std::size_t> position(built.size());
  Classification out;
  out.max_rank = max_rank;
  out.degree = table.degree();
  for (std::size_t k = 0; k < order.size(); ++k) {
    position[order[k]] = k;
    out.classes.push_back(std::move(built[order[k]]));
  }
  for (const auto& gu : group_unresolved) {
    for (auto [a, b] : gu) {
      std::size_t x = position[class_index.at(sets.find(a))];
      std::size_t y = position[class_index.at(sets.find(b))];
      out.unresolved.emplace_back(std::min(x, y), std::max(x, y));
    }
  }
  std::sort(out.unresolved.begin(), out.unresolved.end());
  return out;
}

void write_report(std::ostream& out, const Classification& c) {
  out << "# classification max-rank " << c.max_rank << " degree " << c.degree << "\n";
  out << "classes " << c.classes.size() << "\n";
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    const HomotopyClass& hc = c.classes[i];
    out << "\nclass " << i << " size " << hc.words.size() << " value " << hc.value.str() << "\n";
    for (std::size_t k = 0; k < hc.words.size(); ++k) {
      out << (k % 8 == 0 ? "  " : " ") << hc.words[k].str();
      if (k % 8 == 7 || k + 1 == hc.words.size()) out << "\n";
    }
  }
  out << "\nunresolved " << c.unresolved.size() << "\n";
  for (auto [a, b] : c.unresolved) {
    out << "  class " << a << " (" << c.classes[a].words.front().str() << ") vs class " << b
        << " (" << c.classes[b].words.front().str() << ")\n";
  }
}

void write_assignments(std::ostream& out, const Classification& c) {
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    for (const GaussWord& w : c.classes[i].words) {
      out << w.str() << ' ' << i << ' ' << c.classes[i].value.str() << '\n';
    }
  }
}

}  // namespace polyak
