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

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polyak/classify.hpp"
#include "polyak/homotopy.hpp"
#include "polyak/smith.hpp"

namespace polyak::testing {

namespace {

std::ifstream open_fixture(const std::string& name) {
  const std::string path = std::string(POLYAK_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path);
  return in;
}

std::vector<GaussWord> parse_words(const std::string& text) {
  std::istringstream ss(text);
  std::vector<GaussWord> out;
  for (std::string w; ss >> w;) out.push_back(GaussWord::parse(w));
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (s == "-") return out;
  std::istringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

}  // namespace

std::vector<ValueRow> load_gamma5_rows() {
  std::ifstream in = open_fixture("gamma5_rows.txt");
  std::vector<ValueRow> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto bar = line.find('|');
    ValueRow row;
    std::istringstream vs(line.substr(0, bar));
    for (std::uint64_t c; vs >> c;) row.value.push_back(c);
    row.words = parse_words(line.substr(bar + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ClassRow> load_gamma6_classes() {
  std::ifstream in = open_fixture("gamma6_classes.txt");
  std::vector<ClassRow> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    ClassRow row;
    const auto q = line.find('?');
    row.words = parse_words(line.substr(0, q));
    if (q != std::string::npos) row.open_split = parse_words(line.substr(q + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PatternRow> load_patterns() {
  std::ifstream in = open_fixture("patterns.txt");
  std::vector<PatternRow> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string word, h2_key, h2, h3_key, h3;
    ss >> word >> h2_key >> h2 >> h3_key >> h3;
    rows.push_back({GaussWord::parse(word), split_commas(h2), split_commas(h3)});
  }
  return rows;
}

const Presentation& presentation(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Presentation>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Presentation>(build_presentation(n));
  return *slot;
}

const InvariantTable& table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<InvariantTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<InvariantTable>(build_table(n));
  return *slot;
}

GaussWord random_word(int rank, std::mt19937_64& rng) {
  std::vector<int> seq;
  for (int i = 0; i < rank; ++i) seq.insert(seq.end(), {i, i});
  std::shuffle(seq.begin(), seq.end(), rng);
  return GaussWord::canonicalize(seq);
}

Check homotopy_invariance(const InvariantTable& t, int moves, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::pair<MoveTag, MoveDirection>, int> used;
  int applied = 0;
  while (applied < moves) {
    // Short random walks from random words, so that later steps start from
    // words shaped by earlier expansions (which is where H2/H3 sites appear).
    GaussWord w = random_word(static_cast<int>(rng() % 7), rng);
    Value v = evaluate(t, w);
    for (int step = 0; step < 12 && applied < moves; ++step) {
      std::vector<Neighbor> nbs;
      for (Neighbor& nb : neighbors(w, 7)) {
        if (nb.move.tag <= MoveTag::kH3) nbs.push_back(std::move(nb));
      }
      if (nbs.empty()) break;
      // Prefer the rarer H2 and H3 sites when present.
      std::vector<Neighbor> rare;
      for (const Neighbor& nb : nbs) {
        if (nb.move.tag != MoveTag::kH1) rare.push_back(nb);
      }
      const auto& pool = (!rare.empty() && rng() % 2) ? rare : nbs;
      const Neighbor& nb = pool[rng() % pool.size()];
      const Value after = evaluate(t, nb.word);
      if (after != v) {
        return {false, w.str() + " -> " + nb.word.str() + " by " + to_string(nb.move.tag) +
                           " changes " + v.str() + " to " + after.str()};
      }
      ++used[{nb.move.tag, nb.move.direction}];
      ++applied;
      w = nb.word;
    }
  }
  std::ostringstream detail;
  detail << applied << " moves (";
  bool first = true;
  for (const auto& [key, count] : used) {
    detail << (first ? "" : ", ") << to_string(key.first) << ' ' << to_string(key.second) << ' '
           << count;
    first = false;
  }
  detail << ")";
  // Every move kind in both directions must have been exercised.
  const bool all_kinds = used.size() == 5;
  return {all_kinds, detail.str() + (all_kinds ? "" : " missing move kinds")};
}

Check semiletter_degree(const InvariantTable& t, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int marks = t.degree() + 1;
  for (int i = 0; i < samples; ++i) {
    const int rank = marks + static_cast<int>(rng() % 3);
    const GaussWord w = random_word(rank, rng);
    std::vector<int> letters(rank);
    std::iota(letters.begin(), letters.end(), 0);
    std::shuffle(letters.begin(), letters.end(), rng);
    LetterMask marked = 0;
    for (int j = 0; j < marks; ++j) marked |= LetterMask{1} << letters[j];
    const auto [sum, v] = evaluate_combination(t, semiletter_resolution(w, marked));
    if (sum != 0 || !v.is_zero()) {
      return {false, w.str() + " with " + std::to_string(marks) + " marks gives " + v.str()};
    }
  }
  return {true, std::to_string(samples) + " words with " + std::to_string(marks) + " marks"};
}

Check relator_vanishing(const Presentation& p, const InvariantTable& t) {
  for (const RelationVector& r : p.relations) {
    Value acc = t.zero();
    for (const Term& term : r.terms) {
      t.accumulate(acc, t.generator_value(p.generators.word(term.generator)), term.coef);
    }
    if (!acc.is_zero()) {
      return {false, "relation with first term " + p.generators.word(r.terms[0].generator).str() +
                         " maps to " + acc.str()};
    }
  }
  return {true, std::to_string(p.relations.size()) + " relations"};
}

Check torsion_bound(const InvariantTable& t) {
  for (const auto& [w, v] : t.entries()) {
    Value scaled = t.zero();
    t.accumulate(scaled, v, std::int64_t{1} << (t.degree() - w.rank() + 1));
    if (!scaled.is_zero()) return {false, w.str() + " has value " + v.str()};
  }
  return {true, std::to_string(t.size()) + " entries"};
}

Check snf_oracle(int matrices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int tails = 0;
  for (int m = 0; m < matrices; ++m) {
    const std::size_t s = 1 + rng() % 10, t = 1 + rng() % 12;
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<std::int64_t>> dense(s, std::vector<std::int64_t>(t + s, 0));
    SparseMatrix a(s, t);
    // Sparse-ish entries so elimination meets both units and even pivots.
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        if (rng() % 3 == 0) continue;
        const std::int64_t v = static_cast<std::int64_t>(rng() % 19) - 9;
        dense[i][j] = v;
        if (v) a.add(i, j, v);
      }
      dense[i][t + i] = std::int64_t{1} << k;
    }
    const DenseSnf ref = snf_dense_naive(dense);
    // Odd matrices stay sparse to the end; even ones may finish densely.
    SnfOptions opts;
    opts.keep_log = true;
    if (m % 2) opts.dense_tail_rows = 0;
    const SmithResult got = snf_sparse_mod2k(a, k, opts);
    tails += got.dense_tail_rows > 0;
    auto fail = [&](const std::string& why) {
      return Check{false, "matrix " + std::to_string(m) + " (" + std::to_string(s) + "x" +
                              std::to_string(t) + ", k=" + std::to_string(k) + "): " + why};
    };
    for (std::size_t i = 0; i < s; ++i) {
      if (BigInt(got.divisors[i]) != ref.divisors[i]) return fail("divisor mismatch");
      if (i && got.divisors[i] % got.divisors[i - 1]) return fail("divisor chain broken");
    }
    if (!verify_cokernel_map(a, got)) return fail("cokernel map check failed");

    // The log is invertible.
    const Modulus mod(k);
    std::vector<Residue> y(s), y0;
    for (Residue& x : y) x = mod.reduce(static_cast<std::int64_t>(rng()));
    y0 = y;
    got.row_ops.apply(y, mod);
    got.row_ops.apply_inverse(y, mod);
    if (y != y0) return fail("log inverse does not restore the vector");

    // Dense and replayed transforms agree.
    SnfOptions replay = opts;
    replay.keep_log = false;
    replay.u_strategy = UStrategy::kReplay;
    if (snf_sparse_mod2k(a, k, replay).u_rows != got.u_rows) return fail("replay differs");
  }
  return {true, std::to_string(matrices) + " matrices, " + std::to_string(tails) +
                    " finished densely"};
}

Check column_shuffle(const Presentation& p, int k, int shuffles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SparseMatrix a = SparseMatrix::from_presentation(p);
  const auto base = snf_sparse_mod2k(a, k).divisors;
  for (int i = 0; i < shuffles; ++i) {
    std::vector<std::size_t> perm(a.cols());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const SparseMatrix b = a.permuted_columns(perm);
    const SmithResult r = snf_sparse_mod2k(b, k);
    if (r.divisors != base) return {false, "shuffle " + std::to_string(i) + " changed divisors"};
    if (!verify_cokernel_map(b, r)) return {false, "cokernel map check failed"};
  }
  return {true, std::to_string(shuffles) + " shuffles of " + std::to_string(a.cols()) + " columns"};
}

Check partition_matches(const Classification& c, const std::vector<std::vector<GaussWord>>& expect,
                        std::size_t split_pairs, bool irreducible_only) {
  const auto counted = [&](const GaussWord& w) { return !irreducible_only || !has_adjacent_double(w); };
  // Words not listed in `expect` must form one further class.
  std::set<GaussWord> listed;
  for (const auto& block : expect) listed.insert(block.begin(), block.end());
  std::vector<std::vector<GaussWord>> want = expect;
  std::vector<GaussWord> rest;
  for (const HomotopyClass& hc : c.classes) {
    for (const GaussWord& w : hc.words) {
      if (counted(w) && !listed.count(w)) rest.push_back(w);
    }
  }
  if (!rest.empty()) want.push_back(rest);
  std::set<std::set<GaussWord>> a, b;
  for (const auto& block : want) a.emplace(block.begin(), block.end());
  for (const HomotopyClass& hc : c.classes) {
    std::set<GaussWord> block;
    for (const GaussWord& w : hc.words) {
      if (counted(w)) block.insert(w);
    }
    if (block.empty()) return {false, "class without a listed word: " + hc.words.front().str()};
    b.insert(block);
  }
  if (a != b) {
    return {false, "partition differs: expected " + std::to_string(a.size()) + " classes, got " +
                       std::to_string(b.size())};
  }
  if (c.unresolved.size() != split_pairs) {
    return {false, std::to_string(c.unresolved.size()) + " unresolved pairs"};
  }
  for (const HomotopyClass& hc : c.classes) {
    if (hc.links.size() + 1 != hc.words.size()) return {false, "class without a spanning tree"};
    for (const Link& l : hc.links) {
      if (!replay_trace(l.from, l.trace, l.to)) {
        return {false, "trace " + l.from.str() + " -> " + l.to.str() + " does not replay"};
      }
    }
  }
  return {true, std::to_string(b.size()) + " classes"};
}

Check gamma5_classification(const Classification& c) {
  std::vector<std::vector<GaussWord>> expect;
  for (const ValueRow& row : load_gamma5_rows()) {
    std::vector<GaussWord> block;
    for (const GaussWord& w : row.words) {
      if (w.rank() <= c.max_rank) block.push_back(w);
    }
    if (!block.empty()) expect.push_back(block);
  }
  return partition_matches(c, expect, 0, false);
}

Check gamma6_classification(const Classification& c) {
  std::vector<std::vector<GaussWord>> expect;
  std::size_t splits = 0;
  for (const ClassRow& row : load_gamma6_classes()) {
    expect.push_back(row.words);
    if (!row.open_split.empty()) {
      expect.push_back(row.open_split);
      ++splits;
    }
  }
  Check r = partition_matches(c, expect, splits, true);
  if (!r.ok) return r;
  // The unresolved pair must be exactly the two open halves.
  for (const ClassRow& row : load_gamma6_classes()) {
    if (row.open_split.empty()) continue;
    const std::size_t a = c.class_of(row.words[0]), b = c.class_of(row.open_split[0]);
    if (c.unresolved.front() != std::pair(std::min(a, b), std::max(a, b))) {
      return {false, "unresolved pair is not the open split"};
    }
  }
  return r;
}

}  // namespace polyak::testing
