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

#include "polyak/presentation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "polyak/parallel.hpp"

namespace polyak {

GeneratorTable::GeneratorTable(int degree, std::vector<GaussWord> words)
    : degree_(degree), words_(std::move(words)) {
  index_.reserve(words_.size());
  for (GeneratorId i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw std::invalid_argument("duplicate generator " + words_[i].str());
    }
  }
}

std::optional<GeneratorId> GeneratorTable::find(const GaussWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RelationVector normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.generator < b.generator; });
  RelationVector r;
  for (const Term& t : terms) {
    if (!r.terms.empty() && r.terms.back().generator == t.generator) {
      r.terms.back().coef += t.coef;
    } else {
      r.terms.push_back(t);
    }
  }
  std::erase_if(r.terms, [](const Term& t) { return t.coef == 0; });
  if (!r.terms.empty() && r.terms.front().coef < 0) {
    for (Term& t : r.terms) t.coef = -t.coef;
  }
  return r;
}

GeneratorTable build_generators(int n) {
  if (n < 0) throw std::invalid_argument("degree must be nonnegative");
  std::vector<GaussWord> words;
  for (int r = 1; r <= n; ++r) {
    for (const GaussWord& w : enumerate_canonical(r)) {
      if (!has_adjacent_double(w)) words.push_back(w);
    }
  }
  return GeneratorTable(n, std::move(words));
}

std::optional<GeneratorId> truncate_term(const GaussWord& w, const GeneratorTable& table) {
  if (w.empty() || w.rank() > table.degree() || has_adjacent_double(w)) return std::nullopt;
  auto id = table.find(w);
  if (!id) {
    throw std::logic_error("irreducible word " + w.str() + " missing from generator table");
  }
  return id;
}

namespace {

constexpr int kMaxTerms = 8;

// Fixed-size normalized relation, used while collecting and deduplicating.
struct PackedRelation {
  std::uint8_t size = 0;
  std::array<GeneratorId, kMaxTerms> ids{};
  std::array<std::int8_t, kMaxTerms> coefs{};

  friend auto operator<=>(const PackedRelation&, const PackedRelation&) = default;
};

class TermAccumulator {
 public:
  void add(std::optional<GeneratorId> id, int coef) {
    if (!id) return;
    for (int i = 0; i < size_; ++i) {
      if (ids_[i] == *id) {
        coefs_[i] += coef;
        return;
      }
    }
    ids_[size_] = *id;
    coefs_[size_] = coef;
    ++size_;
  }

  PackedRelation pack() const {
    std::array<int, kMaxTerms> order;
    int m = 0;
    for (int i = 0; i < size_; ++i) {
      if (coefs_[i] != 0) order[m++] = i;
    }
    std::sort(order.begin(), order.begin() + m, [&](int a, int b) { return ids_[a] < ids_[b]; });
    PackedRelation p;
    p.size = static_cast<std::uint8_t>(m);
    int sign = (m > 0 && coefs_[order[0]] < 0) ? -1 : 1;
    for (int i = 0; i < m; ++i) {
      p.ids[i] = ids_[order[i]];
      p.coefs[i] = static_cast<std::int8_t>(sign * coefs_[order[i]]);
    }
    return p;
  }

 private:
  std::array<GeneratorId, kMaxTerms> ids_{};
  std::array<int, kMaxTerms> coefs_{};
  int size_ = 0;
};

GaussWord without(const GaussWord& w, Letter a) { return delete_letters(w, LetterMask{1} << a); }

PackedRelation pack_g2(const GaussWord& w, const PatternMatch2& m, const GeneratorTable& table) {
  TermAccumulator acc;
  acc.add(truncate_term(w, table), 1);
  acc.add(truncate_term(without(w, m.inner), table), 2);
  return acc.pack();
}

PackedRelation pack_g3(const GaussWord& w, const PatternMatch3& m, const GeneratorTable& table) {
  const Occurrences occ(w);
  // xAByACzBCt -> xBAyCAzCBt: swap the three adjacent pairs.
  std::array<int, 2 * kMaxRank> seq;
  for (int i = 0; i < w.length(); ++i) seq[i] = w[i];
  for (int p : {int(occ.first[m.a]), int(occ.second[m.a]), int(occ.second[m.b])}) {
    std::swap(seq[p], seq[p + 1]);
  }
  WordBuilder b;
  for (int i = 0; i < w.length(); ++i) b.push(seq[i]);
  const GaussWord swapped = b.finish();
  // The swap keeps positions, so letter labels shift under canonicalization;
  // recover the images of a, b, c from their old first positions.
  const Letter sa = swapped[occ.first[m.a] + 1];
  const Letter sb = swapped[occ.first[m.a]];
  const Letter sc = swapped[occ.second[m.a]];

  TermAccumulator acc;
  acc.add(truncate_term(w, table), 1);
  acc.add(truncate_term(without(w, m.c), table), 1);
  acc.add(truncate_term(without(w, m.b), table), 1);
  acc.add(truncate_term(without(w, m.a), table), 1);
  acc.add(truncate_term(swapped, table), -1);
  acc.add(truncate_term(without(swapped, sc), table), -1);
  acc.add(truncate_term(without(swapped, sb), table), -1);
  acc.add(truncate_term(without(swapped, sa), table), -1);
  return acc.pack();
}

RelationVector unpack(const PackedRelation& p) {
  RelationVector r;
  r.terms.reserve(p.size);
  for (int i = 0; i < p.size; ++i) r.terms.push_back({p.ids[i], p.coefs[i]});
  return r;
}

void sort_unique(std::vector<PackedRelation>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct ScanResult {
  std::vector<PackedRelation> g2;
  std::vector<PackedRelation> g3;
  RawCounts raw;
};

// Walks every canonical word of rank 2..n+1 and generates the relations of
// every match. With `dedup`, each worker keeps its batches sorted and unique
// so the peak memory follows the number of distinct relations.
ScanResult scan(const GeneratorTable& table, bool want_g2, bool want_g3, bool dedup,
                const BuildOptions& opts) {
  const int n = table.degree();
  struct Task {
    int rank;
    int shard;
  };
  std::vector<Task> tasks;
  for (int r = n + 1; r >= 2; --r) {
    for (int s = 1; s < 2 * r; ++s) tasks.push_back({r, s});
  }

  const int workers = resolve_workers(opts.workers);
  std::vector<ScanResult> partial(workers);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto work = [&](int id) {
    ScanResult& out = partial[id];
    std::size_t g2_mark = 1u << 20, g3_mark = 1u << 20;
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      const Task task = tasks[k];
      for_each_canonical_shard(task.rank, task.shard, [&](const GaussWord& w) {
        if (want_g2) {
          for (const PatternMatch2& m : match_h2(w)) {
            ++out.raw.g2_matches;
            PackedRelation p = pack_g2(w, m, table);
            if (p.size == 0) continue;
            ++out.raw.g2_nonempty;
            out.g2.push_back(p);
          }
        }
        if (want_g3) {
          for (const PatternMatch3& m : match_h3(w)) {
            ++out.raw.g3_matches;
            PackedRelation p = pack_g3(w, m, table);
            if (p.size == 0) continue;
            ++out.raw.g3_nonempty;
            out.g3.push_back(p);
          }
        }
        if (dedup && out.g2.size() > g2_mark) {
          sort_unique(out.g2);
          g2_mark = std::max(g2_mark, 2 * out.g2.size());
        }
        if (dedup && out.g3.size() > g3_mark) {
          sort_unique(out.g3);
          g3_mark = std::max(g3_mark, 2 * out.g3.size());
        }
      });
      if (opts.log) {
        std::lock_guard lock(log_mutex);
        *opts.log << "relations: rank " << task.rank << " shard " << task.shard << "/"
                  << 2 * task.rank - 1 << " done\n";
      }
    }
  };
  run_workers(workers, work);

  ScanResult total;
  for (ScanResult& p : partial) {
    total.raw.g2_matches += p.raw.g2_matches;
    total.raw.g3_matches += p.raw.g3_matches;
    total.raw.g2_nonempty += p.raw.g2_nonempty;
    total.raw.g3_nonempty += p.raw.g3_nonempty;
    total.g2.insert(total.g2.end(), p.g2.begin(), p.g2.end());
    total.g3.insert(total.g3.end(), p.g3.begin(), p.g3.end());
    std::vector<PackedRelation>().swap(p.g2);
    std::vector<PackedRelation>().swap(p.g3);
  }
  return total;
}

RelationBatch to_batch(std::vector<PackedRelation> packed, std::uint64_t matches,
                       std::uint64_t nonempty) {
  std::sort(packed.begin(), packed.end());
  RelationBatch batch;
  batch.matches = matches;
  batch.nonempty = nonempty;
  batch.relations.reserve(packed.size());
  for (const PackedRelation& p : packed) batch.relations.push_back(unpack(p));
  std::sort(batch.relations.begin(), batch.relations.end());
  return batch;
}

}  // namespace

RelationVector g2_relation(const GaussWord& w, const PatternMatch2& m, const GeneratorTable& table) {
  return unpack(pack_g2(w, m, table));
}

RelationVector g3_relation(const GaussWord& w, const PatternMatch3& m, const GeneratorTable& table) {
  return unpack(pack_g3(w, m, table));
}

RelationBatch g2_relations(const GeneratorTable& table, const BuildOptions& opts) {
  ScanResult s = scan(table, true, false, false, opts);
  return to_batch(std::move(s.g2), s.raw.g2_matches, s.raw.g2_nonempty);
}

RelationBatch g3_relations(const GeneratorTable& table, const BuildOptions& opts) {
  ScanResult s = scan(table, false, true, false, opts);
  return to_batch(std::move(s.g3), s.raw.g3_matches, s.raw.g3_nonempty);
}

namespace {

std::vector<PackedRelation> merged_unique(ScanResult& s) {
  std::vector<PackedRelation> all = std::move(s.g2);
  all.insert(all.end(), s.g3.begin(), s.g3.end());
  std::vector<PackedRelation>().swap(s.g3);
  sort_unique(all);
  return all;
}

}  // namespace

Presentation build_presentation(int n, const BuildOptions& opts) {
  if (n < 1) throw std::invalid_argument("degree must be at least 1");
  Presentation p;
  p.degree = n;
  p.generators = build_generators(n);
  if (opts.log) *opts.log << "generators: " << p.generators.size() << "\n";
  ScanResult s = scan(p.generators, true, true, true, opts);
  p.raw = s.raw;
  std::vector<PackedRelation> all = merged_unique(s);
  p.relations.reserve(all.size());
  for (const PackedRelation& r : all) p.relations.push_back(unpack(r));
  std::sort(p.relations.begin(), p.relations.end());
  if (opts.log) *opts.log << "unique relations: " << p.relations.size() << "\n";
  return p;
}

PresentationCounts count_presentation(int n, const BuildOptions& opts) {
  if (n < 1) throw std::invalid_argument("degree must be at least 1");
  PresentationCounts c;
  c.degree = n;
  GeneratorTable table = build_generators(n);
  c.generators = table.size();
  if (opts.log) *opts.log << "generators: " << c.generators << "\n";
  ScanResult s = scan(table, true, true, true, opts);
  c.raw = s.raw;
  c.unique_relations = merged_unique(s).size();
  return c;
}

void write_presentation(std::ostream& out, const Presentation& p) {
  out << "# polyak-presentation v1\n";
  out << "degree " << p.degree << "\n";
  out << "generators " << p.generators.size() << "\n";
  for (GeneratorId i = 0; i < p.generators.size(); ++i) {
    out << i << ' ' << p.generators.word(i).str() << '\n';
  }
  out << "relations " << p.relations.size() << "\n";
  for (const RelationVector& r : p.relations) {
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
      if (i) out << ' ';
      out << r.terms[i].generator << ':' << r.terms[i].coef;
    }
    out << '\n';
  }
}

namespace {

[[noreturn]] void bad_format(const std::string& what) {
  throw std::runtime_error("malformed presentation file: " + what);
}

std::size_t expect_count(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) bad_format("missing '" + key + "' line");
  std::istringstream ls(line);
  std::string word;
  long long value = -1;
  if (!(ls >> word >> value) || word != key || value < 0) bad_format("expected '" + key + " <n>'");
  return static_cast<std::size_t>(value);
}

}  // namespace

Presentation read_presentation(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# polyak-presentation v1") bad_format("bad header");
  Presentation p;
  p.degree = static_cast<int>(expect_count(in, "degree"));
  const std::size_t s = expect_count(in, "generators");
  std::vector<GaussWord> words;
  words.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (!std::getline(in, line)) bad_format("truncated generator list");
    std::istringstream ls(line);
    std::size_t id;
    std::string text;
    if (!(ls >> id >> text) || id != i) bad_format("bad generator line " + std::to_string(i));
    GaussWord w = GaussWord::parse(text);
    if (w.str() != text) bad_format("non-canonical generator " + text);
    if (w.empty() || has_adjacent_double(w) || w.rank() > p.degree) {
      bad_format("generator " + text + " is not an irreducible word of rank 1.." +
                 std::to_string(p.degree));
    }
    words.push_back(w);
  }
  p.generators = GeneratorTable(p.degree, std::move(words));
  const std::size_t t = expect_count(in, "relations");
  p.relations.reserve(t);
  for (std::size_t j = 0; j < t; ++j) {
    if (!std::getline(in, line)) bad_format("truncated relation list");
    std::istringstream ls(line);
    RelationVector r;
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) bad_format("bad term '" + tok + "'");
      unsigned long id = std::stoul(tok.substr(0, colon));
      long coef = std::stol(tok.substr(colon + 1));
      if (id >= s || coef == 0) bad_format("bad term '" + tok + "'");
      if (!r.terms.empty() && r.terms.back().generator >= id) bad_format("ids not ascending");
      r.terms.push_back({static_cast<GeneratorId>(id), static_cast<std::int32_t>(coef)});
    }
    p.relations.push_back(std::move(r));
  }
  return p;
}

}  // namespace polyak
