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

#include "polyak/invariant.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polyak {

bool Value::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](std::uint64_t c) { return c == 0; });
}

std::string Value::str() const {
  if (components.empty()) return "0";
  std::string s;
  for (std::size_t j = 0; j < components.size(); ++j) {
    if (j) s += ' ';
    s += std::to_string(components[j]);
  }
  return s;
}

LinearCombination LinearCombination::merged() const {
  std::map<GaussWord, std::int64_t> sum;
  for (const auto& [c, w] : terms) sum[w] += c;
  LinearCombination out;
  for (const auto& [w, c] : sum) {
    if (c != 0) out.terms.emplace_back(c, w);
  }
  return out;
}

InvariantTable::InvariantTable(int degree, std::vector<std::uint64_t> moduli)
    : degree_(degree), moduli_(std::move(moduli)) {
  for (std::uint64_t d : moduli_) {
    if (d < 2 || !std::has_single_bit(d)) {
      throw std::invalid_argument("modulus " + std::to_string(d) + " is not a power of two > 1");
    }
  }
  if (!std::is_sorted(moduli_.begin(), moduli_.end())) {
    throw std::invalid_argument("moduli must be ascending");
  }
}

void InvariantTable::set(const GaussWord& w, Value v) {
  if (v.components.size() != moduli_.size()) throw std::invalid_argument("value dimension mismatch");
  for (std::size_t j = 0; j < moduli_.size(); ++j) v.components[j] %= moduli_[j];
  if (v.is_zero()) {
    entries_.erase(w);
    return;
  }
  min_rank_ = std::min(min_rank_, w.rank());
  max_rank_ = std::max(max_rank_, w.rank());
  entries_[w] = std::move(v);
}

Value InvariantTable::generator_value(const GaussWord& w) const {
  auto it = entries_.find(w);
  return it == entries_.end() ? zero() : it->second;
}

void InvariantTable::accumulate(Value& acc, const Value& v, std::int64_t coef) const {
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    // Moduli are powers of two, so wrapping unsigned arithmetic reduces exactly.
    const std::uint64_t mask = moduli_[j] - 1;
    acc.components[j] = (acc.components[j] + static_cast<std::uint64_t>(coef) * v.components[j]) & mask;
  }
}

InvariantTable table_from_smith(const Presentation& p, const SmithResult& snf) {
  if (snf.divisors.size() != p.generators.size()) {
    throw std::invalid_argument("SNF does not match the presentation");
  }
  const auto divisors = snf.nontrivial_divisors();
  InvariantTable table(p.degree, std::vector<std::uint64_t>(divisors.begin(), divisors.end()));
  for (GeneratorId i = 0; i < p.generators.size(); ++i) {
    Value v;
    v.components.reserve(divisors.size());
    for (std::size_t j = 0; j < divisors.size(); ++j) {
      v.components.push_back(snf.u_rows[j][i] % divisors[j]);
    }
    table.set(p.generators.word(i), std::move(v));
  }
  return table;
}

InvariantTable build_table(int n, const TableBuildOptions& opts) {
  Presentation p = build_presentation(n, opts.build);
  SparseMatrix a = SparseMatrix::from_presentation(p);
  const int k = std::max(1, n - 1);
  SmithResult snf = snf_sparse_mod2k(a, k, opts.snf);
  if (!verify_cokernel_map(a, snf)) {
    throw std::logic_error("SNF transform does not kill the relations");
  }
  return table_from_smith(p, snf);
}

Value evaluate(const InvariantTable& table, const GaussWord& p) {
  Value acc = table.zero();
  const int r = p.rank();
  const int top = std::min(table.max_rank_, r);
  for (int k = table.min_rank_; k <= top; ++k) {
    const LetterMask limit = LetterMask{1} << r;
    for (LetterMask s = (LetterMask{1} << k) - 1; s < limit;) {
      auto it = table.entries_.find(induced_subword(p, s));
      if (it != table.entries_.end()) table.accumulate(acc, it->second, 1);
      LetterMask low = s & -s;
      LetterMask ripple = s + low;
      s = (((ripple ^ s) >> 2) / low) | ripple;
    }
  }
  return acc;
}

std::pair<std::int64_t, Value> evaluate_combination(const InvariantTable& table,
                                                    const LinearCombination& x) {
  std::int64_t coefficient_sum = 0;
  Value acc = table.zero();
  for (const auto& [c, w] : x.terms) {
    coefficient_sum += c;
    table.accumulate(acc, evaluate(table, w), c);
  }
  return {coefficient_sum, acc};
}

std::uint64_t element_order(const Value& v, const std::vector<std::uint64_t>& moduli) {
  std::uint64_t order = 1;
  for (std::size_t j = 0; j < v.components.size(); ++j) {
    const std::uint64_t c = v.components[j] % moduli.at(j);
    if (c == 0) continue;
    // Order of c in Z/d for d = 2^e is d / 2^{v2(c)}.
    order = std::max(order, moduli[j] >> std::countr_zero(c));
  }
  return order;
}

LinearCombination semiletter_resolution(const GaussWord& w, LetterMask marked) {
  marked &= full_mask(w);
  LinearCombination x;
  // Every subset of `marked`, including the empty one.
  for (LetterMask t = marked;; t = (t - 1) & marked) {
    const std::int64_t sign = (std::popcount(t) % 2) ? -1 : 1;
    x.terms.emplace_back(sign, delete_letters(w, t));
    if (t == 0) break;
  }
  return x.merged();
}

void save_table(std::ostream& out, const InvariantTable& table) {
  out << "# ftiv-table v1\n";
  out << "degree " << table.degree() << "\n";
  out << "moduli";
  for (std::uint64_t d : table.moduli()) out << ' ' << d;
  out << "\n";
  for (const auto& [w, v] : table.entries()) {
    out << w.str();
    for (std::uint64_t c : v.components) out << ' ' << c;
    out << '\n';
  }
}

namespace {

[[noreturn]] void bad_table(const std::string& what) {
  throw std::runtime_error("malformed table file: " + what);
}

}  // namespace

InvariantTable load_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# ftiv-table v1") bad_table("bad header");

  int degree = -1;
  {
    if (!std::getline(in, line)) bad_table("missing degree");
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> degree) || key != "degree" || degree < 1) bad_table("bad degree line");
  }
  std::vector<std::uint64_t> moduli;
  {
    if (!std::getline(in, line)) bad_table("missing moduli");
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key != "moduli") bad_table("bad moduli line");
    long long d;
    while (ls >> d) {
      if (d < 2 || !std::has_single_bit(static_cast<std::uint64_t>(d))) {
        bad_table("modulus " + std::to_string(d) + " is not a power of two > 1");
      }
      moduli.push_back(static_cast<std::uint64_t>(d));
    }
    if (!ls.eof()) bad_table("bad modulus token");
    if (!std::is_sorted(moduli.begin(), moduli.end())) bad_table("moduli not ascending");
  }

  InvariantTable table(degree, moduli);
  std::size_t lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = " on line " + std::to_string(lineno);
    std::istringstream ls(line);
    std::string text;
    ls >> text;
    GaussWord w;
    try {
      w = GaussWord::parse(text);
    } catch (const GaussWordError& e) {
      bad_table(std::string(e.what()) + where);
    }
    if (w.str() != text) bad_table("non-canonical word " + text + where);
    if (w.rank() < 2 || w.rank() > degree || has_adjacent_double(w)) {
      bad_table("word " + text + " is not a generator of degree " + std::to_string(degree) + where);
    }
    if (table.entries().count(w)) bad_table("duplicate word " + text + where);
    Value v;
    long long c;
    while (ls >> c) {
      const std::size_t j = v.components.size();
      if (j >= moduli.size()) bad_table("too many components" + where);
      if (c < 0 || static_cast<std::uint64_t>(c) >= moduli[j]) {
        bad_table("component out of range" + where);
      }
      v.components.push_back(static_cast<std::uint64_t>(c));
    }
    if (!ls.eof()) bad_table("bad component token" + where);
    if (v.components.size() != moduli.size()) bad_table("too few components" + where);
    if (v.is_zero()) bad_table("zero vector stored" + where);
    // 2^{n-m+1} v(w) = 0 for a word of rank m.
    Value scaled = table.zero();
    const int shift = degree - w.rank() + 1;
    table.accumulate(scaled, v, shift >= 63 ? 0 : (std::int64_t{1} << shift));
    if (!scaled.is_zero()) bad_table("torsion bound violated by " + text + where);
    table.set(w, std::move(v));
  }
  return table;
}

}  // namespace polyak
