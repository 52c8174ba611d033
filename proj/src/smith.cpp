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

#include "polyak/smith.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace polyak {

Modulus::Modulus(int bits) : bits_(bits) {
  if (bits < 1 || bits > 31) throw std::invalid_argument("modulus exponent must be in [1, 31]");
  mask_ = static_cast<Residue>((std::uint64_t{1} << bits) - 1);
}

Residue Modulus::inverse(Residue unit) const {
  if (!is_unit(unit)) throw std::domain_error("inverse of an even residue");
  // Newton iteration doubles the number of correct low bits each step.
  Residue x = unit;
  for (int i = 0; i < 5; ++i) x *= 2u - unit * x;
  return x & mask_;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix SparseMatrix::from_presentation(const Presentation& p) {
  SparseMatrix m(p.generators.size(), p.relations.size());
  for (std::size_t j = 0; j < p.relations.size(); ++j) {
    auto& col = m.columns_[j];
    col.reserve(p.relations[j].terms.size());
    for (const Term& t : p.relations[j].terms) col.push_back({t.generator, t.coef});
  }
  return m;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

void SparseMatrix::add(std::size_t i, std::size_t j, std::int64_t value) {
  if (i >= rows_ || j >= columns_.size()) throw std::out_of_range("matrix index out of range");
  if (value == 0) return;
  auto& col = columns_[j];
  auto it = std::lower_bound(col.begin(), col.end(), i,
                             [](const MatrixEntry& e, std::size_t r) { return e.row < r; });
  if (it != col.end() && it->row == i) {
    it->value += value;
    if (it->value == 0) col.erase(it);
  } else {
    col.insert(it, {static_cast<std::uint32_t>(i), value});
  }
}

std::int64_t SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto& col = columns_.at(j);
  auto it = std::lower_bound(col.begin(), col.end(), i,
                             [](const MatrixEntry& e, std::size_t r) { return e.row < r; });
  return (it != col.end() && it->row == i) ? it->value : 0;
}

SparseMatrix SparseMatrix::permuted_columns(std::span<const std::size_t> perm) const {
  if (perm.size() != cols()) throw std::invalid_argument("permutation size mismatch");
  SparseMatrix m(rows_, cols());
  for (std::size_t j = 0; j < perm.size(); ++j) m.columns_[j] = columns_.at(perm[j]);
  return m;
}

void write_matrix(std::ostream& out, const SparseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (const MatrixEntry& e : m.column(j)) out << e.row << ' ' << j << ' ' << e.value << '\n';
  }
}

SparseMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t s = 0, t = 0;
  if (!std::getline(in, line)) throw std::runtime_error("malformed matrix file: empty");
  {
    std::istringstream ls(line);
    long long rs = -1, ts = -1;
    if (!(ls >> rs >> ts) || rs < 0 || ts < 0) {
      throw std::runtime_error("malformed matrix file: expected 's t' header");
    }
    s = static_cast<std::size_t>(rs);
    t = static_cast<std::size_t>(ts);
  }
  SparseMatrix m(s, t);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long i = -1, j = -1;
    std::int64_t v = 0;
    if (!(ls >> i >> j >> v) || i < 0 || j < 0 || static_cast<std::size_t>(i) >= s ||
        static_cast<std::size_t>(j) >= t) {
      throw std::runtime_error("malformed matrix file: bad entry on line " +
                               std::to_string(lineno));
    }
    m.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Row operation log

void RowOpLog::apply(std::span<Residue> y, const Modulus& mod) const {
  for (const RowOp& op : ops_) {
    switch (op.kind) {
      case RowOp::Kind::kSwap:
        std::swap(y[op.a], y[op.b]);
        break;
      case RowOp::Kind::kAddMultiple:
        y[op.b] = mod.add(y[op.b], mod.mul(mod.reduce(op.coef), y[op.a]));
        break;
      case RowOp::Kind::kNegate:
        y[op.a] = mod.neg(y[op.a]);
        break;
    }
  }
}

void RowOpLog::apply_inverse(std::span<Residue> y, const Modulus& mod) const {
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const RowOp& op = *it;
    switch (op.kind) {
      case RowOp::Kind::kSwap:
        std::swap(y[op.a], y[op.b]);
        break;
      case RowOp::Kind::kAddMultiple:
        y[op.b] = mod.sub(y[op.b], mod.mul(mod.reduce(op.coef), y[op.a]));
        break;
      case RowOp::Kind::kNegate:
        y[op.a] = mod.neg(y[op.a]);
        break;
    }
  }
}

std::vector<std::vector<Residue>> u_rows_replay(const RowOpLog& log,
                                                std::span<const std::size_t> rows,
                                                std::size_t s, const Modulus& mod) {
  const std::size_t m = rows.size();
  // x_j^T = e_{rows[j]}^T * op_m * ... * op_1, swept right to left. Stored
  // generator-major so each op touches one contiguous block of m residues.
  std::vector<Residue> x(s * m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    if (rows[j] >= s) throw std::out_of_range("replay row out of range");
    x[rows[j] * m + j] = 1;
  }
  const auto& ops = log.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const RowOp& op = *it;
    Residue* a = &x[std::size_t{op.a} * m];
    Residue* b = &x[std::size_t{op.b} * m];
    switch (op.kind) {
      case RowOp::Kind::kSwap:
        std::swap_ranges(a, a + m, b);
        break;
      case RowOp::Kind::kAddMultiple: {
        // (x^T (I + c e_b e_a^T))_a = x_a + c x_b
        const Residue c = mod.reduce(op.coef);
        for (std::size_t j = 0; j < m; ++j) a[j] = mod.add(a[j], mod.mul(c, b[j]));
        break;
      }
      case RowOp::Kind::kNegate:
        for (std::size_t j = 0; j < m; ++j) a[j] = mod.neg(a[j]);
        break;
    }
  }
  std::vector<std::vector<Residue>> out(m, std::vector<Residue>(s));
  for (std::size_t g = 0; g < s; ++g) {
    for (std::size_t j = 0; j < m; ++j) out[j][g] = x[g * m + j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse elimination over Z/2^k

namespace {

struct Cell {
  std::uint32_t row;
  Residue value;
};

// Dense copy of U, one byte per entry; valid while 2^k divides 256.
class DenseU {
 public:
  explicit DenseU(std::size_t s) : s_(s), data_(s * s, 0) {
    for (std::size_t i = 0; i < s; ++i) data_[i * s + i] = 1;
  }
  void add_multiple(std::size_t src, std::size_t dst, Residue coef) {
    const std::uint8_t c = static_cast<std::uint8_t>(coef);
    const std::uint8_t* from = &data_[src * s_];
    std::uint8_t* to = &data_[dst * s_];
    for (std::size_t i = 0; i < s_; ++i) to[i] = static_cast<std::uint8_t>(to[i] + c * from[i]);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    std::swap_ranges(&data_[a * s_], &data_[a * s_] + s_, &data_[b * s_]);
  }
  std::vector<Residue> row(std::size_t r, const Modulus& mod) const {
    std::vector<Residue> out(s_);
    for (std::size_t i = 0; i < s_; ++i) out[i] = data_[r * s_ + i] & mod.mask();
    return out;
  }

 private:
  std::size_t s_;
  std::vector<std::uint8_t> data_;
};

class Eliminator {
 public:
  Eliminator(const SparseMatrix& a, const Modulus& mod, const SnfOptions& opts)
      : mod_(mod), opts_(opts), cols_(a.cols()), row_cols_(a.rows()),
        row_valuation_(a.rows(), -1), bucket_of_(a.cols(), 0) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (const MatrixEntry& e : a.column(j)) {
        Residue v = mod_.reduce(e.value);
        if (v == 0) continue;
        cols_[j].push_back({e.row, v});
        row_cols_[e.row].push_back(static_cast<std::uint32_t>(j));
      }
      nonzeros_ += cols_[j].size();
      refresh_bucket(static_cast<std::uint32_t>(j));
    }
    peak_nonzeros_ = nonzeros_;
    for (const auto& rc : row_cols_) active_rows_ += !rc.empty();
  }

  // Runs the elimination. `on_row_op` receives (src, dst, coef) for every
  // row operation row_dst += coef * row_src.
  template <class OnRowOp>
  void run(OnRowOp&& on_row_op) {
    for (;;) {
      if (dense_tail_due()) {
        finish_dense(on_row_op);
        break;
      }
      std::optional<Pivot> p = find_unit_pivot();
      if (!p) p = find_min_valuation_pivot();
      if (!p) break;
      eliminate(*p, on_row_op);
      ++pivots_;
      if (opts_.log && pivots_ % 1000 == 0) {
        *opts_.log << "snf: " << pivots_ << " pivots, " << nonzeros_ << " nonzeros\n";
      }
    }
  }

  // Valuation of the pivot eliminated in each row, -1 for rows never pivoted.
  const std::vector<int>& row_valuation() const { return row_valuation_; }
  std::size_t pivots() const { return pivots_; }
  std::size_t peak_nonzeros() const { return peak_nonzeros_; }
  std::size_t dense_tail_rows() const { return dense_tail_rows_; }

 private:
  struct Pivot {
    std::uint32_t row;
    std::uint32_t col;
    Residue value;
  };

  Residue value_at(std::uint32_t c, std::uint32_t r) const {
    const auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Cell& x, std::uint32_t row) { return x.row < row; });
    return (it != col.end() && it->row == r) ? it->value : 0;
  }

  // Columns holding at least one unit sit in buckets keyed by their length.
  void refresh_bucket(std::uint32_t c) {
    std::size_t want = 0;
    for (const Cell& x : cols_[c]) {
      if (mod_.is_unit(x.value)) {
        want = cols_[c].size();
        break;
      }
    }
    const std::size_t have = bucket_of_[c];
    if (want == have) return;
    if (have != 0) {
      auto it = buckets_.find(have);
      it->second.erase(c);
      if (it->second.empty()) buckets_.erase(it);
    }
    if (want != 0) buckets_[want].insert(c);
    bucket_of_[c] = want;
  }

  // Markowitz-style search among unit entries: columns in increasing length,
  // cost (row length - 1) * (column length - 1). One- and two-term columns
  // are always taken first.
  std::optional<Pivot> find_unit_pivot() const {
    std::optional<Pivot> best;
    std::size_t best_cost = 0;
    int examined = 0;
    for (const auto& [count, members] : buckets_) {
      for (std::uint32_t c : members) {
        for (const Cell& x : cols_[c]) {
          if (!mod_.is_unit(x.value)) continue;
          std::size_t cost = (row_cols_[x.row].size() - 1) * (count - 1);
          if (!best || cost < best_cost) {
            best = Pivot{x.row, c, x.value};
            best_cost = cost;
          }
        }
        ++examined;
        if (best && (best_cost == 0 || examined >= opts_.search_limit)) return best;
      }
      if (best && count <= 2) return best;
    }
    return best;
  }

  // Used once no unit is left: the entry of least 2-adic valuation, which
  // divides every remaining entry.
  std::optional<Pivot> find_min_valuation_pivot() const {
    std::optional<Pivot> best;
    int best_val = mod_.bits();
    for (std::uint32_t c = 0; c < cols_.size(); ++c) {
      for (const Cell& x : cols_[c]) {
        int v = mod_.valuation(x.value);
        if (v < best_val) {
          best_val = v;
          best = Pivot{x.row, c, x.value};
        }
      }
    }
    return best;
  }

  void remove_row_col(std::uint32_t r, std::uint32_t c) {
    auto& rc = row_cols_[r];
    auto it = std::find(rc.begin(), rc.end(), c);
    *it = rc.back();
    rc.pop_back();
    if (rc.empty()) --active_rows_;
  }

  bool dense_tail_due() const {
    if (active_rows_ == 0 || active_rows_ > opts_.dense_tail_rows) return false;
    const double rows = static_cast<double>(active_rows_);
    return static_cast<double>(nonzeros_) >= opts_.dense_tail_fill * rows * rows;
  }

  // Finishes the elimination on a dense matrix. Column operations are free,
  // so the remaining columns may be replaced by any generating set of their
  // span. R + 64 random 0/1 combinations generate it unless their images
  // fail to span N / 2N, which has probability below 2^-64; callers check
  // the final transform with verify_cokernel_map in any case.
  template <class OnRowOp>
  void finish_dense(OnRowOp&& on_row_op) {
    std::vector<std::uint32_t> rows;
    std::vector<std::uint32_t> local(row_cols_.size(), 0);
    for (std::uint32_t r = 0; r < row_cols_.size(); ++r) {
      if (row_cols_[r].empty()) continue;
      local[r] = static_cast<std::uint32_t>(rows.size());
      rows.push_back(r);
    }
    const std::size_t n = rows.size();
    const std::size_t m = n + 64;
    if (opts_.log) *opts_.log << "snf: dense tail, " << n << " rows, " << nonzeros_ << " nonzeros\n";

    std::vector<std::uint32_t> b(n * m, 0);  // row-major, residues mod 2^32
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<std::uint32_t> pick(m);
    for (auto& col : cols_) {
      if (col.empty()) continue;
      for (std::size_t j = 0; j < m; j += 64) {
        const std::uint64_t bits = rng();
        for (std::size_t t = 0; t < 64 && j + t < m; ++t) pick[j + t] = 0u - ((bits >> t) & 1u);
      }
      for (const Cell& x : col) {
        std::uint32_t* dst = &b[local[x.row] * m];
        const auto v = static_cast<std::uint32_t>(x.value);
        for (std::size_t j = 0; j < m; ++j) dst[j] += v & pick[j];
      }
      col.clear();
      col.shrink_to_fit();
    }
    for (auto& rc : row_cols_) rc.clear();
    buckets_.clear();
    std::fill(bucket_of_.begin(), bucket_of_.end(), 0);
    nonzeros_ = 0;
    active_rows_ = 0;

    const auto mask = static_cast<std::uint32_t>(mod_.mask());
    for (std::uint32_t& x : b) x &= mask;
    std::vector<char> row_done(n, 0), col_done(m, 0);
    std::vector<std::uint32_t> q(m);
    const int k = mod_.bits();
    for (;;) {
      // Least valuation among live entries; it divides all of them.
      int best = k;
      std::size_t pr = 0, pc = 0;
      for (std::size_t i = 0; i < n && best > 0; ++i) {
        if (row_done[i]) continue;
        const std::uint32_t* row = &b[i * m];
        for (std::size_t j = 0; j < m; ++j) {
          if (row[j] == 0 || col_done[j]) continue;
          const int v = std::countr_zero(row[j]);
          if (v < best) {
            best = v;
            pr = i;
            pc = j;
            if (v == 0) break;
          }
        }
      }
      if (best == k) break;
      const std::uint32_t* prow = &b[pr * m];
      const auto inv = static_cast<std::uint32_t>(mod_.inverse(prow[pc] >> best));
      auto divide = [&](std::uint32_t a) { return ((a >> best) * inv) & mask; };

      // Column operations clear the pivot row.
      for (std::size_t j = 0; j < m; ++j) {
        q[j] = (j == pc || col_done[j] || prow[j] == 0) ? 0 : divide(prow[j]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (row_done[i]) continue;
        std::uint32_t* row = &b[i * m];
        const std::uint32_t f = row[pc];
        if (f == 0) continue;
        for (std::size_t j = 0; j < m; ++j) row[j] = (row[j] - f * q[j]) & mask;
      }
      // Row operations clear the pivot column and only feed U.
      for (std::size_t i = 0; i < n; ++i) {
        if (i == pr || row_done[i]) continue;
        const std::uint32_t f = b[i * m + pc];
        if (f != 0) on_row_op(rows[pr], rows[i], mod_.neg(divide(f)));
      }
      row_done[pr] = 1;
      col_done[pc] = 1;
      row_valuation_[rows[pr]] = best;
      ++pivots_;
    }
    dense_tail_rows_ = n;
  }

  template <class OnRowOp>
  void eliminate(const Pivot& p, OnRowOp&& on_row_op) {
    const int e = mod_.valuation(p.value);
    const Residue unit_inv = mod_.inverse(p.value >> e);
    // Quotient a / p for an entry a of valuation >= e.
    auto divide = [&](Residue a) { return mod_.mul(a >> e, unit_inv); };

    const std::vector<Cell> pivot_col = cols_[p.col];

    // Column operations clear the pivot row: col c -= (a_rc / p) col_pivot.
    // Their effect on rows other than the pivot row is the Schur complement.
    const std::vector<std::uint32_t> row_members = row_cols_[p.row];
    for (std::uint32_t c : row_members) {
      if (c == p.col) continue;
      const Residue q = divide(value_at(c, p.row));
      update_column(c, q, pivot_col);
    }

    // Row operations clear the pivot column; the pivot row now holds only
    // the pivot, so they change nothing else in the matrix and only feed U.
    for (const Cell& x : pivot_col) {
      if (x.row == p.row) continue;
      on_row_op(p.row, x.row, mod_.neg(divide(x.value)));
    }

    for (const Cell& x : pivot_col) remove_row_col(x.row, p.col);
    nonzeros_ -= pivot_col.size();
    cols_[p.col].clear();
    cols_[p.col].shrink_to_fit();
    refresh_bucket(p.col);
    row_valuation_[p.row] = e;
  }

  // col c <- col c - q * pivot_col; the pivot-row entry cancels exactly.
  void update_column(std::uint32_t c, Residue q, const std::vector<Cell>& pivot_col) {
    std::vector<Cell>& col = cols_[c];
    std::vector<Cell> merged;
    merged.reserve(col.size() + pivot_col.size());
    auto a = col.begin();
    auto b = pivot_col.begin();
    while (a != col.end() || b != pivot_col.end()) {
      if (b == pivot_col.end() || (a != col.end() && a->row < b->row)) {
        merged.push_back(*a++);
      } else if (a == col.end() || b->row < a->row) {
        Residue v = mod_.neg(mod_.mul(q, b->value));
        if (v != 0) {
          merged.push_back({b->row, v});
          row_cols_[b->row].push_back(c);
          if (row_cols_[b->row].size() == 1) ++active_rows_;
        }
        ++b;
      } else {
        Residue v = mod_.sub(a->value, mod_.mul(q, b->value));
        if (v != 0) {
          merged.push_back({a->row, v});
        } else {
          remove_row_col(a->row, c);
        }
        ++a;
        ++b;
      }
    }
    nonzeros_ += merged.size();
    nonzeros_ -= col.size();
    peak_nonzeros_ = std::max(peak_nonzeros_, nonzeros_);
    col = std::move(merged);
    refresh_bucket(c);
  }

  Modulus mod_;
  SnfOptions opts_;
  std::vector<std::vector<Cell>> cols_;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::vector<int> row_valuation_;
  std::vector<std::size_t> bucket_of_;
  std::map<std::size_t, std::set<std::uint32_t>> buckets_;
  std::size_t nonzeros_ = 0;
  std::size_t peak_nonzeros_ = 0;
  std::size_t pivots_ = 0;
  std::size_t active_rows_ = 0;  // rows holding at least one entry
  std::size_t dense_tail_rows_ = 0;
};

}  // namespace

SmithResult snf_sparse_mod2k(const SparseMatrix& a, int k, const SnfOptions& opts) {
  const Modulus mod(k);
  const std::size_t s = a.rows();

  UStrategy strategy = opts.u_strategy;
  if (strategy == UStrategy::kAuto) {
    strategy = (s <= opts.dense_limit && k <= 8) ? UStrategy::kDense : UStrategy::kReplay;
  }
  if (strategy == UStrategy::kDense && k > 8) {
    throw std::invalid_argument("dense U tracking needs k <= 8");
  }
  const bool keep_log = opts.keep_log || strategy == UStrategy::kReplay;

  SmithResult result;
  result.modulus_bits = k;
  result.strategy_used = strategy;
  std::optional<DenseU> dense;
  if (strategy == UStrategy::kDense) dense.emplace(s);

  Eliminator elim(a, mod, opts);
  elim.run([&](std::uint32_t src, std::uint32_t dst, Residue coef) {
    if (keep_log) result.row_ops.push(RowOp::add_multiple(src, dst, coef));
    if (dense) dense->add_multiple(src, dst, coef);
  });
  result.pivots = elim.pivots();
  result.peak_nonzeros = elim.peak_nonzeros();
  result.dense_tail_rows = elim.dense_tail_rows();

  // Divisor of each row: 2^valuation for pivot rows, 2^k for the rest.
  std::vector<int> exponent(s);
  for (std::size_t i = 0; i < s; ++i) {
    int e = elim.row_valuation()[i];
    exponent[i] = e < 0 ? k : e;
  }
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return exponent[x] < exponent[y]; });

  // Realize the sort as row swaps so U's rows line up with the divisors.
  std::vector<std::size_t> at(s), where(s);
  std::iota(at.begin(), at.end(), 0);
  std::iota(where.begin(), where.end(), 0);
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t j = where[order[i]];
    if (j == i) continue;
    if (keep_log) result.row_ops.push(RowOp::swap(static_cast<std::uint32_t>(i),
                                                  static_cast<std::uint32_t>(j)));
    if (dense) dense->swap_rows(i, j);
    std::swap(at[i], at[j]);
    where[at[i]] = i;
    where[at[j]] = j;
  }

  result.divisors.resize(s);
  for (std::size_t i = 0; i < s; ++i) result.divisors[i] = std::uint64_t{1} << exponent[order[i]];
  result.nontrivial_start = static_cast<std::size_t>(
      std::find_if(result.divisors.begin(), result.divisors.end(),
                   [](std::uint64_t d) { return d > 1; }) -
      result.divisors.begin());

  std::vector<std::size_t> rows;
  for (std::size_t i = result.nontrivial_start; i < s; ++i) rows.push_back(i);
  if (dense) {
    for (std::size_t r : rows) result.u_rows.push_back(dense->row(r, mod));
  } else {
    result.u_rows = u_rows_replay(result.row_ops, rows, s, mod);
  }
  if (!opts.keep_log) result.row_ops = RowOpLog{};

  for (std::uint64_t d : result.divisors) {
    if (!std::has_single_bit(d)) throw std::domain_error("divisor is not a power of two");
  }
  return result;
}

bool verify_cokernel_map(const SparseMatrix& a, const SmithResult& result) {
  const Modulus mod(result.modulus_bits);
  const std::size_t m = result.u_rows.size();
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& u = result.u_rows[j];
      Residue sum = 0;
      for (const MatrixEntry& e : a.column(c)) {
        sum = mod.add(sum, mod.mul(u.at(e.row), mod.reduce(e.value)));
      }
      const std::uint64_t d = result.divisors[result.nontrivial_start + j];
      if (sum % d != 0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dense textbook SNF

namespace {

DenseMatrix identity(std::size_t n) {
  DenseMatrix m(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

DenseMatrix multiply(const DenseMatrix& x, const DenseMatrix& y, std::size_t inner,
                     std::size_t rows, std::size_t cols) {
  DenseMatrix out(rows, std::vector<BigInt>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t l = 0; l < inner; ++l) {
      if (x[i][l] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += x[i][l] * y[l][j];
    }
  }
  return out;
}

}  // namespace

DenseSnf snf_dense_naive(const std::vector<std::vector<std::int64_t>>& a) {
  const std::size_t s = a.size();
  const std::size_t t = s == 0 ? 0 : a[0].size();
  DenseMatrix m(s, std::vector<BigInt>(t));
  for (std::size_t i = 0; i < s; ++i) {
    if (a[i].size() != t) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < t; ++j) m[i][j] = a[i][j];
  }
  DenseSnf out;
  out.u = identity(s);
  out.v = identity(t);
  auto& u = out.u;
  auto& v = out.v;

  auto row_addmul = [&](std::size_t dst, std::size_t src, const BigInt& c) {
    for (std::size_t j = 0; j < t; ++j) m[dst][j] += c * m[src][j];
    for (std::size_t j = 0; j < s; ++j) u[dst][j] += c * u[src][j];
  };
  auto col_addmul = [&](std::size_t dst, std::size_t src, const BigInt& c) {
    for (std::size_t i = 0; i < s; ++i) m[i][dst] += c * m[i][src];
    for (std::size_t i = 0; i < t; ++i) v[i][dst] += c * v[i][src];
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    std::swap(m[x], m[y]);
    std::swap(u[x], u[y]);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : m) std::swap(row[x], row[y]);
    for (auto& row : v) std::swap(row[x], row[y]);
  };

  const std::size_t diag = std::min(s, t);
  for (std::size_t d = 0; d < diag; ++d) {
    bool any = false;
    for (;;) {
      // Smallest nonzero entry of the trailing block goes to (d, d).
      std::size_t bi = 0, bj = 0;
      BigInt best = -1;
      for (std::size_t i = d; i < s; ++i) {
        for (std::size_t j = d; j < t; ++j) {
          if (m[i][j] == 0) continue;
          BigInt mag = abs(m[i][j]);
          if (best < 0 || mag < best) {
            best = mag;
            bi = i;
            bj = j;
          }
        }
      }
      if (best < 0) break;
      any = true;
      if (bi != d) row_swap(bi, d);
      if (bj != d) col_swap(bj, d);

      bool clean = true;
      for (std::size_t i = d + 1; i < s; ++i) {
        if (m[i][d] == 0) continue;
        BigInt q = m[i][d] / m[d][d];
        row_addmul(i, d, -q);
        if (m[i][d] != 0) clean = false;
      }
      for (std::size_t j = d + 1; j < t; ++j) {
        if (m[d][j] == 0) continue;
        BigInt q = m[d][j] / m[d][d];
        col_addmul(j, d, -q);
        if (m[d][j] != 0) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = d + 1; i < s && divides; ++i) {
        for (std::size_t j = d + 1; j < t; ++j) {
          if (m[i][j] % m[d][d] != 0) {
            row_addmul(d, i, 1);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (!any) break;
    if (m[d][d] < 0) {
      for (std::size_t j = 0; j < t; ++j) m[d][j] = -m[d][j];
      for (std::size_t j = 0; j < s; ++j) u[d][j] = -u[d][j];
    }
  }

  out.divisors.assign(s, 0);
  for (std::size_t d = 0; d < diag; ++d) out.divisors[d] = m[d][d];

  DenseMatrix original(s, std::vector<BigInt>(t));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < t; ++j) original[i][j] = a[i][j];
  }
  DenseMatrix uav = multiply(multiply(u, original, s, s, t), v, t, s, t);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      const BigInt expect = (i == j) ? out.divisors[i] : BigInt(0);
      if (uav[i][j] != expect) throw std::logic_error("dense SNF check U A V = S failed");
    }
  }
  return out;
}

}  // namespace polyak
