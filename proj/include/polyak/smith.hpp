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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polyak/presentation.hpp"

namespace polyak {

using Residue = std::uint32_t;

// Arithmetic in Z/2^k Z for 1 <= k <= 31.
class Modulus {
 public:
  explicit Modulus(int bits);

  int bits() const { return bits_; }
  std::uint64_t value() const { return std::uint64_t{1} << bits_; }
  Residue mask() const { return mask_; }

  Residue reduce(std::int64_t a) const { return static_cast<Residue>(a) & mask_; }
  Residue add(Residue a, Residue b) const { return (a + b) & mask_; }
  Residue sub(Residue a, Residue b) const { return (a - b) & mask_; }
  Residue neg(Residue a) const { return (0u - a) & mask_; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(std::uint64_t{a} * b) & mask_;
  }
  bool is_unit(Residue a) const { return a & 1u; }
  // 2-adic valuation; `bits()` for zero.
  int valuation(Residue a) const { return a == 0 ? bits_ : std::countr_zero(a); }
  // Inverse of an odd residue.
  Residue inverse(Residue unit) const;

 private:
  int bits_;
  Residue mask_;
};

struct MatrixEntry {
  std::uint32_t row;
  std::int64_t value;
};

// Integer matrix stored by column; each column sorted by row with no zeros.
// For a presentation, rows are generators and columns are relations.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static SparseMatrix from_presentation(const Presentation& p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  std::size_t nonzeros() const;
  const std::vector<MatrixEntry>& column(std::size_t j) const { return columns_[j]; }

  // Adds `value` to entry (i, j).
  void add(std::size_t i, std::size_t j, std::int64_t value);
  std::int64_t at(std::size_t i, std::size_t j) const;

  // Returns the matrix with columns permuted: result column j = column perm[j].
  SparseMatrix permuted_columns(std::span<const std::size_t> perm) const;

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<MatrixEntry>> columns_;
};

// Matrix text file: "s t" then one "i j v" line per nonzero, 0-based.
void write_matrix(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_matrix(std::istream& in);

struct RowOp {
  enum class Kind : std::uint8_t { kSwap, kAddMultiple, kNegate };
  Kind kind;
  std::uint32_t a;     // swap: first row; add: source row; negate: row
  std::uint32_t b;     // swap: second row; add: destination row
  std::int64_t coef;   // add: multiplier (row b += coef * row a)

  static RowOp swap(std::uint32_t r1, std::uint32_t r2) { return {Kind::kSwap, r1, r2, 0}; }
  static RowOp add_multiple(std::uint32_t src, std::uint32_t dst, std::int64_t c) {
    return {Kind::kAddMultiple, src, dst, c};
  }
  static RowOp negate(std::uint32_t r) { return {Kind::kNegate, r, r, 0}; }
};

// Ordered row operations. The transformation they represent is
// U = op_m * ... * op_1.
class RowOpLog {
 public:
  void push(const RowOp& op) { ops_.push_back(op); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<RowOp>& ops() const { return ops_; }

  // y <- U y (mod 2^k).
  void apply(std::span<Residue> y, const Modulus& mod) const;
  // y <- U^{-1} y (mod 2^k).
  void apply_inverse(std::span<Residue> y, const Modulus& mod) const;

 private:
  std::vector<RowOp> ops_;
};

// Rows `rows` of U = op_m * ... * op_1 (an s x s matrix), reduced mod 2^k,
// computed by a backward sweep without forming U.
std::vector<std::vector<Residue>> u_rows_replay(const RowOpLog& log,
                                                std::span<const std::size_t> rows,
                                                std::size_t s, const Modulus& mod);

enum class UStrategy { kAuto, kDense, kReplay };

struct SnfOptions {
  UStrategy u_strategy = UStrategy::kAuto;
  std::size_t dense_limit = 10000;    // kAuto uses dense U up to this many rows
  int search_limit = 4;               // columns examined by the pivot search
  // Once at most `dense_tail_rows` rows still hold entries and the fill
  // reaches dense_tail_fill * rows^2, the rest is finished densely on random
  // 0/1 combinations of the remaining columns. 0 rows disables it.
  std::size_t dense_tail_rows = 4096;
  double dense_tail_fill = 0.25;
  bool keep_log = false;              // keep the row-operation log in the result
  std::ostream* log = nullptr;        // progress lines, if set
};

struct SmithResult {
  int modulus_bits = 0;
  // d_1 <= ... <= d_s, each a power of two; a zero residue is reported as 2^k.
  std::vector<std::uint64_t> divisors;
  std::size_t nontrivial_start = 0;
  // Rows nontrivial_start..s-1 of U, each of length s, reduced mod 2^k.
  std::vector<std::vector<Residue>> u_rows;
  RowOpLog row_ops;   // filled when SnfOptions::keep_log is set

  std::size_t pivots = 0;
  std::size_t peak_nonzeros = 0;
  std::size_t dense_tail_rows = 0;   // rows finished densely, 0 if none
  UStrategy strategy_used = UStrategy::kAuto;

  std::span<const std::uint64_t> nontrivial_divisors() const {
    return std::span(divisors).subspan(nontrivial_start);
  }
};

// Smith normal form of the row-space cokernel Z^s / (im A + 2^k Z^s).
// Throws std::domain_error if a divisor is not a power of two.
SmithResult snf_sparse_mod2k(const SparseMatrix& a, int k, const SnfOptions& opts = {});

// True iff every column of `a` maps to zero in (+)_j Z/d_j under u_rows.
bool verify_cokernel_map(const SparseMatrix& a, const SmithResult& result);

using BigInt = boost::multiprecision::cpp_int;
using DenseMatrix = std::vector<std::vector<BigInt>>;

struct DenseSnf {
  // min(s, t) diagonal entries followed by zeros up to s; nonnegative,
  // each dividing the next (zeros last).
  std::vector<BigInt> divisors;
  DenseMatrix u;  // s x s, unimodular
  DenseMatrix v;  // t x t, unimodular
};

// Textbook Smith normal form over the integers with both transforms.
// Checks U A V = S before returning and throws std::logic_error otherwise.
DenseSnf snf_dense_naive(const std::vector<std::vector<std::int64_t>>& a);

}  // namespace polyak
