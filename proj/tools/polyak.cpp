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

// polyak: command-line front end.
//
//   polyak enumerate --rank 5
//   polyak group --degree 5
//   polyak table --degree 5 --out t5.txt
//   polyak eval --table t5.txt --word ABACDCBD
//   polyak classify --max-rank 4 --table t5.txt

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "polyak/classify.hpp"
#include "polyak/gaussword.hpp"
#include "polyak/homotopy.hpp"
#include "polyak/invariant.hpp"
#include "polyak/presentation.hpp"
#include "polyak/smith.hpp"

namespace {

using namespace polyak;

constexpr int kExitUsage = 1;
constexpr int kExitFault = 2;

// Bad input detected before any long computation starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int rank = -1;
  int degree = -1;
  int max_rank = -1;
  int bits = 8;
  std::string table_path;
  std::string word;
  std::string out_path;
  std::string matrix_path;
  std::string assignments_path;
  int rank_cap = 0;
  std::size_t node_budget = kDefaultNodeBudget;
  int workers = 0;
  std::string u_strategy = "auto";
  bool counts_only = false;
  bool quiet = false;
};

std::ostream* progress(const Config& c) { return c.quiet ? nullptr : &std::cerr; }

UStrategy parse_strategy(const std::string& s) {
  if (s == "dense") return UStrategy::kDense;
  if (s == "replay") return UStrategy::kReplay;
  return UStrategy::kAuto;
}

TableBuildOptions table_options(const Config& c) {
  TableBuildOptions o;
  o.build.workers = c.workers;
  o.build.log = progress(c);
  o.snf.u_strategy = parse_strategy(c.u_strategy);
  o.snf.log = progress(c);
  return o;
}

// Output goes to --out when given, otherwise stdout. The file is opened
// before the computation so a bad path fails fast.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("no such file: " + path);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return in;
}

GaussWord parse_word(const std::string& text) {
  try {
    return GaussWord::parse(text);
  } catch (const GaussWordError& e) {
    std::string msg = "'" + text + "' is not a Gauss word: " + e.what();
    if (e.position() >= 0) {
      msg += "\n  " + text + "\n  " + std::string(e.position(), ' ') + "^";
    }
    throw UsageError(msg);
  }
}

InvariantTable read_table_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return load_table(in);
}

std::string group_string(std::span<const std::uint64_t> divisors) {
  std::map<std::uint64_t, int> exponents;
  for (std::uint64_t d : divisors) ++exponents[d];
  std::string s = "ℤ";
  for (const auto& [d, p] : exponents) {
    s += " ⊕ ";
    if (p == 1) {
      s += "ℤ/" + std::to_string(d);
    } else {
      s += "(ℤ/" + std::to_string(d) + ")^" + std::to_string(p);
    }
  }
  return s;
}

void print_counts(std::ostream& out, int n, std::uint64_t generators, std::uint64_t relations,
                  const RawCounts& raw) {
  out << "degree " << n << "\n"
      << "generators " << generators << "\n"
      << "relations " << relations << "\n"
      << "g2 " << raw.g2_nonempty << " (matches " << raw.g2_matches << ")\n"
      << "g3 " << raw.g3_nonempty << " (matches " << raw.g3_matches << ")\n";
}

int cmd_enumerate(const Config& c) {
  if (c.rank < 0) throw UsageError("--rank must be nonnegative");
  if (c.rank > 12) throw UsageError("--rank above 12 would write too much output");
  Output out(c.out_path);
  std::uint64_t count = 0;
  for (const GaussWord& w : enumerate_canonical(c.rank)) {
    out.stream() << w.str() << '\n';
    ++count;
  }
  std::cerr << "count " << count << "\n";
  return 0;
}

int cmd_presentation(const Config& c) {
  if (c.degree < 1) throw UsageError("--degree must be at least 1");
  BuildOptions opts{c.workers, progress(c)};
  if (c.counts_only) {
    PresentationCounts pc = count_presentation(c.degree, opts);
    Output out(c.out_path);
    print_counts(out.stream(), pc.degree, pc.generators, pc.unique_relations, pc.raw);
    return 0;
  }
  Output out(c.out_path);
  Presentation p = build_presentation(c.degree, opts);
  write_presentation(out.stream(), p);
  if (!c.out_path.empty()) {
    print_counts(std::cout, p.degree, p.generators.size(), p.relations.size(), p.raw);
  }
  return 0;
}

int cmd_group(const Config& c) {
  if (c.degree < 0) throw UsageError("--degree must be nonnegative");
  if (c.degree == 0) {
    std::cout << group_string({}) << "\n";
    return 0;
  }
  const auto start = std::chrono::steady_clock::now();
  TableBuildOptions o = table_options(c);
  Presentation p = build_presentation(c.degree, o.build);
  SparseMatrix a = SparseMatrix::from_presentation(p);
  SmithResult snf = snf_sparse_mod2k(a, std::max(1, c.degree - 1), o.snf);
  if (!verify_cokernel_map(a, snf)) throw std::logic_error("SNF transform check failed");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << group_string(snf.nontrivial_divisors()) << "\n";
  print_counts(std::cout, p.degree, p.generators.size(), p.relations.size(), p.raw);
  if (!c.quiet) std::cerr << "time " << secs << " s\n";
  return 0;
}

int cmd_table(const Config& c) {
  if (c.degree < 1) throw UsageError("--degree must be at least 1");
  Output out(c.out_path);
  InvariantTable t = build_table(c.degree, table_options(c));
  save_table(out.stream(), t);
  std::cerr << "entries " << t.size() << "\n";
  return 0;
}

int cmd_eval(const Config& c) {
  if (c.table_path.empty()) throw UsageError("--table is required");
  const GaussWord w = parse_word(c.word);
  const InvariantTable t = read_table_file(c.table_path);
  const Value v = evaluate(t, w);
  std::cout << v.str();
  if (!v.is_zero()) std::cout << " (order " << element_order(v, t.moduli()) << ")";
  std::cout << "\n";
  return 0;
}

int cmd_classify(const Config& c) {
  if (c.max_rank < 0) throw UsageError("--max-rank must be nonnegative");
  if (c.table_path.empty()) throw UsageError("--table is required");
  const InvariantTable t = read_table_file(c.table_path);
  Output out(c.out_path);
  std::optional<Output> assignments;
  if (!c.assignments_path.empty()) assignments.emplace(c.assignments_path);
  ClassifyOptions opts;
  opts.rank_cap = c.rank_cap;
  opts.node_budget = c.node_budget;
  opts.workers = c.workers;
  opts.log = progress(c);
  Classification cl = classify(c.max_rank, t, opts);
  write_report(out.stream(), cl);
  if (assignments) write_assignments(assignments->stream(), cl);
  return 0;
}

int cmd_snf(const Config& c) {
  if (c.matrix_path.empty()) throw UsageError("--matrix is required");
  if (c.bits < 1 || c.bits > 31) throw UsageError("--bits must be in [1, 31]");
  std::ifstream in = open_input(c.matrix_path);
  SparseMatrix a = read_matrix(in);
  SnfOptions opts;
  opts.u_strategy = parse_strategy(c.u_strategy);
  opts.log = progress(c);
  SmithResult r = snf_sparse_mod2k(a, c.bits, opts);
  const bool ok = verify_cokernel_map(a, r);
  std::cout << "divisors";
  for (std::uint64_t d : r.nontrivial_divisors()) std::cout << ' ' << d;
  std::cout << "\n" << "trivial " << r.nontrivial_start << "\n";
  std::cout << "group " << group_string(r.nontrivial_divisors()).substr(std::string("ℤ").size())
            << "\n";
  if (!ok) throw std::logic_error("SNF transform check failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss-word homotopy invariants and classification"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", c.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet", c.quiet, "no progress output");
  };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--u-strategy", c.u_strategy, "how the SNF transform is tracked")
        ->check(CLI::IsMember({"auto", "dense", "replay"}));
  };

  auto* enumerate = app.add_subcommand("enumerate", "list canonical Gauss words of a rank");
  enumerate->add_option("--rank", c.rank, "rank")->required();
  enumerate->add_option("--out", c.out_path, "output file");

  auto* presentation = app.add_subcommand("presentation", "write the presentation of H_n");
  presentation->add_option("--degree", c.degree, "degree n")->required();
  presentation->add_option("--out", c.out_path, "output file");
  presentation->add_flag("--counts-only", c.counts_only, "only count generators and relations");
  add_common(presentation);

  auto* group = app.add_subcommand("group", "structure of G_n");
  group->add_option("--degree", c.degree, "degree n")->required();
  add_common(group);
  add_strategy(group);

  auto* table = app.add_subcommand("table", "build the invariant table of degree n");
  table->add_option("--degree", c.degree, "degree n")->required();
  table->add_option("--out", c.out_path, "output file");
  add_common(table);
  add_strategy(table);

  auto* eval = app.add_subcommand("eval", "evaluate the invariant on a word");
  eval->add_option("--table", c.table_path, "table file")->required();
  eval->add_option("--word", c.word, "Gauss word ('-' for empty)")->required();

  auto* classify_cmd = app.add_subcommand("classify", "classify words up to a rank");
  classify_cmd->add_option("--max-rank,--rank", c.max_rank, "largest rank")->required();
  classify_cmd->add_option("--table", c.table_path, "table file")->required();
  classify_cmd->add_option("--out", c.out_path, "report file");
  classify_cmd->add_option("--assignments", c.assignments_path, "word-to-class file");
  classify_cmd->add_option("--rank-cap", c.rank_cap, "largest rank visited by move search");
  classify_cmd->add_option("--node-budget", c.node_budget, "search node budget per pair");
  add_common(classify_cmd);

  auto* snf = app.add_subcommand("snf", "Smith normal form of a matrix file modulo 2^k");
  snf->add_option("--matrix", c.matrix_path, "matrix file")->required();
  snf->add_option("--bits", c.bits, "k");
  snf->add_flag("--quiet", c.quiet, "no progress output");
  add_strategy(snf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*enumerate) return cmd_enumerate(c);
    if (*presentation) return cmd_presentation(c);
    if (*group) return cmd_group(c);
    if (*table) return cmd_table(c);
    if (*eval) return cmd_eval(c);
    if (*classify_cmd) return cmd_classify(c);
    if (*snf) return cmd_snf(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitUsage;
}
