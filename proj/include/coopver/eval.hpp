//===----------------------------------------------------------------------===//
//
// Copyright 2026 The coopver authors
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
//
//===----------------------------------------------------------------------===//
//
// Fixed-width machine-integer semantics. Values are stored as raw bit
// patterns masked to the program width; signedness only matters for
// comparison, division and printing. C's usual conversions apply: an
// operation is unsigned as soon as one operand is unsigned.
//
// Two evaluation modes exist. Program execution treats division by zero
// as a fault (the transition blocks). Logical queries use a total
// extension (x / 0 = all ones, x % 0 = x, signed variants via
// magnitudes) which the bit-level encoder reproduces exactly.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coopver/expr.hpp"

namespace coopver {

struct Variable {
  std::string name;
  bool is_signed = false;
};

class SymbolTable {
public:
  explicit SymbolTable(int width = 8);

  int width() const { return width_; }
  uint64_t mask() const { return mask_; }
  size_t size() const { return vars_.size(); }
  const std::vector<Variable> &vars() const { return vars_; }
  const Variable &operator[](size_t i) const { return vars_[i]; }

  /// Adds a variable; throws Error on redeclaration.
  int add(const std::string &name, bool is_signed);
  std::optional<int> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  int64_t as_signed(uint64_t bits) const;
  uint64_t truncate(int64_t v) const { return static_cast<uint64_t>(v) & mask_; }
  /// Decimal rendering respecting the variable's signedness.
  std::string format(size_t var, uint64_t bits) const;

private:
  int width_;
  uint64_t mask_;
  std::vector<Variable> vars_;
  std::unordered_map<std::string, int> index_;
};

using Valuation = std::vector<uint64_t>;

namespace bvsem {

inline uint64_t sign_bit(uint64_t mask) { return (mask >> 1) + 1; }
inline bool negative(uint64_t a, uint64_t mask) { return (a & sign_bit(mask)) != 0; }
inline uint64_t neg(uint64_t a, uint64_t mask) { return (~a + 1) & mask; }
inline uint64_t udiv(uint64_t a, uint64_t b, uint64_t mask) { return b == 0 ? mask : a / b; }
inline uint64_t urem(uint64_t a, uint64_t b) { return b == 0 ? a : a % b; }
uint64_t sdiv(uint64_t a, uint64_t b, uint64_t mask);
uint64_t srem(uint64_t a, uint64_t b, uint64_t mask);
bool slt(uint64_t a, uint64_t b, uint64_t mask);

} // namespace bvsem

/// Static sort/sign typing: an arithmetic expression is signed iff all its
/// variable operands are signed.
bool is_signed_expr(const Expr &e, const SymbolTable &symbols);

/// An expression compiled against a symbol table for repeated evaluation.
class Evaluator {
public:
  Evaluator(const ExprPtr &e, const SymbolTable &symbols);

  /// Returns the value (booleans as 0/1), or nullopt on a division fault
  /// when `total` is false.
  std::optional<uint64_t> operator()(std::span<const uint64_t> values,
                                     bool total = false) const;

private:
  struct Instr {
    ExprKind op;
    bool is_signed;
    uint64_t operand;
  };
  std::vector<Instr> code_;
  uint64_t mask_;
};

std::optional<uint64_t> eval(const ExprPtr &e, const SymbolTable &symbols,
                             std::span<const uint64_t> values, bool total = false);
std::optional<bool> eval_bool(const ExprPtr &e, const SymbolTable &symbols,
                              std::span<const uint64_t> values, bool total = false);

/// Throws Error naming the first variable of `e` missing from `symbols`.
void check_declared(const ExprPtr &e, const SymbolTable &symbols);

} // namespace coopver
