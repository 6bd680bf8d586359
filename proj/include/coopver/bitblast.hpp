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
// Bit-level encoding of fixed-width expressions into CNF. Gates are
// Tseitin-encoded with structural hashing and constant propagation.
// Division uses the total extension (x / 0 = all ones, x % 0 = x);
// callers that need fault semantics collect the divisor-nonzero
// conditions through the `defined` output.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "coopver/eval.hpp"
#include "coopver/sat.hpp"

namespace coopver {

using Bits = std::vector<Lit>; // least significant bit first

class BitBlaster {
public:
  BitBlaster(SatSolver &solver, const SymbolTable &symbols);

  SatSolver &solver() { return solver_; }
  const SymbolTable &symbols() const { return symbols_; }
  int width() const { return symbols_.width(); }

  Lit lit_true() const { return solver_.true_lit(); }
  Lit lit_false() const { return ~solver_.true_lit(); }
  Lit fresh_lit() { return Lit::make(solver_.new_var()); }

  Lit mk_and(Lit a, Lit b);
  Lit mk_or(Lit a, Lit b) { return ~mk_and(~a, ~b); }
  Lit mk_xor(Lit a, Lit b);
  Lit mk_ite(Lit c, Lit t, Lit e);
  Lit mk_implies(Lit a, Lit b) { return mk_or(~a, b); }
  Lit and_all(const std::vector<Lit> &ls);
  Lit or_all(const std::vector<Lit> &ls);

  Bits fresh();
  Bits constant(uint64_t v);
  Bits ite(Lit c, const Bits &t, const Bits &e);
  Bits add(const Bits &a, const Bits &b);
  Bits sub(const Bits &a, const Bits &b);
  Bits neg(const Bits &a);
  Bits mul(const Bits &a, const Bits &b);
  void udivrem(const Bits &a, const Bits &b, Bits &q, Bits &r);
  Bits sdiv(const Bits &a, const Bits &b);
  Bits srem(const Bits &a, const Bits &b);
  Lit eq(const Bits &a, const Bits &b);
  Lit ult(const Bits &a, const Bits &b);
  Lit slt(const Bits &a, const Bits &b);

  /// Encodes an arithmetic expression over per-variable bit vectors
  /// (indexed like the symbol table). Divisor-nonzero literals are appended
  /// to `defined` when it is non-null.
  Bits arith(const ExprPtr &e, const std::vector<Bits> &env, std::vector<Lit> *defined = nullptr);
  Lit boolean(const ExprPtr &e, const std::vector<Bits> &env, std::vector<Lit> *defined = nullptr);

  uint64_t model_value(const Bits &b) const;

private:
  Lit gate(int op, Lit a, Lit b);

  SatSolver &solver_;
  const SymbolTable &symbols_;
  std::map<std::tuple<int, int, int>, Lit> cache_;
  std::map<std::tuple<int, int, int>, Lit> ite_cache_;
};

} // namespace coopver
