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

#include "coopver/validity.hpp"

#include "coopver/bitblast.hpp"

namespace coopver {

std::string to_string(Validity v) {
  switch (v) {
  case Validity::Valid:
    return "valid";
  case Validity::CounterModel:
    return "counter-model";
  case Validity::Unknown:
    return "unknown";
  }
  return "unknown";
}

namespace {

ValidityResult by_enumeration(const ExprPtr &f, const SymbolTable &symbols,
                              const std::vector<int> &vars) {
  Evaluator ev(f, symbols);
  Valuation v(symbols.size(), 0);
  const int w = symbols.width();
  const uint64_t total = uint64_t{1} << (w * vars.size());
  for (uint64_t code = 0; code < total; ++code) {
    for (size_t i = 0; i < vars.size(); ++i)
      v[vars[i]] = (code >> (w * i)) & symbols.mask();
    if (*ev(v, true) == 0)
      return {Validity::CounterModel, v, "enumeration"};
  }
  return {Validity::Valid, std::nullopt, "enumeration"};
}

ValidityResult by_sat(const ExprPtr &f, const SymbolTable &symbols, const std::vector<int> &vars,
                      int64_t budget) {
  SatSolver solver;
  BitBlaster bb(solver, symbols);
  std::vector<Bits> env(symbols.size());
  for (int v : vars)
    env[v] = bb.fresh();
  for (auto &b : env)
    if (b.empty())
      b = bb.constant(0);
  Lit phi = bb.boolean(f, env);
  auto r = solver.solve({~phi}, budget);
  if (r == SatSolver::Result::Unsat)
    return {Validity::Valid, std::nullopt, "sat"};
  if (r == SatSolver::Result::Unknown)
    return {Validity::Unknown, std::nullopt, "sat"};
  Valuation m(symbols.size(), 0);
  for (int v : vars)
    m[v] = bb.model_value(env[v]);
  return {Validity::CounterModel, m, "sat"};
}

} // namespace

ValidityResult valid(const ExprPtr &formula, const SymbolTable &symbols,
                     const ValidityOptions &opts) {
  check_declared(formula, symbols);
  std::vector<int> vars;
  for (const auto &name : free_vars(formula))
    vars.push_back(*symbols.find(name));
  const size_t bits = static_cast<size_t>(symbols.width()) * vars.size();
  if (opts.allow_enumeration && bits < 63 && (uint64_t{1} << bits) <= opts.enumeration_budget)
    return by_enumeration(formula, symbols, vars);
  if (opts.allow_sat)
    return by_sat(formula, symbols, vars, opts.conflict_budget);
  return {Validity::Unknown, std::nullopt, "none"};
}

bool equivalent(const ExprPtr &a, const ExprPtr &b, const SymbolTable &symbols) {
  ExprPtr iff = mk_and(mk_implies(a, b), mk_implies(b, a));
  return valid(iff, symbols).status == Validity::Valid;
}

} // namespace coopver
