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

#include "coopver/eval.hpp"

#include <functional>

namespace coopver {

SymbolTable::SymbolTable(int width) : width_(width) {
  if (width < 1 || width > 32)
    throw Error("integer width must be between 1 and 32, got " + std::to_string(width));
  mask_ = width == 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
}

int SymbolTable::add(const std::string &name, bool is_signed) {
  if (index_.count(name))
    throw Error("redeclaration of variable '" + name + "'");
  int id = static_cast<int>(vars_.size());
  vars_.push_back({name, is_signed});
  index_.emplace(name, id);
  return id;
}

std::optional<int> SymbolTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

int64_t SymbolTable::as_signed(uint64_t bits) const {
  bits &= mask_;
  if (bvsem::negative(bits, mask_))
    return static_cast<int64_t>(bits) - static_cast<int64_t>(mask_) - 1;
  return static_cast<int64_t>(bits);
}

std::string SymbolTable::format(size_t var, uint64_t bits) const {
  if (vars_[var].is_signed)
    return std::to_string(as_signed(bits));
  return std::to_string(bits & mask_);
}

namespace bvsem {

uint64_t sdiv(uint64_t a, uint64_t b, uint64_t mask) {
  bool na = negative(a, mask), nb = negative(b, mask);
  uint64_t ma = na ? neg(a, mask) : a;
  uint64_t mb = nb ? neg(b, mask) : b;
  uint64_t q = udiv(ma, mb, mask);
  return na != nb ? neg(q, mask) : q;
}

uint64_t srem(uint64_t a, uint64_t b, uint64_t mask) {
  bool na = negative(a, mask), nb = negative(b, mask);
  uint64_t ma = na ? neg(a, mask) : a;
  uint64_t mb = nb ? neg(b, mask) : b;
  uint64_t r = urem(ma, mb);
  return na ? neg(r, mask) : r;
}

bool slt(uint64_t a, uint64_t b, uint64_t mask) {
  uint64_t s = sign_bit(mask);
  return (a ^ s) < (b ^ s);
}

} // namespace bvsem

bool is_signed_expr(const Expr &e, const SymbolTable &symbols) {
  switch (e.kind()) {
  case ExprKind::IntLit:
  case ExprKind::BoolLit:
    return true;
  case ExprKind::Var: {
    auto id = symbols.find(e.name());
    return id ? symbols[*id].is_signed : true;
  }
  default:
    for (const auto &a : e.args())
      if (!is_signed_expr(*a, symbols))
        return false;
    return true;
  }
}

void check_declared(const ExprPtr &e, const SymbolTable &symbols) {
  for (const auto &v : free_vars(e))
    if (!symbols.contains(v))
      throw Error("use of undeclared variable '" + v + "'");
}

Evaluator::Evaluator(const ExprPtr &e, const SymbolTable &symbols) : mask_(symbols.mask()) {
  std::function<void(const Expr &)> emit = [&](const Expr &x) {
    for (const auto &a : x.args())
      emit(*a);
    Instr in{x.kind(), false, 0};
    switch (x.kind()) {
    case ExprKind::IntLit:
      in.operand = symbols.truncate(x.value());
      break;
    case ExprKind::BoolLit:
      in.operand = x.value() ? 1 : 0;
      break;
    case ExprKind::Var: {
      auto id = symbols.find(x.name());
      if (!id)
        throw Error("use of undeclared variable '" + x.name() + "'");
      in.operand = static_cast<uint64_t>(*id);
      break;
    }
    default:
      in.is_signed = is_signed_expr(x, symbols);
      if (is_comparison(x.kind()))
        in.is_signed = is_signed_expr(*x.arg(0), symbols) && is_signed_expr(*x.arg(1), symbols);
      break;
    }
    code_.push_back(in);
  };
  emit(*e);
}

std::optional<uint64_t> Evaluator::operator()(std::span<const uint64_t> values,
                                              bool total) const {
  uint64_t stack[64];
  std::vector<uint64_t> big;
  uint64_t *st = stack;
  if (code_.size() > 64) {
    big.resize(code_.size());
    st = big.data();
  }
  size_t sp = 0;
  const uint64_t m = mask_;
  bool fault = false;
  for (const Instr &in : code_) {
    switch (in.op) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
      st[sp++] = in.operand;
      break;
    case ExprKind::Var:
      st[sp++] = values[in.operand] & m;
      break;
    case ExprKind::Neg:
      st[sp - 1] = bvsem::neg(st[sp - 1], m);
      break;
    case ExprKind::Not:
      st[sp - 1] = st[sp - 1] ? 0 : 1;
      break;
    default: {
      uint64_t b = st[--sp];
      uint64_t a = st[sp - 1];
      uint64_t r = 0;
      switch (in.op) {
      case ExprKind::Add:
        r = (a + b) & m;
        break;
      case ExprKind::Sub:
        r = (a - b) & m;
        break;
      case ExprKind::Mul:
        r = (a * b) & m;
        break;
      case ExprKind::Div:
        if (b == 0 && !total)
          fault = true;
        r = in.is_signed ? bvsem::sdiv(a, b, m) : bvsem::udiv(a, b, m);
        break;
      case ExprKind::Rem:
        if (b == 0 && !total)
          fault = true;
        r = in.is_signed ? bvsem::srem(a, b, m) : bvsem::urem(a, b);
        break;
      case ExprKind::Eq:
        r = a == b;
        break;
      case ExprKind::Ne:
        r = a != b;
        break;
      case ExprKind::Lt:
        r = in.is_signed ? bvsem::slt(a, b, m) : a < b;
        break;
      case ExprKind::Le:
        r = in.is_signed ? !bvsem::slt(b, a, m) : a <= b;
        break;
      case ExprKind::Gt:
        r = in.is_signed ? bvsem::slt(b, a, m) : a > b;
        break;
      case ExprKind::Ge:
        r = in.is_signed ? !bvsem::slt(a, b, m) : a >= b;
        break;
      case ExprKind::And:
        r = a && b;
        break;
      case ExprKind::Or:
        r = a || b;
        break;
      default:
        break;
      }
      st[sp - 1] = r;
      break;
    }
    }
  }
  if (fault)
    return std::nullopt;
  return st[0];
}

std::optional<uint64_t> eval(const ExprPtr &e, const SymbolTable &symbols,
                             std::span<const uint64_t> values, bool total) {
  return Evaluator(e, symbols)(values, total);
}

std::optional<bool> eval_bool(const ExprPtr &e, const SymbolTable &symbols,
                              std::span<const uint64_t> values, bool total) {
  auto v = eval(e, symbols, values, total);
  if (!v)
    return std::nullopt;
  return *v != 0;
}

} // namespace coopver
