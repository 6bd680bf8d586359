#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace coopver::test {

// Small single-loop programs over at most three variables. Assignments,
// guards and the final property are drawn from a few linear shapes so that
// roughly half of the programs are safe.
class ProgramGenerator {
public:
  explicit ProgramGenerator(uint64_t seed) : rng_(seed) {}

  std::string next() {
    int nv = pick(1, 3);
    vars_.assign(names_, names_ + nv);
    bool is_signed = pick(0, 3) == 0;
    std::ostringstream o;
    o << "int main() {\n";
    for (const auto &v : vars_) {
      o << "  " << (is_signed ? "int " : "unsigned int ") << v << " = ";
      if (pick(0, 2) == 0)
        o << "nondet();\n";
      else
        o << pick(0, 5) << ";\n";
    }
    bool havoc_loop = pick(0, 2) == 0;
    if (havoc_loop)
      o << "  " << (is_signed ? "int" : "unsigned int") << " c = nondet();\n";
    o << "  while (" << (havoc_loop ? "c != 0" : guard()) << ") {\n";
    int body = pick(1, 3);
    for (int i = 0; i < body; ++i) {
      if (pick(0, 4) == 0) {
        o << "    if (" << guard() << ") {\n      " << assign() << "\n    } else {\n      "
          << assign() << "\n    }\n";
      } else {
        o << "    " << assign() << "\n";
      }
    }
    if (havoc_loop)
      o << "    c = nondet();\n";
    o << "  }\n";
    o << "  if (!(" << property() << ")) { Error: return 1; }\n";
    o << "  return 0;\n}\n";
    return o.str();
  }

private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  const std::string &var() { return vars_[pick(0, static_cast<int>(vars_.size()) - 1)]; }

  std::string atom() {
    if (pick(0, 2) == 0)
      return std::to_string(pick(0, 7));
    return var();
  }

  std::string cmp() {
    static const char *ops[] = {"<", "<=", "==", "!=", ">", ">="};
    return ops[pick(0, 5)];
  }

  std::string guard() { return var() + " " + cmp() + " " + atom(); }

  std::string assign() {
    const std::string &v = var();
    switch (pick(0, 5)) {
    case 0:
      return v + "++;";
    case 1:
      return v + "--;";
    case 2:
      return v + " = " + v + " + " + std::to_string(pick(1, 3)) + ";";
    case 3:
      return v + " = " + var() + " + " + atom() + ";";
    case 4:
      return v + " = " + var() + " - " + atom() + ";";
    default:
      return v + " = " + std::to_string(pick(0, 7)) + ";";
    }
  }

  std::string property() {
    switch (pick(0, 3)) {
    case 0:
      return var() + " + " + var() + " " + cmp() + " " + atom();
    case 1:
      return var() + " - " + var() + " " + cmp() + " " + atom();
    default:
      return guard();
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
  const char *const names_[3] = {"x", "y", "z"};
};

} // namespace coopver::test
