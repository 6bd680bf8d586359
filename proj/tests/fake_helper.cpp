// Scripted helper for subprocess tests. Behaviour is chosen by --mode:
//   sleep      sleeps far past any timeout (also forks a sleeping child)
//   trivial    writes a witness whose only invariant is true
//   fail       exits with status 3
//   garbage    writes a malformed witness
//   raw:<e>    writes raw output with invariant <e> over the v1..vn namespace

#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <unistd.h>

#include "coopver/exchange.hpp"

using namespace coopver;

int main(int argc, char **argv) {
  std::string task, output, mode = "trivial";
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string k = argv[i];
    if (k == "--task") task = argv[i + 1];
    else if (k == "--output") output = argv[i + 1];
    else if (k == "--mode") mode = argv[i + 1];
  }
  std::cout << "fake helper mode=" << mode << "\n";
  if (mode == "sleep") {
    pid_t child = ::fork();
    if (child == 0)
      ::execl("/bin/sleep", "sleep", "300", static_cast<char *>(nullptr));
    std::cout << "child " << child << std::endl;
    std::this_thread::sleep_for(std::chrono::seconds(300));
    return 0;
  }
  if (mode == "fail") {
    std::cerr << "fake failure\n";
    return 3;
  }
  std::ofstream out(output);
  if (mode == "garbage") {
    out << "<graphml><graph><node id=";
    return 0;
  }
  Cfa cfa = parse_file(task);
  if (mode == "trivial") {
    std::map<int, ExprPtr> inv;
    for (int h : cfa.loop_heads)
      inv[h] = Expr::bool_lit(true);
    out << write_graphml(skeleton_witness(cfa, inv, "fake"));
    return 0;
  }
  if (mode.rfind("raw:", 0) == 0) {
    RawOutput raw;
    const auto &vars = cfa.symbols.vars();
    for (size_t i = 0; i < vars.size(); ++i)
      raw.nsmap.vars["v" + std::to_string(i + 1)] = Expr::var(vars[i].name);
    for (const auto &l : cfa.loops) {
      std::string key = "_bb" + std::to_string(l.head);
      raw.nsmap.locations[key] = l.first_line;
      raw.invariants.push_back({key, mode.substr(4)});
    }
    out << write_raw_output(raw);
    return 0;
  }
  std::cerr << "unknown mode\n";
  return 4;
}
