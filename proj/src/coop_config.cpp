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

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "coopver/orchestrator.hpp"

namespace coopver {

namespace pt = boost::property_tree;

namespace {

const char *const kBuiltins[] = {"interval", "affine", "template"};

bool is_builtin(const std::string &n) {
  for (const char *b : kBuiltins)
    if (n == b)
      return true;
  return false;
}

std::string secs(double s) {
  if (std::isinf(s))
    return "inf";
  std::ostringstream o;
  o << s;
  return o.str();
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  throw Error("config key '" + key + "': expected a boolean, got '" + v + "'");
}

double to_secs(const std::string &key, const std::string &v) {
  if (v == "inf")
    return kForever;
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size())
      return d;
  } catch (const std::exception &) {
  }
  throw Error("config key '" + key + "': expected seconds, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto a = cur.find_first_not_of(" \t");
    auto b = cur.find_last_not_of(" \t");
    if (a != std::string::npos)
      out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

} // namespace

void CoopConfig::check() const {
  if (!(timeout > 0))
    throw Error("timeout must be positive");
  if (timer_m < 0 || timer_m > timeout)
    throw Error("timerM must lie between 0 and the task timeout");
  if (!(timeout_h > 0))
    throw Error("timeoutH must be positive");
  if (master != "kind" && master != "predabs")
    throw Error("unknown master '" + master + "'");
  for (const auto &h : helpers) {
    if (h.external)
      h.external->check();
    else if (!is_builtin(h.name))
      throw Error("unknown helper '" + h.name + "'");
  }
}

std::string CoopConfig::run_name() const {
  std::string n = master;
  for (const auto &h : helpers)
    n += "-" + h.name;
  if (helpers.empty())
    return n;
  n += "-" + secs(timer_m);
  if (!term_after_first_inv)
    n += "-wait-" + secs(timeout_h);
  return n;
}

CoopConfig parse_coop_config(const std::string &text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw Error(std::string("config: ") + e.what());
  }
  CoopConfig c;
  std::vector<std::string> roster;
  std::map<std::string, ExternalHelperSpec> externals;
  for (const auto &[key, node] : tree) {
    if (!node.empty()) {
      if (key.rfind("helper.", 0) != 0)
        throw Error("config: unknown section [" + key + "]");
      ExternalHelperSpec s;
      s.name = key.substr(7);
      for (const auto &[k, v] : node) {
        std::string val = v.data();
        if (k == "executable") {
          s.executable = val;
        } else if (k == "encoding") {
          auto e = parse_encoding_style(val);
          if (!e)
            throw Error("config: unknown encoding '" + val + "'");
          s.encoding = *e;
        } else if (k == "output") {
          if (val == "witness")
            s.output = HelperOutputKind::WitnessDocument;
          else if (val == "raw")
            s.output = HelperOutputKind::RawInvariants;
          else
            throw Error("config: output must be witness or raw");
        } else if (k == "args") {
          s.extra_args = split_list(val, ' ');
        } else {
          throw Error("config: unknown key '" + k + "' in [" + key + "]");
        }
      }
      externals[s.name] = s;
      continue;
    }
    std::string v = node.data();
    if (key == "restartMaster")
      c.restart_master = to_bool(key, v);
    else if (key == "termAfterFirstInv")
      c.term_after_first_inv = to_bool(key, v);
    else if (key == "timerM")
      c.timer_m = to_secs(key, v);
    else if (key == "timeoutH")
      c.timeout_h = to_secs(key, v);
    else if (key == "timeout")
      c.timeout = to_secs(key, v);
    else if (key == "master")
      c.master = v;
    else if (key == "helpers")
      roster = split_list(v, ',');
    else if (key == "boundCap")
      c.bound_cap = std::stoi(v);
    else if (key == "builtinAux")
      c.builtin_aux = to_bool(key, v);
    else if (key == "validateInjections")
      c.validate_injections = to_bool(key, v);
    else
      throw Error("config: unknown key '" + key + "'");
  }
  for (const auto &n : roster) {
    HelperEntry h{n, std::nullopt};
    auto it = externals.find(n);
    if (it != externals.end())
      h.external = it->second;
    c.helpers.push_back(h);
  }
  for (auto &h : c.helpers)
    if (h.external)
      h.external->timeout = c.timeout_h;
  return c;
}

CoopConfig load_coop_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot read config '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return parse_coop_config(s.str());
}

std::string write_coop_config(const CoopConfig &c) {
  std::ostringstream o;
  o << "restartMaster = " << (c.restart_master ? "true" : "false") << "\n"
    << "termAfterFirstInv = " << (c.term_after_first_inv ? "true" : "false") << "\n"
    << "timerM = " << secs(c.timer_m) << "\n"
    << "timeoutH = " << secs(c.timeout_h) << "\n"
    << "timeout = " << secs(c.timeout) << "\n"
    << "master = " << c.master << "\n"
    << "boundCap = " << c.bound_cap << "\n"
    << "builtinAux = " << (c.builtin_aux ? "true" : "false") << "\n"
    << "validateInjections = " << (c.validate_injections ? "true" : "false") << "\n"
    << "helpers = ";
  for (size_t i = 0; i < c.helpers.size(); ++i)
    o << (i ? "," : "") << c.helpers[i].name;
  o << "\n";
  for (const auto &h : c.helpers) {
    if (!h.external)
      continue;
    const auto &s = *h.external;
    o << "\n[helper." << h.name << "]\n"
      << "executable = " << s.executable << "\n"
      << "encoding = " << to_string(s.encoding) << "\n"
      << "output = " << (s.output == HelperOutputKind::WitnessDocument ? "witness" : "raw") << "\n";
    if (!s.extra_args.empty()) {
      o << "args =";
      for (const auto &a : s.extra_args)
        o << " " << a;
      o << "\n";
    }
  }
  return o.str();
}

} // namespace coopver
