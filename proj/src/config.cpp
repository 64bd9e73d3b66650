#include "qeq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qeq/errors.hpp"

namespace qeq {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "alpha", "beta",  "theta", "eta",  "x",       "y",    "delta",   "bins",
      "power", "M",     "J",     "mu",   "zeta",    "qmax", "q-index", "a",
      "b",     "c",     "pcut",  "seed", "threads", "precision", "sieve-cache",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpecError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidSpecError("config: parse error at line " + std::to_string(lineno) +
                             ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InvalidSpecError("config: parse error at line " + std::to_string(lineno) +
                             ": empty key or value");
    if (!known_keys().count(key))
      throw InvalidSpecError("config: unknown key '" + key + "' at line " +
                             std::to_string(lineno));
    if (out.count(key))
      throw InvalidSpecError("config: duplicate key '" + key + "' at line " +
                             std::to_string(lineno));
    out[key] = value;
  }
  return out;
}

}  // namespace qeq
