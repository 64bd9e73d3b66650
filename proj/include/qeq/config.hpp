#pragma once

#include <map>
#include <string>

namespace qeq {

// Line-oriented `key = value` file; keys mirror the long CLI flag names.
// Unknown and duplicate keys are errors; command-line flags take precedence
// over file values.
std::map<std::string, std::string> load_config(const std::string& path);

}  // namespace qeq
