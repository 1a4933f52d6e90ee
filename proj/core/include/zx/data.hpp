#pragma once

#include <map>
#include <string>
#include <vector>

namespace zx::data {

/// Content of a bundled data file, addressed relative to the data root
/// (e.g. "rules/s.json"). Throws std::out_of_range for unknown names.
const std::string& file(const std::string& name);

/// True iff a bundled file with this name exists.
bool has_file(const std::string& name);

/// Sorted names of all bundled files starting with `prefix`.
std::vector<std::string> list(const std::string& prefix = "");

namespace detail {
const std::map<std::string, std::string>& table();
}

}  // namespace zx::data
