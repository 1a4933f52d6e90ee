#include "zx/data.hpp"

#include <stdexcept>

namespace zx::data {

const std::string& file(const std::string& name) {
    const auto& t = detail::table();
    auto it = t.find(name);
    if (it == t.end()) throw std::out_of_range("no bundled data file named '" + name + "'");
    return it->second;
}

bool has_file(const std::string& name) { return detail::table().count(name) != 0; }

std::vector<std::string> list(const std::string& prefix) {
    std::vector<std::string> out;
    for (const auto& [name, content] : detail::table())
        if (name.rfind(prefix, 0) == 0) out.push_back(name);
    return out;
}

}  // namespace zx::data
