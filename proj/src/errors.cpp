#include "thrifty/errors.hpp"

namespace thrifty {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration:";
    for (const auto& s : items) out += "\n  - " + s;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : ValidationError(join(violations)), violations_(std::move(violations)) {}

}  // namespace thrifty
