#include "erglab/caps.hpp"

#include "erglab/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

namespace erglab {

void Caps::apply_overrides(std::string_view spec) {
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("cap override '" + std::string(item) + "' lacks '='");
    std::string_view name = item.substr(0, eq), value = item.substr(eq + 1);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || v == 0)
      throw ValidationError("cap override '" + std::string(item) + "' needs a positive integer");
    if (name == "full_group") full_group = v;
    else if (name == "closure") closure = v;
    else if (name == "product") product = v;
    else if (name == "ball") ball = v;
    else if (name == "word_length") word_length = v;
    else throw ValidationError("unknown cap '" + std::string(name) + "'");
  }
}

Caps Caps::from_environment() {
  Caps caps;
  if (const char* env = std::getenv("ERGLAB_CAPS")) caps.apply_overrides(env);
  return caps;
}

}  // namespace erglab
