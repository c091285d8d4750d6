#pragma once

#include <nlohmann/json.hpp>

namespace advclaim {

// Insertion-ordered so persisted artifacts are byte-stable.
using Json = nlohmann::ordered_json;

}  // namespace advclaim
