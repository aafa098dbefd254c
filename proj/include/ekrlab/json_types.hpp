#pragma once

#include "json.hpp"

namespace ekrlab {

// Insertion-ordered so serialized reports are stable and readable.
using Json = nlohmann::ordered_json;

}  // namespace ekrlab
