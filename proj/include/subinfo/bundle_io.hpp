#pragma once

// JSON form of a complete ModelBundle, used for checkpoints and the final
// result of inference. Doubles are written in shortest round-trip form, so
// reading a checkpoint back reproduces the bundle exactly.

#include <string>
#include <string_view>

#include "subinfo/core_types.hpp"

namespace subinfo::io {

std::string bundle_json(const ModelBundle& bundle);
ModelBundle parse_bundle_json(std::string_view contents, const std::string& source_name);
ModelBundle read_bundle(const std::string& path);
void write_bundle(const std::string& path, const ModelBundle& bundle);

}  // namespace subinfo::io
