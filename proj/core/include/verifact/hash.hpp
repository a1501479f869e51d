#pragma once

#include <string>
#include <string_view>

namespace verifact {

/// Lower-case hex SHA-256 of the exact bytes of `content`.
std::string sha256_hex(std::string_view content);

}  // namespace verifact
