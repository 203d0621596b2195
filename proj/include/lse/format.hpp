// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace lse {

/// Shortest decimal text that parses back to exactly `v` ("inf", "-inf",
/// "nan" for non-finite values).
std::string format_double(double v);

/// Parses a full decimal double; IoError naming `what` on malformed text.
double parse_double(std::string_view text, std::string_view what);

}  // namespace lse
