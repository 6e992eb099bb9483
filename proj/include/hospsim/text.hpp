#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hospsim {

/// Shortest round-trip decimal representation of a double.
/// Used for every number written to an output file so that reruns with the
/// same seed produce byte-identical artifacts.
std::string format_double(double value);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);

} // namespace hospsim
