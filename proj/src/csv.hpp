#pragma once

// Minimal comma-separated parsing shared by the manifest and time-series
// readers. No quoting support; none of the formats need it.

#include <string>
#include <string_view>
#include <vector>

namespace brainaug::csv {

std::vector<std::string> split_line(std::string_view line);
std::vector<std::string> read_lines(std::string_view text);
std::string trim(std::string_view s);
// Whole-cell decimal parse. Returns false on junk, empty or trailing text.
bool parse_double(std::string_view cell, double& out);

}  // namespace brainaug::csv
