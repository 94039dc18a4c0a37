#pragma once

// Field escaping shared by the TSV bundle and query scripts. Tab, newline,
// carriage return, backslash and '=' are written as \t \n \r \\ \=.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attk2::text {

std::string escape(std::string_view raw);
/// Throws InputError on a dangling or unknown escape.
std::string unescape(std::string_view field);

/// Splits on raw tabs without unescaping.
std::vector<std::string_view> split_tabs(std::string_view line);

/// Splits "name=value" at the first unescaped '=' and unescapes both halves;
/// nullopt when there is none.
std::optional<std::pair<std::string, std::string>> split_assignment(std::string_view field);

std::string join_tabs(const std::vector<std::string>& fields);

}  // namespace attk2::text
