#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ssu::csv {

/// Splits comma-separated text into rows of trimmed fields. Blank lines
/// are skipped. Quoting is not supported; none of the inputs need it.
std::vector<std::vector<std::string>> parse(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string num(double v);

/// Fixed decimals, for columns read by people.
std::string fixed(double v, int decimals);

}  // namespace ssu::csv
