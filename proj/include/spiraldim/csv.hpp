#pragma once

#include <string>
#include <vector>

namespace spiraldim {

/// printf("%.17g"): round-trip exact for binary64.
std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& text);

/// Reads a numeric CSV whose first line must equal the given header columns.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::vector<std::string>& header);

} // namespace spiraldim
