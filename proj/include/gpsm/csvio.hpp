#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gpsm/path.hpp"

namespace gpsm {

/// Shortest decimal form that round-trips a double (17 significant digits),
/// '.' as the decimal separator regardless of locale.
std::string format_double(double x);

void write_path_csv(const std::string& file, const Path& path);

/// Reads a two-column numeric CSV (optional one-line header), first column
/// strictly increasing from 0.
Path read_path_csv(const std::string& file);

/// Generic two-column loader used for tabulated kernels.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& file);

void write_text_file(const std::string& file, const std::string& contents);
std::string read_text_file(const std::string& file);

}  // namespace gpsm
