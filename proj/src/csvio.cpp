#include "gpsm/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gpsm/errors.hpp"

namespace gpsm {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw numeric_error("failed to format double");
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, const std::string& file, std::size_t line) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double out = 0.0;
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end)
    throw invalid_input_error(file + ":" + std::to_string(line) + ": not a number: '" + field + "'");
  return out;
}

bool split_two(const std::string& line, std::string& a, std::string& b) {
  auto comma = line.find(',');
  if (comma == std::string::npos) return false;
  a = line.substr(0, comma);
  b = line.substr(comma + 1);
  return b.find(',') == std::string::npos;
}

bool looks_numeric(const std::string& field) {
  for (char c : field) {
    if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E' ||
        c == ' ' || c == '\t' || c == '\r')
      continue;
    return false;
  }
  return !field.empty();
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open " + file);
  std::vector<double> xs, ys;
  std::string line, a, b;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    if (!split_two(line, a, b))
      throw invalid_input_error(file + ":" + std::to_string(lineno) + ": expected two columns");
    if (lineno == 1 && !(looks_numeric(a) && looks_numeric(b))) continue;  // header row
    xs.push_back(parse_double(a, file, lineno));
    ys.push_back(parse_double(b, file, lineno));
  }
  if (xs.empty()) throw invalid_input_error(file + ": no data rows");
  return {std::move(xs), std::move(ys)};
}

void write_path_csv(const std::string& file, const Path& path) {
  std::ostringstream out;
  out << "t,value\n";
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out << format_double(path.grid.time(i)) << ',' << format_double(path.values[i]) << '\n';
  write_text_file(file, out.str());
}

Path read_path_csv(const std::string& file) {
  auto [times, values] = read_two_column_csv(file);
  if (times.size() < 2) throw invalid_input_error(file + ": a path needs at least two points");
  return Path{GridSpec::at_times(std::move(times)), std::move(values), PathKind::stationary,
              SeedSpec{}};
}

void write_text_file(const std::string& file, const std::string& contents) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw io_error("short write to " + file);
}

std::string read_text_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw io_error("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gpsm
