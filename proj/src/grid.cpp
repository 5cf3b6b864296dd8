#include "contention/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace contention::grid {

namespace {

double parse_number(const std::string& token) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw GridError("not a number: '" + token + "'");
  }
  if (pos != token.size()) throw GridError("not a number: '" + token + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::istringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

std::vector<double> expand_range(double start, double end, double step) {
  if (step <= 0.0) throw GridError("range step must be positive");
  if (end < start) throw GridError("range end precedes start");
  std::vector<double> values;
  for (long i = 0;; ++i) {
    const double value = start + static_cast<double>(i) * step;
    if (value > end + step / 2) break;
    values.push_back(value);
    if (values.size() > 10'000'000) throw GridError("range too large");
  }
  return values;
}

}  // namespace

std::vector<double> parse_doubles(const std::string& text) {
  if (text.empty()) throw GridError("empty grid");
  std::vector<double> values;
  for (const std::string& token : split(text, ',')) {
    const std::vector<std::string> parts = split(token, ':');
    if (parts.size() == 1) {
      values.push_back(parse_number(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const double start = parse_number(parts[0]);
      const double end = parse_number(parts[1]);
      const double step = parts.size() == 3 ? parse_number(parts[2]) : 1.0;
      for (double v : expand_range(start, end, step)) values.push_back(v);
    } else {
      throw GridError("bad range: '" + token + "'");
    }
  }
  return values;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_doubles(text)) {
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-9) throw GridError("expected an integer grid");
    values.push_back(i);
  }
  return values;
}

}  // namespace contention::grid
