#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Grid syntax shared by the CLI flags: comma lists ("2,4,8") and ranges
// ("start:end:step", step optional for integers). Range points are generated
// index-based (start + i*step) so step accumulation cannot drift, endpoints
// inclusive within half a step.

namespace contention::grid {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& text);
std::vector<int> parse_ints(const std::string& text);

}  // namespace contention::grid
