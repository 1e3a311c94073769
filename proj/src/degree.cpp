#include "chainlie/degree.hpp"

#include <algorithm>
#include <numeric>

#include "chainlie/errors.hpp"

namespace chainlie {

namespace {

template <typename Op>
Degree zip(const Degree& a, const Degree& b, Op op) {
  if (a.size() != b.size()) {
    throw DegreeMismatch("degree length mismatch: " + a.to_string() + " vs " + b.to_string());
  }
  Degree out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

int Degree::total() const { return std::accumulate(components.begin(), components.end(), 0); }

bool Degree::non_negative() const {
  return std::all_of(components.begin(), components.end(), [](int c) { return c >= 0; });
}

bool Degree::all_le(const Degree& other) const {
  if (size() != other.size()) throw DegreeMismatch("degree length mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (components[i] > other[i]) return false;
  }
  return true;
}

std::string Degree::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(components[i]);
  }
  return s + ")";
}

Degree operator+(const Degree& a, const Degree& b) { return zip(a, b, std::plus<>{}); }
Degree operator-(const Degree& a, const Degree& b) { return zip(a, b, std::minus<>{}); }
Degree componentwise_min(const Degree& a, const Degree& b) {
  return zip(a, b, [](int x, int y) { return std::min(x, y); });
}
Degree componentwise_max(const Degree& a, const Degree& b) {
  return zip(a, b, [](int x, int y) { return std::max(x, y); });
}

}  // namespace chainlie
