#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace chainlie {

/// Chain degree (one component) or bidegree (p, q).
struct Degree {
  std::vector<int> components;

  Degree() = default;
  Degree(std::initializer_list<int> c) : components(c) {}
  explicit Degree(std::vector<int> c) : components(std::move(c)) {}

  static Degree zeros(std::size_t n) { return Degree(std::vector<int>(n, 0)); }

  std::size_t size() const { return components.size(); }
  int operator[](std::size_t i) const { return components[i]; }
  int& operator[](std::size_t i) { return components[i]; }

  int total() const;
  bool non_negative() const;
  /// Componentwise a <= b.
  bool all_le(const Degree& other) const;

  std::string to_string() const;

  friend auto operator<=>(const Degree&, const Degree&) = default;
  friend bool operator==(const Degree&, const Degree&) = default;
};

/// Componentwise arithmetic; throws DegreeMismatch on differing lengths.
Degree operator+(const Degree& a, const Degree& b);
Degree operator-(const Degree& a, const Degree& b);
Degree componentwise_min(const Degree& a, const Degree& b);
Degree componentwise_max(const Degree& a, const Degree& b);

}  // namespace chainlie
