#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace vecmtk {

// A calendar quarter. Ordering is chronological.
struct Quarter {
  int year = 0;
  int quarter = 1;  // 1..4

  Quarter() = default;
  Quarter(int y, int q);

  Quarter next() const;
  Quarter prev() const;
  // Signed number of quarters from `this` to `other`.
  int distance_to(const Quarter& other) const;
  // First calendar month of the quarter: 1, 4, 7 or 10.
  int first_month() const { return 3 * quarter - 2; }

  std::string str() const;       // "1950Q1"
  std::string iso_date() const;  // "1950-01-01"

  friend auto operator<=>(const Quarter&, const Quarter&) = default;
};

// Accepts "YYYY-MM-DD" (month picks the quarter) or "YYYYQn".
// Throws DataError naming the offending token.
Quarter parse_quarter(std::string_view text);

}  // namespace vecmtk
