#include "vecmtk/quarter.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

[[noreturn]] void bad_token(std::string_view text, std::string_view why) {
  throw DataError("cannot parse quarter from '" + std::string(text) + "': " +
                  std::string(why));
}

}  // namespace

Quarter::Quarter(int y, int q) : year(y), quarter(q) {
  if (q < 1 || q > 4) {
    throw DataError("quarter out of range: " + std::to_string(q));
  }
}

Quarter Quarter::next() const {
  return quarter == 4 ? Quarter(year + 1, 1) : Quarter(year, quarter + 1);
}

Quarter Quarter::prev() const {
  return quarter == 1 ? Quarter(year - 1, 4) : Quarter(year, quarter - 1);
}

int Quarter::distance_to(const Quarter& other) const {
  return (other.year - year) * 4 + (other.quarter - quarter);
}

std::string Quarter::str() const {
  return std::to_string(year) + "Q" + std::to_string(quarter);
}

std::string Quarter::iso_date() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-01", year, first_month());
  return buf;
}

Quarter parse_quarter(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  if (s.size() == 6 && (s[4] == 'Q' || s[4] == 'q')) {
    if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 1))) {
      bad_token(text, "expected YYYYQn");
    }
    int q = to_int(s.substr(5, 1));
    if (q < 1 || q > 4) bad_token(text, "quarter must be 1-4");
    return Quarter(to_int(s.substr(0, 4)), q);
  }
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) {
      bad_token(text, "expected YYYY-MM-DD");
    }
    int month = to_int(m), day = to_int(d);
    if (month < 1 || month > 12) bad_token(text, "month must be 01-12");
    if (day < 1 || day > 31) bad_token(text, "day must be 01-31");
    return Quarter(to_int(y), (month - 1) / 3 + 1);
  }
  bad_token(text, "expected YYYY-MM-DD or YYYYQn");
}

}  // namespace vecmtk
