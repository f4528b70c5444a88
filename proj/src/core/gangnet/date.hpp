#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gangnet {

// Calendar date at day resolution, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static std::optional<Date> from_ymd(int year, unsigned month, unsigned day);
  // Strict ISO-8601 YYYY-MM-DD; rejects impossible calendar dates.
  static std::optional<Date> parse(std::string_view text);

  constexpr std::int32_t days() const { return days_; }
  std::chrono::year_month_day ymd() const;
  std::string to_string() const;

  Date first_of_month() const;
  Date add_months(int months) const;
  constexpr Date add_days(std::int32_t n) const { return Date(days_ + n); }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

// Whole calendar months from the month containing `from` to the month containing `to`.
int months_between(Date from, Date to);
// "YYYY-MM" of the month containing d.
std::string month_label(Date d);

// Closed interval [from, to].
struct DateRange {
  Date from;
  Date to;

  bool contains(Date d) const { return from <= d && d <= to; }
  // "FROM..TO" with ISO dates; either side may be left empty for an open bound.
  static std::optional<DateRange> parse(std::string_view text);
  std::string to_string() const;
};

}  // namespace gangnet
