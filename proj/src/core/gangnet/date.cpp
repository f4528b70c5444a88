#include "gangnet/date.hpp"

#include <cstdio>
#include <limits>

namespace gangnet {

namespace {

bool parse_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<Date> Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) return std::nullopt;
  return Date(static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d))
    return std::nullopt;
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
}

std::string Date::to_string() const {
  const auto v = ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
  return buf;
}

Date Date::first_of_month() const {
  const auto v = ymd();
  return *from_ymd(static_cast<int>(v.year()), static_cast<unsigned>(v.month()), 1);
}

Date Date::add_months(int months) const {
  const auto v = ymd();
  const int total = static_cast<int>(v.year()) * 12 + static_cast<int>(static_cast<unsigned>(v.month())) - 1 + months;
  const int year = total >= 0 ? total / 12 : (total - 11) / 12;
  const unsigned month = static_cast<unsigned>(total - year * 12) + 1;
  const std::chrono::year_month_day_last last{std::chrono::year{year},
                                              std::chrono::month_day_last{std::chrono::month{month}}};
  const unsigned day = std::min(static_cast<unsigned>(v.day()), static_cast<unsigned>(last.day()));
  return *from_ymd(year, month, day);
}

int months_between(Date from, Date to) {
  const auto a = from.ymd();
  const auto b = to.ymd();
  return (static_cast<int>(b.year()) - static_cast<int>(a.year())) * 12 +
         (static_cast<int>(static_cast<unsigned>(b.month())) - static_cast<int>(static_cast<unsigned>(a.month())));
}

std::string month_label(Date d) { return d.to_string().substr(0, 7); }

std::optional<DateRange> DateRange::parse(std::string_view text) {
  const auto sep = text.find("..");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto lhs = text.substr(0, sep);
  const auto rhs = text.substr(sep + 2);
  DateRange r{Date(std::numeric_limits<std::int32_t>::min()), Date(std::numeric_limits<std::int32_t>::max())};
  if (!lhs.empty()) {
    auto d = Date::parse(lhs);
    if (!d) return std::nullopt;
    r.from = *d;
  }
  if (!rhs.empty()) {
    auto d = Date::parse(rhs);
    if (!d) return std::nullopt;
    r.to = *d;
  }
  if (r.to < r.from) return std::nullopt;
  return r;
}

std::string DateRange::to_string() const {
  std::string s;
  if (from.days() != std::numeric_limits<std::int32_t>::min()) s += from.to_string();
  s += "..";
  if (to.days() != std::numeric_limits<std::int32_t>::max()) s += to.to_string();
  return s;
}

}  // namespace gangnet
