#include "gangnet/domain.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gangnet/error.hpp"

namespace gangnet {

namespace {

constexpr std::array<std::string_view, 5> kViolentCategories = {
    "homicide", "criminal_sexual_assault", "robbery", "aggravated_assault", "aggravated_battery"};

constexpr std::size_t kColumns = 9;

// RFC 4180 field splitting.
bool split_csv_line(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return !quoted;
}

void write_field(std::ostream& out, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

bool parse_flag(std::string_view s, bool& out) {
  if (s == "0") {
    out = false;
    return true;
  }
  if (s == "1") {
    out = true;
    return true;
  }
  return false;
}

}  // namespace

CrimeTable::CrimeTable() = default;

void CrimeTable::set(std::string code, bool violent) { overrides_[std::move(code)] = violent; }

bool CrimeTable::is_violent(std::string_view code) const {
  if (auto it = overrides_.find(code); it != overrides_.end()) return it->second;
  return std::find(kViolentCategories.begin(), kViolentCategories.end(), code) != kViolentCategories.end();
}

std::vector<std::string> CrimeTable::violent_codes() const {
  std::set<std::string> codes(kViolentCategories.begin(), kViolentCategories.end());
  for (const auto& [code, violent] : overrides_) {
    if (violent)
      codes.insert(code);
    else
      codes.erase(code);
  }
  return {codes.begin(), codes.end()};
}

std::vector<ArrestRecord> parse_records(std::istream& in, const ParseOptions& options) {
  std::vector<ArrestRecord> records;
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> f;

  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++row;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kArrestsHeader) {
    split_csv_line(line, f);
    static const std::array<std::string_view, kColumns> expected = {
        "arrest_id", "offender_id", "date", "crime", "violent", "district", "beat", "gang", "homicide_victim"};
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::find(expected.begin(), expected.end(), f[i]) == expected.end())
        throw ParseError(row, "unknown column '" + f[i] + "'");
    }
    throw ParseError(row, "header must be exactly '" + std::string(kArrestsHeader) + "'");
  }

  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!split_csv_line(line, f)) throw ParseError(row, "unterminated quoted field");
    if (f.size() != kColumns)
      throw ParseError(row, "expected " + std::to_string(kColumns) + " fields, found " + std::to_string(f.size()));

    ArrestRecord r;
    if (f[0].empty()) throw ParseError(row, "missing required field 'arrest_id'");
    if (f[1].empty()) throw ParseError(row, "missing required field 'offender_id'");
    if (f[2].empty()) throw ParseError(row, "missing required field 'date'");
    r.arrest_id = std::move(f[0]);
    r.offender_id = std::move(f[1]);
    const auto date = Date::parse(f[2]);
    if (!date) throw ParseError(row, "malformed date '" + f[2] + "'");
    r.date = *date;
    if (options.range && !options.range->contains(r.date))
      throw ParseError(row, "date " + f[2] + " outside declared range " + options.range->to_string());

    if (!parse_flag(f[8], r.homicide_victim)) throw ParseError(row, "homicide_victim must be 0 or 1");

    if (f[3].empty()) {
      if (!r.homicide_victim) throw ParseError(row, "missing required field 'crime'");
      if (!f[4].empty() && f[4] != "0") throw ParseError(row, "violent flag set on a row without a crime");
    } else {
      bool violent = false;
      if (!parse_flag(f[4], violent)) throw ParseError(row, "violent must be 0 or 1");
      if (violent != options.crimes.is_violent(f[3]))
        throw ParseError(row, "violent flag " + f[4] + " disagrees with the classification of '" + f[3] + "'");
      if (f[5].empty()) throw ParseError(row, "missing required field 'district'");
      if (f[6].empty()) throw ParseError(row, "missing required field 'beat'");
      r.crime = CrimeCode{std::move(f[3]), violent};
    }
    r.district = std::move(f[5]);
    r.beat = std::move(f[6]);
    r.gang = std::move(f[7]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ArrestRecord> parse_records(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_records(in, options);
}

void write_records(std::ostream& out, std::span<const ArrestRecord> records) {
  out << kArrestsHeader << '\n';
  for (const auto& r : records) {
    write_field(out, r.arrest_id);
    out << ',';
    write_field(out, r.offender_id);
    out << ',' << r.date.to_string() << ',';
    if (r.crime) {
      write_field(out, r.crime->code);
      out << ',' << (r.crime->violent ? '1' : '0');
    } else {
      out << ",0";
    }
    out << ',';
    write_field(out, r.district);
    out << ',';
    write_field(out, r.beat);
    out << ',';
    write_field(out, r.gang);
    out << ',' << (r.homicide_victim ? '1' : '0') << '\n';
  }
}

std::string write_records(std::span<const ArrestRecord> records) {
  std::ostringstream out;
  write_records(out, records);
  return out.str();
}

bool OffenderHistory::committed(std::string_view code) const {
  return std::any_of(events_.begin(), events_.end(),
                     [&](const HistoryEntry& e) { return e.crime && e.crime->code == code; });
}

std::optional<Date> OffenderHistory::last_violent_on_or_before(Date d) const {
  std::optional<Date> best;
  for (const auto& e : events_) {
    if (e.date > d) break;
    if (e.violent()) best = e.date;
  }
  return best;
}

class HistoryBuilder {
 public:
  static void add(OffenderHistory& h, const ArrestRecord& r, std::uint32_t row) {
    h.events_.push_back(HistoryEntry{r.date, r.crime, r.district, r.beat, r.gang, r.arrest_id, row});
    if (r.homicide_victim) h.homicide_victim_ = true;
  }

  static void finish(OffenderHistory& h) {
    std::stable_sort(h.events_.begin(), h.events_.end(),
                     [](const HistoryEntry& a, const HistoryEntry& b) { return a.date < b.date; });
    for (std::size_t i = 0; i < h.events_.size(); ++i) {
      const auto& e = h.events_[i];
      if (i > 0 && h.events_[i - 1].date == e.date)
        throw ValidationError("offender " + h.offender_id_ + " arrested more than once on " + e.date.to_string() +
                              " (events " + h.events_[i - 1].arrest_id + ", " + e.arrest_id + ")");
      if (e.crime) {
        if (e.crime->violent)
          ++h.violent_;
        else
          ++h.nonviolent_;
      }
      if (!e.district.empty()) h.latest_district_ = e.district;
      if (!e.beat.empty()) h.latest_beat_ = e.beat;
      if (!e.gang.empty()) h.latest_gang_ = e.gang;
    }
  }
};

std::map<std::string, OffenderHistory, std::less<>> build_histories(std::span<const ArrestRecord> records) {
  std::map<std::string, OffenderHistory, std::less<>> out;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!seen.emplace(r.offender_id, r.arrest_id).second)
      throw ValidationError("duplicate (offender_id, arrest_id) pair (" + r.offender_id + ", " + r.arrest_id + ")");
    auto it = out.find(r.offender_id);
    if (it == out.end()) it = out.emplace(r.offender_id, OffenderHistory(r.offender_id)).first;
    HistoryBuilder::add(it->second, r, static_cast<std::uint32_t>(i));
  }
  for (auto& [id, h] : out) HistoryBuilder::finish(h);
  return out;
}

void AccessAudit::note(Date d) {
  reads_.fetch_add(1, std::memory_order_relaxed);
  std::int32_t cur = latest_.load(std::memory_order_relaxed);
  while (d.days() > cur && !latest_.compare_exchange_weak(cur, d.days(), std::memory_order_relaxed)) {
  }
}

std::optional<Date> AccessAudit::latest() const {
  const auto v = latest_.load();
  if (v == INT32_MIN) return std::nullopt;
  return Date(v);
}

Dataset::Dataset(std::vector<ArrestRecord> records) : records_(std::move(records)) {
  auto histories = build_histories(records_);
  offender_ids_.reserve(histories.size());
  histories_.reserve(histories.size());
  std::unordered_map<std::string_view, std::uint32_t> offender_index;
  for (auto& [id, h] : histories) {
    offender_ids_.push_back(id);
    histories_.push_back(std::move(h));
  }
  for (std::uint32_t i = 0; i < offender_ids_.size(); ++i) offender_index.emplace(offender_ids_[i], i);

  row_offender_.resize(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) row_offender_[i] = offender_index.at(records_[i].offender_id);

  std::map<std::string_view, std::vector<std::uint32_t>> by_event;
  for (std::uint32_t i = 0; i < records_.size(); ++i) by_event[records_[i].arrest_id].push_back(i);
  events_.reserve(by_event.size());
  for (auto& [id, rows] : by_event) {
    const Date d = records_[rows.front()].date;
    for (auto row : rows) {
      if (records_[row].date != d)
        throw ValidationError("arrest event " + std::string(id) + " has rows on different dates (" +
                              d.to_string() + ", " + records_[row].date.to_string() + ")");
    }
    std::sort(rows.begin(), rows.end(),
              [&](std::uint32_t a, std::uint32_t b) { return row_offender_[a] < row_offender_[b]; });
    ArrestEvent ev{std::string(id), d, std::move(rows), {}};
    ev.offenders.reserve(ev.rows.size());
    for (auto row : ev.rows) ev.offenders.push_back(row_offender_[row]);
    events_.push_back(std::move(ev));
  }
  std::stable_sort(events_.begin(), events_.end(), [](const ArrestEvent& a, const ArrestEvent& b) {
    return a.date != b.date ? a.date < b.date : a.arrest_id < b.arrest_id;
  });
  row_event_.resize(records_.size());
  for (std::uint32_t e = 0; e < events_.size(); ++e)
    for (auto row : events_[e].rows) row_event_[row] = e;

  if (!records_.empty()) {
    auto [lo, hi] = std::minmax_element(records_.begin(), records_.end(),
                                        [](const ArrestRecord& a, const ArrestRecord& b) { return a.date < b.date; });
    first_ = lo->date;
    last_ = hi->date;
  }
}

std::span<const ArrestRecord> Dataset::records() const {
  if (!records_.empty()) note(last_);
  return records_;
}

const ArrestRecord& Dataset::record(std::size_t row) const {
  const auto& r = records_.at(row);
  note(r.date);
  return r;
}

const OffenderHistory& Dataset::history(std::uint32_t offender) const {
  const auto& h = histories_.at(offender);
  if (!h.events().empty()) note(h.events().back().date);
  return h;
}

const ArrestEvent& Dataset::event(std::uint32_t index) const {
  const auto& e = events_.at(index);
  note(e.date);
  return e;
}

std::span<const ArrestEvent> Dataset::events() const {
  if (!events_.empty()) note(last_);
  return events_;
}

std::optional<std::uint32_t> Dataset::find_offender(std::string_view id) const {
  auto it = std::lower_bound(offender_ids_.begin(), offender_ids_.end(), id);
  if (it == offender_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - offender_ids_.begin());
}

std::optional<Date> Dataset::first_date() const {
  if (records_.empty()) return std::nullopt;
  return first_;
}

std::optional<Date> Dataset::last_date() const {
  if (records_.empty()) return std::nullopt;
  return last_;
}

bool Dataset::any_homicide_victim() const {
  return std::any_of(histories_.begin(), histories_.end(),
                     [](const OffenderHistory& h) { return h.is_homicide_victim(); });
}

Dataset Dataset::before(Date cutoff) const {
  std::vector<ArrestRecord> kept;
  for (const auto& r : records_)
    if (r.date < cutoff) kept.push_back(r);
  return Dataset(std::move(kept));
}

}  // namespace gangnet
