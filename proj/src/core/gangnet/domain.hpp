#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gangnet/date.hpp"

namespace gangnet {

struct CrimeCode {
  std::string code;
  bool violent = false;

  friend bool operator==(const CrimeCode&, const CrimeCode&) = default;
};

// Offense classification. The five violent categories are preloaded; any
// other code is non-violent unless reclassified with set().
class CrimeTable {
 public:
  CrimeTable();

  void set(std::string code, bool violent);
  bool is_violent(std::string_view code) const;
  // Codes currently classified violent, ascending.
  std::vector<std::string> violent_codes() const;

  static constexpr std::string_view kHomicide = "homicide";

 private:
  std::map<std::string, bool, std::less<>> overrides_;
};

struct ArrestRecord {
  std::string arrest_id;
  std::string offender_id;
  Date date;
  // Absent for victim-only rows (homicide_victim set, no offense).
  std::optional<CrimeCode> crime;
  std::string district;
  std::string beat;
  std::string gang;  // empty when unaffiliated
  bool homicide_victim = false;

  bool violent() const { return crime && crime->violent; }
  friend bool operator==(const ArrestRecord&, const ArrestRecord&) = default;
};

inline constexpr std::string_view kArrestsHeader =
    "arrest_id,offender_id,date,crime,violent,district,beat,gang,homicide_victim";

struct ParseOptions {
  CrimeTable crimes;
  std::optional<DateRange> range;
};

std::vector<ArrestRecord> parse_records(std::istream& in, const ParseOptions& options = {});
std::vector<ArrestRecord> parse_records(std::string_view text, const ParseOptions& options = {});
void write_records(std::ostream& out, std::span<const ArrestRecord> records);
std::string write_records(std::span<const ArrestRecord> records);

struct HistoryEntry {
  Date date;
  std::optional<CrimeCode> crime;
  std::string district;
  std::string beat;
  std::string gang;
  std::string arrest_id;
  std::uint32_t row = 0;  // index into the record sequence

  bool violent() const { return crime && crime->violent; }
};

class OffenderHistory {
 public:
  OffenderHistory() = default;
  explicit OffenderHistory(std::string offender_id) : offender_id_(std::move(offender_id)) {}

  const std::string& offender_id() const { return offender_id_; }
  // Ascending by date.
  std::span<const HistoryEntry> events() const { return events_; }
  bool is_homicide_victim() const { return homicide_victim_; }

  // Most recent non-empty value; empty string when never recorded.
  const std::string& district() const { return latest_district_; }
  const std::string& beat() const { return latest_beat_; }
  const std::string& gang() const { return latest_gang_; }

  std::size_t violent_count() const { return violent_; }
  std::size_t nonviolent_count() const { return nonviolent_; }
  std::size_t offense_count() const { return violent_ + nonviolent_; }
  bool has_violent() const { return violent_ > 0; }
  bool committed(std::string_view code) const;
  std::optional<Date> last_violent_on_or_before(Date d) const;

 private:
  friend class HistoryBuilder;
  std::string offender_id_;
  std::vector<HistoryEntry> events_;
  bool homicide_victim_ = false;
  std::string latest_district_, latest_beat_, latest_gang_;
  std::size_t violent_ = 0, nonviolent_ = 0;
};

// Rejects duplicate (offender_id, arrest_id) and (offender_id, date) pairs.
std::map<std::string, OffenderHistory, std::less<>> build_histories(std::span<const ArrestRecord> records);

// Records every date read through a Dataset's accessors. Used to prove that
// an evaluation never touched data at or after a cutoff.
class AccessAudit {
 public:
  void note(Date d);
  std::size_t reads() const { return reads_.load(); }
  std::optional<Date> latest() const;

 private:
  std::atomic<std::int32_t> latest_{INT32_MIN};
  std::atomic<std::size_t> reads_{0};
};

struct ArrestEvent {
  std::string arrest_id;
  Date date;
  std::vector<std::uint32_t> rows;       // ascending offender order
  std::vector<std::uint32_t> offenders;  // parallel to rows
};

// Validated, indexed record collection. Offenders are numbered in ascending
// id order; events in ascending (date, arrest_id) order.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<ArrestRecord> records);

  std::size_t record_count() const { return records_.size(); }
  std::size_t offender_count() const { return offender_ids_.size(); }
  std::size_t event_count() const { return events_.size(); }

  std::span<const ArrestRecord> records() const;
  const ArrestRecord& record(std::size_t row) const;
  const OffenderHistory& history(std::uint32_t offender) const;
  const ArrestEvent& event(std::uint32_t index) const;
  std::span<const ArrestEvent> events() const;

  const std::string& offender_id(std::uint32_t offender) const { return offender_ids_[offender]; }
  std::optional<std::uint32_t> find_offender(std::string_view id) const;
  std::uint32_t record_offender(std::size_t row) const { return row_offender_[row]; }
  std::uint32_t record_event(std::size_t row) const { return row_event_[row]; }

  std::optional<Date> first_date() const;
  std::optional<Date> last_date() const;
  bool any_homicide_victim() const;

  // Records dated strictly before `cutoff`, re-indexed.
  Dataset before(Date cutoff) const;

  void attach_audit(AccessAudit* audit) const { audit_ = audit; }

 private:
  void note(Date d) const {
    if (audit_) audit_->note(d);
  }

  std::vector<ArrestRecord> records_;
  std::vector<std::string> offender_ids_;
  std::vector<OffenderHistory> histories_;
  std::vector<std::uint32_t> row_offender_, row_event_;
  std::vector<ArrestEvent> events_;
  Date first_, last_;
  mutable AccessAudit* audit_ = nullptr;
};

}  // namespace gangnet
