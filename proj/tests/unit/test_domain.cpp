#include <random>
#include <sstream>

#include "doctest.h"
#include "gangnet/domain.hpp"
#include "gangnet/error.hpp"
#include "gangnet/synth.hpp"
#include "records.hpp"

using namespace gangnet;

TEST_CASE("date parsing is strict") {
  CHECK(Date::parse("2013-02-28"));
  CHECK_FALSE(Date::parse("2013-02-30"));
  CHECK_FALSE(Date::parse("2012-2-03"));
  CHECK_FALSE(Date::parse("2012-02-03x"));
  CHECK(Date::parse("2012-02-29"));
  CHECK_FALSE(Date::parse("2011-02-29"));
  const auto d = *Date::parse("2011-08-01");
  CHECK(d.to_string() == "2011-08-01");
  CHECK(d.add_months(18).to_string() == "2013-02-01");
  CHECK(months_between(d, *Date::parse("2013-02-14")) == 18);
  CHECK(month_label(*Date::parse("2013-02-14")) == "2013-02");
}

TEST_CASE("date ranges with open ends") {
  const auto r = DateRange::parse("2012-01-01..");
  REQUIRE(r);
  CHECK(r->contains(*Date::parse("2030-01-01")));
  CHECK_FALSE(r->contains(*Date::parse("2011-12-31")));
  CHECK_FALSE(DateRange::parse("2012-01-01"));
  CHECK_FALSE(DateRange::parse("2012-13-01..2013-01-01"));
}

TEST_CASE("crime table classification") {
  CrimeTable t;
  for (auto c : {"homicide", "criminal_sexual_assault", "robbery", "aggravated_assault", "aggravated_battery"})
    CHECK(t.is_violent(c));
  CHECK_FALSE(t.is_violent("narcotics"));
  t.set("arson", true);
  CHECK(t.is_violent("arson"));
  CHECK(t.violent_codes().size() == 6);
}

TEST_CASE("parse: header only and single row") {
  CHECK(parse_records(fixture::csv("")).empty());
  const auto one = parse_records(fixture::csv("A1,O1,2012-05-01,robbery,1,D01,B0101,G01,0\n"));
  REQUIRE(one.size() == 1);
  CHECK(one[0].offender_id == "O1");
  CHECK(one[0].violent());
  CHECK(one[0].gang == "G01");
}

TEST_CASE("parse errors name the row") {
  auto row_of = [](const std::string& body) -> std::size_t {
    try {
      parse_records(fixture::csv(body));
    } catch (const ParseError& e) {
      return e.row();
    }
    return 0;
  };
  CHECK(row_of("A1,O1,2012-05-01,theft,0,D01,B0101,,0\nA2,O2,2013-02-30,theft,0,D01,B0101,,0\n") == 3);
  CHECK(row_of("A1,O1,2012-05-01,robbery,0,D01,B0101,,0\n") == 2);  // flag disagrees
  CHECK(row_of("A1,,2012-05-01,theft,0,D01,B0101,,0\n") == 2);
  CHECK(row_of("A1,O1,2012-05-01,theft,0,D01,B0101,0\n") == 2);
  CHECK(row_of("A1,O1,2012-05-01,,0,D01,B0101,,0\n") == 2);  // no crime, not a victim
  CHECK_THROWS_AS(parse_records(std::string_view("arrest_id,offender,date\n")), ParseError);
}

TEST_CASE("declared range rejects outside dates") {
  ParseOptions po;
  po.range = DateRange::parse("2012-01-01..2012-12-31");
  CHECK_THROWS_AS(parse_records(fixture::csv("A1,O1,2013-01-01,theft,0,D01,B0101,,0\n"), po), ParseError);
}

TEST_CASE("histories are ordered and partitioned") {
  const auto d = fixture::dataset(
      "A2,O1,2012-01-05,theft,0,D01,B0101,G1,0\n"
      "A1,O1,2012-01-02,robbery,1,D02,B0201,,0\n"
      "A1,O2,2012-01-02,theft,0,D02,B0201,,1\n");
  const auto& h = d.history(*d.find_offender("O1"));
  REQUIRE(h.events().size() == 2);
  CHECK(h.events()[0].date.to_string() == "2012-01-02");
  CHECK(h.events()[1].date.to_string() == "2012-01-05");
  CHECK(h.violent_count() == 1);
  CHECK(h.nonviolent_count() == 1);
  CHECK(h.offense_count() == 2);
  CHECK(h.district() == "D01");
  CHECK(h.gang() == "G1");
  CHECK_FALSE(h.is_homicide_victim());
  const auto& h2 = d.history(*d.find_offender("O2"));
  CHECK(h2.is_homicide_victim());
  CHECK(h2.events()[0].arrest_id == "A1");
  CHECK(d.any_homicide_victim());
  // both co-arrestees see the shared event
  CHECK(d.event(d.record_event(0)).rows.size() == 1);
  CHECK(d.event_count() == 2);
}

TEST_CASE("latest gang ignores empty entries") {
  const auto d = fixture::dataset(
      "A1,O1,2012-01-02,theft,0,D01,B0101,G1,0\n"
      "A2,O1,2012-02-02,theft,0,D01,B0101,,0\n");
  CHECK(d.history(0).gang() == "G1");
}

TEST_CASE("duplicates are rejected") {
  CHECK_THROWS_AS(fixture::dataset("A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
                                   "A1,O1,2012-01-02,narcotics,0,D01,B0101,,0\n"),
                  ValidationError);
  CHECK_THROWS_AS(fixture::dataset("A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
                                   "A2,O1,2012-01-02,narcotics,0,D01,B0101,,0\n"),
                  ValidationError);
  CHECK_THROWS_AS(fixture::dataset("A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
                                   "A1,O2,2012-01-03,narcotics,0,D01,B0101,,0\n"),
                  ValidationError);
}

TEST_CASE("victim-only rows carry no offense") {
  const auto d = fixture::dataset("A1,O1,2012-01-02,,0,D01,B0101,,1\n");
  const auto& h = d.history(0);
  CHECK(h.offense_count() == 0);
  CHECK(h.is_homicide_victim());
  CHECK_FALSE(h.events()[0].crime);
}

TEST_CASE("round trip reproduces every field") {
  GeneratorConfig c;
  c.offenders = 300;
  c.seed = 5;
  const auto records = generate(c);
  const auto text = write_records(records);
  const auto again = parse_records(text);
  CHECK(again == records);
  CHECK(write_records(again) == text);
}

TEST_CASE("offense counts add up and no offense without an arrest row") {
  GeneratorConfig c;
  c.offenders = 400;
  c.seed = 11;
  const Dataset d(generate(c));
  std::size_t offenses = 0;
  for (std::uint32_t o = 0; o < d.offender_count(); ++o) {
    const auto& h = d.history(o);
    std::size_t v = 0, s = 0;
    for (const auto& e : h.events()) {
      CHECK(d.record(e.row).offender_id == h.offender_id());
      CHECK(d.record(e.row).date == e.date);
      if (e.crime) (e.crime->violent ? v : s)++;
    }
    CHECK(v == h.violent_count());
    CHECK(s == h.nonviolent_count());
    offenses += h.offense_count();
  }
  std::size_t rows_with_crime = 0;
  for (const auto& r : d.records()) rows_with_crime += r.crime ? 1 : 0;
  CHECK(offenses == rows_with_crime);
}

TEST_CASE("prefix dataset and audit") {
  const auto d = fixture::dataset(
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
      "A2,O2,2012-03-02,robbery,1,D01,B0101,,0\n");
  const auto cut = *Date::parse("2012-02-01");
  const Dataset p = d.before(cut);
  CHECK(p.record_count() == 1);
  CHECK(p.offender_count() == 1);
  AccessAudit audit;
  p.attach_audit(&audit);
  (void)p.history(0);
  (void)p.record(0);
  CHECK(audit.reads() >= 1);
  REQUIRE(audit.latest());
  CHECK(*audit.latest() < cut);
}
