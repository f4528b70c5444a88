#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gangnet/domain.hpp"

namespace gangnet {

struct GeneratorConfig {
  std::size_t offenders = 2000;
  int months = 36;
  std::size_t gangs = 0;  // 0: one per 50 offenders
  double target_mean_degree = 3.66;
  double violent_record_fraction = 4450.0 / 64466.0;
  double contagion_strength = 8.0;
  double seasonality_amplitude = 0.3;
  std::uint64_t seed = 0;
  Date start = *Date::from_ymd(2011, 8, 1);
  std::size_t districts = 25;
  std::size_t beats_per_district = 12;
  double gang_fraction = 0.7;          // offenders with a gang label
  double violent_seed_fraction = 0.02;  // contagion sources
  double victim_fraction = 0.02;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

// Deterministic for a fixed config. Throws ConfigError when the degree
// target cannot be reached with the given sizes.
std::vector<ArrestRecord> generate(const GeneratorConfig& config);

struct NetworkStats {
  std::size_t records = 0, violent_records = 0, offenders = 0;
  std::size_t nodes = 0, edges = 0, components = 0;
  double mean_degree = 0;
  double avg_clustering = 0;  // mean local clustering, 0 for degree < 2
  double transitivity = 0;    // 3 * triangles / connected triples
  // Least-squares fit of ln(count) against degree.
  double exp_fit_slope = 0, exp_fit_r2 = 0;
  std::map<std::string, std::size_t> monthly_events;  // YYYY-MM -> arrest events
};

NetworkStats validate_stats(std::span<const ArrestRecord> records);
std::string stats_json(const NetworkStats& s);

}  // namespace gangnet
