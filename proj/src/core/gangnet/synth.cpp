#include "gangnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "gangnet/error.hpp"
#include "gangnet/graph.hpp"
#include "gangnet/rng.hpp"
#include "json.hpp"

namespace gangnet {

void GeneratorConfig::validate() const {
  if (offenders < 2) throw ConfigError("offenders must be at least 2");
  if (months < 1) throw ConfigError("months must be positive");
  if (districts == 0 || beats_per_district == 0) throw ConfigError("districts and beats must be positive");
  if (!(target_mean_degree > 0)) throw ConfigError("target mean degree must be positive");
  if (!(violent_record_fraction > 0 && violent_record_fraction < 1))
    throw ConfigError("violent record fraction must lie in (0, 1)");
  if (!(contagion_strength >= 0)) throw ConfigError("contagion strength must be non-negative");
  if (!(seasonality_amplitude >= 0 && seasonality_amplitude < 1))
    throw ConfigError("seasonality amplitude must lie in [0, 1)");
  for (double f : {gang_fraction, violent_seed_fraction, victim_fraction})
    if (!(f >= 0 && f <= 1)) throw ConfigError("fractions must lie in [0, 1]");
}

namespace {

constexpr double kGangPoolProb = 0.8;
constexpr double kGroupExtraP = 0.6;  // geometric parameter for extra co-offenders
constexpr std::size_t kMaxGroup = 8;
constexpr double kParetoAlpha = 1.6;
constexpr std::uint32_t kMaxArrests = 40;

// Relative frequencies of the violent categories.
const std::vector<std::pair<std::string, double>> kViolentCodes = {{"homicide", 312},
                                                                   {"criminal_sexual_assault", 153},
                                                                   {"robbery", 1959},
                                                                   {"aggravated_assault", 1441},
                                                                   {"aggravated_battery", 896}};
const std::vector<std::pair<std::string, double>> kOtherCodes = {
    {"narcotics", 30}, {"battery", 14},         {"theft", 10},       {"criminal_damage", 8},
    {"weapons_violation", 8}, {"criminal_trespass", 6}, {"burglary", 6}, {"motor_vehicle_theft", 5},
    {"assault", 5},   {"deceptive_practice", 3}, {"public_peace_violation", 3}, {"other_offense", 2}};

struct Person {
  double social = 0;
  std::int32_t gang = -1;
  std::uint32_t district = 0, beat = 0;  // beat is a global index
  std::uint32_t arrests = 1;
};

struct Event {
  std::int32_t day = 0;
  std::uint32_t district = 0, beat = 0;
  std::vector<std::uint32_t> members;  // initiator first
};

// Weighted sampling from a fixed pool via cumulative sums.
struct Pool {
  std::vector<std::uint32_t> members;
  std::vector<double> cum;

  void finish(const std::vector<Person>& people) {
    cum.clear();
    double t = 0;
    for (auto m : members) cum.push_back(t += people[m].social);
  }
  std::uint32_t pick(Rng& rng) const {
    const double x = rng.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), x);
    if (it == cum.end()) --it;
    return members[static_cast<std::size_t>(it - cum.begin())];
  }
};

std::size_t pick_weighted(Rng& rng, const std::vector<std::pair<std::string, double>>& table) {
  double total = 0;
  for (const auto& e : table) total += e.second;
  double x = rng.uniform() * total;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (x < table[i].second) return i;
    x -= table[i].second;
  }
  return table.size() - 1;
}

double logistic(double x) { return 1 / (1 + std::exp(-x)); }

class Generator {
 public:
  explicit Generator(const GeneratorConfig& c) : c_(c) {
    Rng rng(mix_seed(c.seed, 1));
    const std::size_t gangs = c.gangs != 0 ? c.gangs : std::max<std::size_t>(1, c.offenders / 50);
    std::vector<std::uint32_t> gang_home(gangs);
    std::vector<std::pair<std::string, double>> gang_weight;
    for (std::size_t g = 0; g < gangs; ++g) {
      gang_home[g] = static_cast<std::uint32_t>(rng.index(c.districts));
      gang_weight.emplace_back("", 1 / std::pow(static_cast<double>(g + 1), 0.8));
    }
    people_.resize(c.offenders);
    gang_pool_.resize(gangs);
    district_pool_.resize(c.districts);
    for (std::uint32_t i = 0; i < c.offenders; ++i) {
      auto& p = people_[i];
      p.social = rng.exponential();
      if (rng.bernoulli(c.gang_fraction)) {
        p.gang = static_cast<std::int32_t>(pick_weighted(rng, gang_weight));
        p.district = rng.bernoulli(0.75) ? gang_home[p.gang] : static_cast<std::uint32_t>(rng.index(c.districts));
        gang_pool_[p.gang].members.push_back(i);
      } else {
        p.district = static_cast<std::uint32_t>(rng.index(c.districts));
      }
      p.beat = p.district * static_cast<std::uint32_t>(c.beats_per_district) +
               static_cast<std::uint32_t>(rng.index(c.beats_per_district));
      const double u = 1 - rng.uniform();
      p.arrests = std::min(kMaxArrests, static_cast<std::uint32_t>(std::floor(std::pow(u, -1 / kParetoAlpha))));
      district_pool_[p.district].members.push_back(i);
      for (std::uint32_t k = 0; k < p.arrests; ++k) slots_.push_back(i);
    }
    for (auto& g : gang_pool_) g.finish(people_);
    for (auto& d : district_pool_) d.finish(people_);
    rng.shuffle(slots_);

    // Seasonal month weights, trough in January.
    double t = 0;
    for (int m = 0; m < c.months; ++m) {
      const Date d = c.start.first_of_month().add_months(m);
      const int moy = static_cast<int>(static_cast<unsigned>(d.ymd().month()));
      const double w = 1 + c.seasonality_amplitude * std::cos(2 * M_PI * (moy - 7) / 12.0);
      month_start_.push_back(d.days());
      month_len_.push_back(d.add_months(1).days() - d.days());
      month_cum_.push_back(t += w);
    }
  }

  // One event per slot; group probability min(1, q * sociability).
  std::vector<Event> events(double q) const {
    std::vector<Event> out;
    out.reserve(slots_.size());
    std::vector<std::vector<std::int32_t>> used(people_.size());
    auto busy = [&](std::uint32_t who, std::int32_t day) {
      const auto& u = used[who];
      return std::find(u.begin(), u.end(), day) != u.end();
    };
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      Rng rng(mix_seed(c_.seed ^ 0x5eedULL, s));
      const std::uint32_t i = slots_[s];
      const auto& p = people_[i];
      Event e;
      const double x = rng.uniform() * month_cum_.back();
      const auto m = static_cast<std::size_t>(std::upper_bound(month_cum_.begin(), month_cum_.end(), x) -
                                              month_cum_.begin());
      const std::size_t month = std::min(m, month_cum_.size() - 1);
      bool placed = false;
      for (int tries = 0; tries < 16 && !placed; ++tries) {
        e.day = month_start_[month] + static_cast<std::int32_t>(rng.index(static_cast<std::size_t>(month_len_[month])));
        placed = !busy(i, e.day);
      }
      if (!placed) continue;
      e.district = p.district;
      e.beat = rng.bernoulli(0.7) ? p.beat
                                  : p.district * static_cast<std::uint32_t>(c_.beats_per_district) +
                                        static_cast<std::uint32_t>(rng.index(c_.beats_per_district));
      e.members.push_back(i);
      if (rng.uniform() < std::min(1.0, q * p.social)) {
        const Pool* pool = &district_pool_[p.district];
        if (p.gang >= 0 && gang_pool_[p.gang].members.size() > 1 && rng.bernoulli(kGangPoolProb))
          pool = &gang_pool_[p.gang];
        const std::size_t extra = std::min(kMaxGroup - 1, 1 + rng.geometric(kGroupExtraP));
        for (std::size_t k = 0, tries = 0; k < extra && tries < 4 * extra + 4; ++tries) {
          const std::uint32_t j = pool->pick(rng);
          if (std::find(e.members.begin(), e.members.end(), j) != e.members.end() || busy(j, e.day)) continue;
          e.members.push_back(j);
          ++k;
        }
      }
      for (auto who : e.members) used[who].push_back(e.day);
      out.push_back(std::move(e));
    }
    return out;
  }

  static double mean_degree(const std::vector<Event>& events, std::size_t n) {
    std::unordered_set<std::uint64_t> edges;
    std::vector<std::uint8_t> node(n, 0);
    for (const auto& e : events)
      for (std::size_t a = 0; a < e.members.size(); ++a)
        for (std::size_t b = a + 1; b < e.members.size(); ++b) {
          auto u = e.members[a], v = e.members[b];
          if (u > v) std::swap(u, v);
          edges.insert((static_cast<std::uint64_t>(u) << 32) | v);
          node[u] = node[v] = 1;
        }
    const auto nodes = std::count(node.begin(), node.end(), 1);
    return nodes == 0 ? 0.0 : 2.0 * static_cast<double>(edges.size()) / static_cast<double>(nodes);
  }

  std::vector<ArrestRecord> run() const {
    const std::size_t n = people_.size();
    // Calibrate the group-event scale to the degree target by bisection.
    double lo = 1e-3, hi = 64;
    const double f_lo = mean_degree(events(lo), n), f_hi = mean_degree(events(hi), n);
    if (c_.target_mean_degree < f_lo || c_.target_mean_degree > f_hi) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "mean degree %.3g is not reachable with %zu offenders; attainable range is [%.3g, %.3g]",
                    c_.target_mean_degree, n, f_lo, f_hi);
      throw ConfigError(buf);
    }
    for (int it = 0; it < 40; ++it) {
      const double mid = std::sqrt(lo * hi);
      (mean_degree(events(mid), n) < c_.target_mean_degree ? lo : hi) = mid;
    }
    auto evs = events(std::sqrt(lo * hi));
    std::stable_sort(evs.begin(), evs.end(), [](const Event& a, const Event& b) { return a.day < b.day; });

    // Network distance to the violent seeds.
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : evs)
      for (auto u : e.members)
        for (auto v : e.members)
          if (u != v) adj[u].push_back(v);
    Rng rng(mix_seed(c_.seed, 3));
    Pool everyone;
    everyone.members.resize(n);
    std::iota(everyone.members.begin(), everyone.members.end(), 0u);
    everyone.finish(people_);
    const auto seed_count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c_.violent_seed_fraction * static_cast<double>(n))));
    std::vector<std::uint8_t> is_seed(n, 0);
    for (std::size_t k = 0, tries = 0; k < seed_count && tries < 100 * seed_count; ++tries) {
      const auto s = everyone.pick(rng);
      if (!is_seed[s]) {
        is_seed[s] = 1;
        ++k;
      }
    }
    constexpr auto inf = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(n, inf);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i)
      if (is_seed[i]) {
        dist[i] = 0;
        queue.push_back(i);
      }
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (auto w : adj[queue[h]])
        if (dist[w] == inf) {
          dist[w] = dist[queue[h]] + 1;
          queue.push_back(w);
        }
    std::vector<double> prox(n);
    for (std::uint32_t i = 0; i < n; ++i) prox[i] = dist[i] == inf ? 0.0 : 1.0 / (1.0 + dist[i]);

    // Rows per offender, then one forced violent row per seed.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rows_of(n);  // (event, slot in event)
    std::size_t total_rows = 0;
    for (std::size_t e = 0; e < evs.size(); ++e)
      for (std::size_t k = 0; k < evs[e].members.size(); ++k) {
        rows_of[evs[e].members[k]].emplace_back(e, k);
        ++total_rows;
      }
    std::vector<std::vector<std::uint8_t>> violent(evs.size());
    for (std::size_t e = 0; e < evs.size(); ++e) violent[e].assign(evs[e].members.size(), 0);
    std::size_t forced = 0;
    std::vector<std::pair<std::size_t, std::size_t>> forced_rows;
    for (std::uint32_t i = 0; i < n; ++i)
      if (is_seed[i] && !rows_of[i].empty()) {
        forced_rows.push_back(rows_of[i][rng.index(rows_of[i].size())]);
        ++forced;
      }
    const double target = c_.violent_record_fraction * static_cast<double>(total_rows) - static_cast<double>(forced);
    const double cs = c_.contagion_strength;
    auto expected = [&](double b0) {
      double s = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        s += static_cast<double>(rows_of[i].size()) * logistic(b0 + cs * prox[i]);
      return s - static_cast<double>(forced) * logistic(b0 + cs);  // forced rows are not drawn
    };
    double b_lo = -40, b_hi = 20;
    for (int it = 0; it < 80; ++it) {
      const double mid = (b_lo + b_hi) / 2;
      (expected(mid) < target ? b_lo : b_hi) = mid;
    }
    const double b0 = (b_lo + b_hi) / 2;
    for (auto [e, k] : forced_rows) violent[e][k] = 2;
    for (std::uint32_t i = 0; i < n; ++i)
      for (auto [e, k] : rows_of[i]) {
        const bool draw = rng.bernoulli(logistic(b0 + cs * prox[i]));
        if (violent[e][k] == 0 && draw) violent[e][k] = 1;
      }

    // Homicide victims lean toward the violent neighbourhoods.
    std::vector<std::uint8_t> victim(n, 0);
    const auto victims = static_cast<std::size_t>(std::llround(c_.victim_fraction * static_cast<double>(n)));
    {
      std::vector<double> w(n);
      for (std::uint32_t i = 0; i < n; ++i) w[i] = rows_of[i].empty() ? 0.0 : 0.05 + prox[i];
      std::vector<double> cum(n);
      std::partial_sum(w.begin(), w.end(), cum.begin());
      for (std::size_t k = 0, tries = 0; k < victims && tries < 100 * victims + 100 && cum.back() > 0; ++tries) {
        const double x = rng.uniform() * cum.back();
        auto i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
        if (i >= n) i = n - 1;
        if (w[i] > 0 && !victim[i]) {
          victim[i] = 1;
          ++k;
        }
      }
    }

    std::vector<ArrestRecord> out;
    out.reserve(total_rows);
    char buf[32];
    for (std::size_t e = 0; e < evs.size(); ++e) {
      const auto& ev = evs[e];
      std::snprintf(buf, sizeof buf, "A%07zu", e + 1);
      const std::string arrest = buf;
      std::snprintf(buf, sizeof buf, "D%02u", ev.district + 1);
      const std::string district = buf;
      std::snprintf(buf, sizeof buf, "B%02u%02u", ev.district + 1,
                    ev.beat % static_cast<std::uint32_t>(c_.beats_per_district) + 1);
      const std::string beat = buf;
      std::vector<std::size_t> order(ev.members.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ev.members[a] < ev.members[b]; });
      for (auto k : order) {
        const auto who = ev.members[k];
        ArrestRecord r;
        r.arrest_id = arrest;
        std::snprintf(buf, sizeof buf, "O%06u", who + 1);
        r.offender_id = buf;
        r.date = Date(ev.day);
        const bool v = violent[e][k] != 0;
        Rng code_rng(mix_seed(c_.seed ^ 0xc0deULL, e * kMaxGroup + k));
        r.crime = CrimeCode{v ? kViolentCodes[pick_weighted(code_rng, kViolentCodes)].first
                              : kOtherCodes[pick_weighted(code_rng, kOtherCodes)].first,
                            v};
        r.district = district;
        r.beat = beat;
        if (people_[who].gang >= 0) {
          std::snprintf(buf, sizeof buf, "G%03d", people_[who].gang + 1);
          r.gang = buf;
        }
        r.homicide_victim = victim[who] && rows_of[who].back() == std::make_pair(e, k);
        out.push_back(std::move(r));
      }
    }
    return out;
  }

 private:
  const GeneratorConfig& c_;
  std::vector<Person> people_;
  std::vector<Pool> gang_pool_, district_pool_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::int32_t> month_start_, month_len_;
  std::vector<double> month_cum_;
};

}  // namespace

std::vector<ArrestRecord> generate(const GeneratorConfig& config) {
  config.validate();
  return Generator(config).run();
}

NetworkStats validate_stats(std::span<const ArrestRecord> records) {
  NetworkStats s;
  const Dataset data(std::vector<ArrestRecord>(records.begin(), records.end()));
  s.records = data.record_count();
  s.offenders = data.offender_count();
  for (const auto& r : data.records())
    if (r.violent()) ++s.violent_records;
  for (const auto& e : data.events()) ++s.monthly_events[month_label(e.date)];
  const auto g = build_network(data);
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  s.components = connected_components(g).size();
  s.mean_degree = s.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);

  double triangles3 = 0, triples = 0, local_sum = 0;
  std::map<std::size_t, std::size_t> hist;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    const std::size_t d = nb.size();
    ++hist[d];
    double t = 0;  // triangles through v
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        if (g.has_edge(nb[a], nb[b])) t += 1;
    const double pairs = static_cast<double>(d * (d - 1) / 2);
    triangles3 += t;
    triples += pairs;
    if (d >= 2) local_sum += t / pairs;
  }
  s.transitivity = triples > 0 ? triangles3 / triples : 0.0;
  s.avg_clustering = s.nodes == 0 ? 0.0 : local_sum / static_cast<double>(s.nodes);

  if (hist.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double m = static_cast<double>(hist.size());
    for (auto [k, c] : hist) {
      const double x = static_cast<double>(k), y = std::log(static_cast<double>(c));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
    s.exp_fit_slope = vx > 0 ? cxy / vx : 0.0;
    s.exp_fit_r2 = vx > 0 && vy > 0 ? cxy * cxy / (vx * vy) : 0.0;
  }
  return s;
}

std::string stats_json(const NetworkStats& s) {
  nlohmann::ordered_json j;
  j["records"] = s.records;
  j["violent_records"] = s.violent_records;
  j["offenders"] = s.offenders;
  j["nodes"] = s.nodes;
  j["edges"] = s.edges;
  j["mean_degree"] = s.mean_degree;
  j["avg_clustering"] = s.avg_clustering;
  j["transitivity"] = s.transitivity;
  j["components"] = s.components;
  j["exp_fit_slope"] = s.exp_fit_slope;
  j["exp_fit_r2"] = s.exp_fit_r2;
  j["monthly_events"] = nlohmann::ordered_json::object();
  for (const auto& [m, c] : s.monthly_events) j["monthly_events"][m] = c;
  return j.dump(2) + "\n";
}

}  // namespace gangnet
