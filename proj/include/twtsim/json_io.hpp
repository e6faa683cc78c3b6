#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twtsim/experiment.hpp"
#include "twtsim/util.hpp"

namespace twtsim {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace io_detail {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::vector<double> number_or_list(const json& j, const char* key,
                                          std::vector<double> fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return v.get<std::vector<double>>();
  throw ConfigError(std::string("field '") + key + "' must be a number or array");
}

}  // namespace io_detail

inline TrafficModel traffic_from_json(const json& j) {
  using io_detail::get_or;
  const std::string model = get_or<std::string>(j, "model", "bernoulli");
  if (model == "bernoulli") {
    BernoulliTraffic b;
    b.batch_size = get_or(j, "batch_size", b.batch_size);
    b.prob = get_or(j, "prob", b.prob);
    if (b.prob < 0 || b.prob > 1) throw ConfigError("bernoulli prob must be in [0,1]");
    if (b.batch_size < 0) throw ConfigError("bernoulli batch_size must be >= 0");
    return b;
  }
  if (model == "cbr") {
    CbrTraffic c;
    c.burst_bytes = get_or(j, "burst_bytes", c.burst_bytes);
    c.interval_blocks = get_or(j, "interval_blocks", c.interval_blocks);
    if (c.interval_blocks < 1) throw ConfigError("cbr interval_blocks must be >= 1");
    if (c.burst_bytes < 0) throw ConfigError("cbr burst_bytes must be >= 0");
    return c;
  }
  if (model == "buffered_video") {
    BufferedVideoTraffic bv;
    bv.fps = get_or(j, "fps", bv.fps);
    bv.weibull_shape = get_or(j, "weibull_shape", bv.weibull_shape);
    bv.weibull_scale = get_or(j, "weibull_scale", bv.weibull_scale);
    bv.packet_bytes = get_or(j, "packet_bytes", bv.packet_bytes);
    bv.target_rate_bps = get_or(j, "target_rate_bps", bv.target_rate_bps);
    bv.max_frame_packets = get_or(j, "max_frame_packets", bv.max_frame_packets);
    if (bv.fps <= 0) throw ConfigError("buffered_video fps must be > 0");
    if (bv.weibull_shape <= 0) throw ConfigError("weibull_shape must be > 0");
    if (bv.max_frame_packets < 1) throw ConfigError("max_frame_packets must be >= 1");
    return bv;
  }
  throw ConfigError("unknown traffic model '" + model +
                    "' (expected bernoulli|cbr|buffered_video)");
}

inline json traffic_to_json(const TrafficModel& model) {
  struct V {
    json operator()(const BernoulliTraffic& b) const {
      return {{"model", "bernoulli"}, {"batch_size", b.batch_size}, {"prob", b.prob}};
    }
    json operator()(const CbrTraffic& c) const {
      return {{"model", "cbr"},
              {"burst_bytes", c.burst_bytes},
              {"interval_blocks", c.interval_blocks}};
    }
    json operator()(const BufferedVideoTraffic& bv) const {
      return {{"model", "buffered_video"},
              {"fps", bv.fps},
              {"weibull_shape", bv.weibull_shape},
              {"weibull_scale", bv.weibull_scale},
              {"packet_bytes", bv.packet_bytes},
              {"target_rate_bps", bv.target_rate_bps},
              {"max_frame_packets", bv.max_frame_packets}};
    }
  };
  return std::visit(V{}, model);
}

inline TwtTriplet triplet_from_json(const json& j) {
  using io_detail::get_or;
  TwtTriplet tw;
  tw.offset_blocks = get_or(j, "offset_blocks", tw.offset_blocks);
  tw.wake_interval_blocks = get_or(j, "wake_interval_blocks", tw.wake_interval_blocks);
  tw.sp_blocks = get_or(j, "sp_blocks", tw.sp_blocks);
  validate_triplet(tw);
  return tw;
}

inline json triplet_to_json(const TwtTriplet& tw) {
  return {{"offset_blocks", tw.offset_blocks},
          {"wake_interval_blocks", tw.wake_interval_blocks},
          {"sp_blocks", tw.sp_blocks}};
}

inline Scenario scenario_from_json(const json& j) {
  using io_detail::get_or;
  Scenario sc;
  auto& g = sc.global;
  g.num_rus = get_or(j, "num_rus", g.num_rus);
  g.ru_bandwidth_hz = io_detail::number_or_list(j, "ru_bandwidth_hz", {});
  g.noise_power_w = get_or(j, "noise_power_w", g.noise_power_w);
  g.ftt_seconds = get_or(j, "ftt_seconds", g.ftt_seconds);
  g.p_max = get_or(j, "p_max", g.p_max);
  g.power_levels = get_or(j, "power_levels", g.power_levels);
  g.gain_set = get_or(j, "gain_set", g.gain_set);
  g.gain_probs = get_or(j, "gain_probs", g.gain_probs);
  g.horizon_blocks = get_or(j, "horizon_blocks", g.horizon_blocks);
  g.seed = get_or(j, "seed", g.seed);
  g.a_max_override = get_or(j, "a_max", g.a_max_override);

  if (j.contains("ra")) {
    const auto& r = j.at("ra");
    sc.ra = parse_ra_routine(io_detail::get_or<std::string>(r, "routine", "dpp"));
    g.v_param = get_or(r, "v_param", g.v_param);
  }
  g.normalize();
  g.validate();

  if (!j.contains("stas") || !j.at("stas").is_array() || j.at("stas").empty())
    throw ConfigError("config must declare a nonempty 'stas' array");
  int next_id = 1;
  for (const auto& sj : j.at("stas")) {
    StaProfile s;
    s.id = get_or(sj, "id", next_id);
    s.weight = get_or(sj, "weight", s.weight);
    s.payload_bits = get_or(sj, "payload_bits", s.payload_bits);
    s.deadline_blocks = get_or(sj, "deadline_blocks", s.deadline_blocks);
    s.buffer_cap = get_or(sj, "buffer_cap", s.buffer_cap);
    s.p_avg = get_or(sj, "p_avg", s.p_avg);
    if (sj.contains("traffic")) s.traffic = traffic_from_json(sj.at("traffic"));
    validate_profile(s, g);
    sc.stas.push_back(s);
    next_id = s.id + 1;
  }

  if (!j.contains("grouping")) throw ConfigError("config must declare 'grouping'");
  const auto& gj = j.at("grouping");
  sc.grouping.routine =
      parse_grouping_routine(io_detail::get_or<std::string>(gj, "routine", "rr"));
  if (!gj.contains("triplets") || !gj.at("triplets").is_array() ||
      gj.at("triplets").empty())
    throw ConfigError("grouping must declare a nonempty 'triplets' array");
  for (const auto& tj : gj.at("triplets"))
    sc.grouping.triplets.push_back(triplet_from_json(tj));
  if (gj.contains("fixed"))
    sc.grouping.fixed_groups = gj.at("fixed").get<std::vector<std::vector<int>>>();
  if (gj.contains("eval")) {
    const auto& ej = gj.at("eval");
    sc.grouping.eval.horizon = get_or(ej, "horizon_blocks", sc.grouping.eval.horizon);
    sc.grouping.eval.seeds = get_or(ej, "seeds", sc.grouping.eval.seeds);
    if (ej.contains("ra")) {
      sc.grouping.eval.ra = parse_ra_routine(ej.at("ra").get<std::string>());
      sc.grouping.eval_ra_explicit = true;
    }
    if (sc.grouping.eval.seeds.empty())
      throw ConfigError("grouping.eval.seeds must be nonempty");
    if (sc.grouping.eval.horizon < 1)
      throw ConfigError("grouping.eval.horizon_blocks must be >= 1");
  }

  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const auto& swj = j.at("sweep");
    SweepConfig sw;
    sw.axis = io_detail::get_or<std::string>(swj, "axis", "");
    if (sw.axis != "p_avg" && sw.axis != "num_stas")
      throw ConfigError("sweep.axis must be 'p_avg' or 'num_stas'");
    sw.values = get_or(swj, "values", sw.values);
    sw.horizon_blocks = get_or(swj, "horizon_blocks", sw.horizon_blocks);
    if (swj.contains("combos")) {
      for (const auto& cj : swj.at("combos")) {
        if (!cj.is_array() || cj.size() != 2)
          throw ConfigError("sweep.combos entries must be [grouping, ra] pairs");
        sw.combos.emplace_back(parse_grouping_routine(cj.at(0).get<std::string>()),
                               parse_ra_routine(cj.at(1).get<std::string>()));
      }
    }
    sc.sweep = std::move(sw);
  }
  return sc;
}

inline json scenario_to_json(const Scenario& sc) {
  json j;
  const auto& g = sc.global;
  j["num_rus"] = g.num_rus;
  j["ru_bandwidth_hz"] = g.ru_bandwidth_hz;
  j["noise_power_w"] = g.noise_power_w;
  j["ftt_seconds"] = g.ftt_seconds;
  j["p_max"] = g.p_max;
  j["power_levels"] = g.power_levels;
  j["gain_set"] = g.gain_set;
  if (!g.gain_probs.empty()) j["gain_probs"] = g.gain_probs;
  j["horizon_blocks"] = g.horizon_blocks;
  j["seed"] = g.seed;
  j["a_max"] = g.a_max_override;
  j["ra"] = {{"routine", to_string(sc.ra)}, {"v_param", g.v_param}};
  j["stas"] = json::array();
  for (const auto& s : sc.stas) {
    j["stas"].push_back({{"id", s.id},
                         {"weight", s.weight},
                         {"payload_bits", s.payload_bits},
                         {"deadline_blocks", s.deadline_blocks},
                         {"buffer_cap", s.buffer_cap},
                         {"p_avg", s.p_avg},
                         {"traffic", traffic_to_json(s.traffic)}});
  }
  json gj;
  gj["routine"] = to_string(sc.grouping.routine);
  gj["triplets"] = json::array();
  for (const auto& tw : sc.grouping.triplets) gj["triplets"].push_back(triplet_to_json(tw));
  if (!sc.grouping.fixed_groups.empty()) gj["fixed"] = sc.grouping.fixed_groups;
  json ej;
  ej["horizon_blocks"] = sc.grouping.eval.horizon;
  ej["seeds"] = sc.grouping.eval.seeds;
  if (sc.grouping.eval_ra_explicit) ej["ra"] = to_string(sc.grouping.eval.ra);
  gj["eval"] = ej;
  j["grouping"] = gj;
  if (sc.sweep) {
    json swj;
    swj["axis"] = sc.sweep->axis;
    swj["values"] = sc.sweep->values;
    swj["horizon_blocks"] = sc.sweep->horizon_blocks;
    swj["combos"] = json::array();
    for (const auto& [grp, ra] : sc.sweep->combos)
      swj["combos"].push_back({to_string(grp), to_string(ra)});
    j["sweep"] = swj;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Overrides and file loading
// ---------------------------------------------------------------------------

/// Applies a `dot.path=value` override onto the raw config document. The
/// value is parsed as JSON when possible, else taken as a string.
inline void apply_override(json& doc, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key.path=value: '" + kv + "'");
  std::string path = "/" + kv.substr(0, eq);
  for (auto& ch : path)
    if (ch == '.') ch = '/';
  const std::string raw = kv.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // plain string
  }
  try {
    doc[json::json_pointer(path)] = value;
  } catch (const json::exception& e) {
    throw ConfigError("cannot apply override '" + kv + "': " + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

inline Scenario load_scenario(const std::string& path,
                              const std::vector<std::string>& overrides, json* echo) {
  json doc = load_json_file(path);
  for (const auto& kv : overrides) apply_override(doc, kv);
  Scenario sc = scenario_from_json(doc);
  if (echo) *echo = scenario_to_json(sc);
  return sc;
}

// ---------------------------------------------------------------------------
// Result emission
// ---------------------------------------------------------------------------

inline json metrics_to_json(const EpisodeMetrics& em) {
  json j;
  j["seed"] = em.seed;
  j["horizon_blocks"] = em.horizon;
  j["system_timely_throughput"] = em.system_timely_throughput;
  j["violations"] = {{"schedule", em.violations.schedule},
                     {"power_cap", em.violations.power_cap},
                     {"buffer_bound", em.violations.buffer_bound},
                     {"conservation", em.violations.conservation}};
  j["stas"] = json::array();
  for (const auto& s : em.stas) {
    j["stas"].push_back({{"id", s.id},
                         {"weight", s.weight},
                         {"admitted", s.admitted},
                         {"transmitted", s.transmitted},
                         {"discarded_overflow", s.discarded_overflow},
                         {"discarded_expiry", s.discarded_expiry},
                         {"final_buffer", s.final_buffer},
                         {"offered_bits", s.offered_bits},
                         {"timely_throughput", s.timely_throughput},
                         {"avg_power_w", s.avg_power_w},
                         {"virtual_queue_final", s.g_final}});
  }
  return j;
}

inline const char* kMetricsCsvHeader =
    "seed,sta,weight,admitted,transmitted,discarded_overflow,discarded_expiry,"
    "final_buffer,timely_throughput,avg_power_w,virtual_queue_final";

inline std::string metrics_to_csv(const std::vector<EpisodeMetrics>& all) {
  std::ostringstream os;
  os << kMetricsCsvHeader << "\n";
  for (const auto& em : all) {
    long adm = 0, tx = 0, dov = 0, dex = 0, fb = 0;
    double energy = 0;
    for (const auto& s : em.stas) {
      os << em.seed << "," << s.id << "," << fmt_double(s.weight) << "," << s.admitted
         << "," << s.transmitted << "," << s.discarded_overflow << ","
         << s.discarded_expiry << "," << s.final_buffer << ","
         << fmt_double(s.timely_throughput) << "," << fmt_double(s.avg_power_w) << ","
         << fmt_double(s.g_final) << "\n";
      adm += s.admitted;
      tx += s.transmitted;
      dov += s.discarded_overflow;
      dex += s.discarded_expiry;
      fb += s.final_buffer;
      energy += s.energy;
    }
    os << em.seed << ",system,," << adm << "," << tx << "," << dov << "," << dex << ","
       << fb << "," << fmt_double(em.system_timely_throughput) << ","
       << fmt_double(energy / static_cast<double>(em.horizon)) << ",\n";
  }
  return os.str();
}

inline std::string sweep_to_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "axis,axis_value,grouping,ra,seed,system_timely_throughput";
  for (int i = 1; i <= res.max_stas; ++i) os << ",sta_" << i;
  os << "\n";
  for (const auto& row : res.rows) {
    os << res.axis << "," << fmt_double(row.axis_value) << ","
       << to_string(row.grouping) << "," << to_string(row.ra) << "," << row.seed << ","
       << fmt_double(row.system_timely_throughput);
    std::vector<std::string> cells(static_cast<std::size_t>(res.max_stas));
    for (const auto& [id, tt] : row.per_sta)
      if (id >= 1 && id <= res.max_stas)
        cells[static_cast<std::size_t>(id - 1)] = fmt_double(tt);
    for (const auto& c : cells) os << "," << c;
    os << "\n";
  }
  return os.str();
}

inline std::string sweep_summary_to_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "axis,axis_value,grouping,ra,n_seeds,mean_system_timely_throughput,stderr\n";
  for (const auto& s : res.summary) {
    os << res.axis << "," << fmt_double(s.axis_value) << "," << to_string(s.grouping)
       << "," << to_string(s.ra) << "," << s.n << "," << fmt_double(s.mean) << ","
       << fmt_double(s.stderr_) << "\n";
  }
  return os.str();
}

inline json groups_to_json(const GroupAssignment& ga, GroupingRoutine routine) {
  json j;
  j["routine"] = to_string(routine);
  j["groups"] = ga.groups;
  j["triplets"] = json::array();
  for (const auto& tw : ga.triplets) j["triplets"].push_back(triplet_to_json(tw));
  return j;
}

}  // namespace twtsim
