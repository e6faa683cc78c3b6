// twtsim command line: run experiments from a JSON config and emit CSV/JSON
// result files. Exit codes: 0 success, 2 configuration error, 3 invariant
// violation during simulation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twtsim/twtsim.hpp"

namespace fs = std::filesystem;
using namespace twtsim;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string seeds_arg;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  unsigned jobs = 1;
};

std::vector<std::uint64_t> parse_seeds(const std::string& arg, std::uint64_t fallback) {
  if (arg.empty()) return {fallback};
  std::vector<std::uint64_t> seeds;
  std::string tok;
  std::istringstream in(arg);
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    try {
      seeds.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad seed value '" + tok + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("--seeds list is empty");
  return seeds;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->required();
  cmd->add_option("--seeds", args.seeds_arg, "comma-separated episode seeds");
  cmd->add_option("--override", args.overrides,
                  "dot-path config override, e.g. ra.v_param=100 (repeatable)");
  cmd->add_option("--out", args.out_dir, "output directory (default: out)");
  cmd->add_option("--jobs", args.jobs, "max concurrent episodes (default: 1)");
}

int cmd_validate(const CommonArgs& args) {
  json echo;
  Scenario sc = load_scenario(args.config_path, args.overrides, &echo);
  if (auto ov = find_sp_overlap(sc.grouping.triplets)) {
    std::cerr << "error: service periods of groups " << (ov->group_a + 1) << " and "
              << (ov->group_b + 1) << " overlap at block " << ov->block << "\n";
    return 2;
  }
  if (sc.grouping.routine == GroupingRoutine::fixed) {
    GroupAssignment ga;
    ga.groups = sc.grouping.fixed_groups;
    ga.triplets = sc.grouping.triplets;
    std::vector<int> ids;
    for (const auto& s : sc.stas) ids.push_back(s.id);
    const auto rep = validate_partition(ga, ids);
    if (!rep.ok) {
      std::cerr << "error: " << rep.message() << "\n";
      return 2;
    }
  }
  std::cout << echo.dump(2) << "\n";
  return 0;
}

int cmd_group(const CommonArgs& args) {
  json echo;
  Scenario sc = load_scenario(args.config_path, args.overrides, &echo);
  const auto ga = make_grouping(sc.global, sc.stas, sc.grouping, sc.ra, args.jobs);
  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "groups.json",
             groups_to_json(ga, sc.grouping.routine).dump(2) + "\n");
  std::cout << groups_to_json(ga, sc.grouping.routine).dump(2) << "\n";
  return 0;
}

int cmd_run(const CommonArgs& args) {
  json echo;
  Scenario sc = load_scenario(args.config_path, args.overrides, &echo);
  const auto seeds = parse_seeds(args.seeds_arg, sc.global.seed);
  const auto ga = make_grouping(sc.global, sc.stas, sc.grouping, sc.ra, args.jobs);

  std::vector<EpisodeMetrics> all(seeds.size());
  parallel_for(seeds.size(), args.jobs, [&](std::size_t i) {
    all[i] = run_episode(sc.global, sc.stas, ga, sc.ra, sc.global.horizon_blocks,
                         seeds[i]);
  });

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "metrics.csv", metrics_to_csv(all));
  json mj;
  mj["config"] = echo;
  mj["seeds"] = seeds;
  mj["grouping"] = groups_to_json(ga, sc.grouping.routine);
  mj["episodes"] = json::array();
  for (const auto& em : all) mj["episodes"].push_back(metrics_to_json(em));
  write_file(fs::path(args.out_dir) / "metrics.json", mj.dump(2) + "\n");
  write_file(fs::path(args.out_dir) / "groups.json",
             groups_to_json(ga, sc.grouping.routine).dump(2) + "\n");

  long violations = 0;
  for (const auto& em : all) {
    violations += em.violations.total();
    std::cout << "seed " << em.seed
              << ": system timely throughput = " << fmt_double(em.system_timely_throughput)
              << " pkt/block\n";
  }
  if (violations > 0) {
    std::cerr << "error: " << violations << " invariant violations recorded\n";
    return 3;
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  json echo;
  Scenario sc = load_scenario(args.config_path, args.overrides, &echo);
  if (!sc.sweep) throw ConfigError("config has no sweep section");
  const auto seeds = parse_seeds(args.seeds_arg, sc.global.seed);
  const auto res = sweep(sc, seeds, args.jobs);

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "sweep.csv", sweep_to_csv(res));
  write_file(fs::path(args.out_dir) / "sweep_summary.csv", sweep_summary_to_csv(res));
  json mj;
  mj["config"] = echo;
  mj["seeds"] = seeds;
  write_file(fs::path(args.out_dir) / "sweep_config.json", mj.dump(2) + "\n");

  for (const auto& s : res.summary) {
    std::cout << res.axis << "=" << fmt_double(s.axis_value) << " "
              << to_string(s.grouping) << "+" << to_string(s.ra) << ": mean "
              << fmt_double(s.mean) << " (stderr " << fmt_double(s.stderr_) << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink TWT scheduling simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, group_args, validate_args;
  auto* run = app.add_subcommand("run", "run episodes and write metrics files");
  add_common(run, run_args);
  auto* swp = app.add_subcommand("sweep", "run the configured sweep");
  add_common(swp, sweep_args);
  auto* grp = app.add_subcommand("group", "run the grouping routine only");
  add_common(grp, group_args);
  auto* val = app.add_subcommand("validate", "check the config and print it normalized");
  add_common(val, validate_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (swp->parsed()) return cmd_sweep(sweep_args);
    if (grp->parsed()) return cmd_group(group_args);
    if (val->parsed()) return cmd_validate(validate_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
