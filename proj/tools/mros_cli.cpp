// mros: command-line runner for adaptive/static navigation missions.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mros/mros.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(mros_status s) {
  switch (s) {
    case MROS_OK: return kExitOk;
    case MROS_ERR_PARSE:
    case MROS_ERR_SEMANTIC:
    case MROS_ERR_CONFIG: return kExitParse;
    case MROS_ERR_INVALID_ARGUMENT:
    case MROS_ERR_IO:
    case MROS_ERR_UNKNOWN_MODE:
    case MROS_ERR_UNKNOWN_FD:
    case MROS_ERR_UNKNOWN_COMPONENT: return kExitUsage;
    case MROS_ERR_INTERNAL: return kExitRuntime;
  }
  return kExitRuntime;
}

int report(mros_status s) {
  if (s == MROS_OK) return kExitOk;
  if (mros_last_error_line() > 0)
    std::fprintf(stderr, "error (%s) at %d:%d: %s\n", mros_status_name(s), mros_last_error_line(),
                 mros_last_error_column(), mros_last_error());
  else
    std::fprintf(stderr, "error (%s): %s\n", mros_status_name(s), mros_last_error());
  return exit_code_for(s);
}

struct ModelDeleter {
  void operator()(mros_model* m) const { mros_model_destroy(m); }
};
using ModelPtr = std::unique_ptr<mros_model, ModelDeleter>;

struct Common {
  std::string model;
  std::string config;
  std::optional<double> duration;
  std::optional<double> obstacle_rate;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "Knowledge model file")->required();
  cmd->add_option("--config", c.config, "Metacontrol configuration file")->required();
  cmd->add_option("--duration", c.duration, "Mission time limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--obstacle-rate", c.obstacle_rate, "Obstacle arrivals per second")
      ->check(CLI::NonNegativeNumber);
}

mros_status load(const Common& c, ModelPtr& model) {
  mros_model* raw = nullptr;
  const mros_status s = mros_model_load_files(c.model.c_str(), c.config.c_str(), &raw);
  model.reset(raw);
  return s;
}

void apply_common(const Common& c, mros_scenario& sc) {
  if (c.duration) sc.duration_limit_s = *c.duration;
  if (c.obstacle_rate) sc.obstacle_rate = *c.obstacle_rate;
}

const char* status_text(mros_mission_status s) {
  switch (s) {
    case MROS_MISSION_RUNNING: return "RUNNING";
    case MROS_MISSION_SUCCESS: return "SUCCESS";
    case MROS_MISSION_COLLISION: return "COLLISION";
    case MROS_MISSION_BATTERY_DEPLETED: return "BATTERY_DEPLETED";
    case MROS_MISSION_TIMEOUT: return "TIMEOUT";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metacontrol runtime: adaptive navigation missions and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mros_version()));

  Common run_opts;
  std::string mode;
  std::uint64_t seed = 0;
  std::string initial_fd;
  std::string fault;
  auto* run = app.add_subcommand("run", "Run one mission");
  add_common(run, run_opts);
  run->add_option("--mode", mode, "adaptive or static:<fd>")->required();
  run->add_option("--seed", seed, "Scenario seed")->required();
  run->add_option("--out", run_opts.out, "Directory for trace and log files");
  run->add_option("--initial-fd", initial_fd, "Design applied at start in adaptive mode");
  run->add_option("--inject-fault", fault, "Component fault as <component>@<seconds>");

  Common cmp_opts;
  std::size_t seed_count = 0;
  std::string seed_list;
  std::string static_fd;
  unsigned jobs = 0;
  auto* cmp = app.add_subcommand("compare", "Paired adaptive/static runs over many seeds");
  add_common(cmp, cmp_opts);
  auto* seeds_opt = cmp->add_option("--seeds", seed_count, "Use seeds 1..n")->check(CLI::PositiveNumber);
  auto* list_opt = cmp->add_option("--seed-list", seed_list, "File with one seed per line");
  seeds_opt->excludes(list_opt);
  cmp->add_option("--static-fd", static_fd, "Design used by the static baseline")->required();
  cmp->add_option("--out", cmp_opts.out, "Directory for compare.csv");
  cmp->add_option("--jobs", jobs, "Worker threads, 0 for all cores");

  std::string case_dir;
  auto* gen = app.add_subcommand("gen-case-study", "Write the 27-design case-study model and configuration");
  gen->add_option("--out", case_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    if (auto s = mros_write_case_study(case_dir.c_str())) return report(s);
    std::printf("wrote %s/case_study.model and %s/case_study.config\n", case_dir.c_str(), case_dir.c_str());
    return kExitOk;
  }

  if (run->parsed()) {
    mros_scenario sc;
    mros_scenario_init(&sc);
    apply_common(run_opts, sc);
    sc.seed = seed;
    if (!initial_fd.empty()) sc.initial_fd = initial_fd.c_str();
    std::string fault_component;
    if (!fault.empty()) {
      const auto at = fault.rfind('@');
      try {
        if (at == std::string::npos || at == 0) throw std::invalid_argument(fault);
        std::size_t used = 0;
        sc.fault_at = std::stod(fault.substr(at + 1), &used);
        if (used != fault.size() - at - 1) throw std::invalid_argument(fault);
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: --inject-fault expects <component>@<seconds>, got '%s'\n", fault.c_str());
        return kExitUsage;
      }
      fault_component = fault.substr(0, at);
      sc.fault_component = fault_component.c_str();
    }

    ModelPtr model;
    if (auto s = load(run_opts, model)) return report(s);
    mros_metrics m{};
    if (auto s = mros_run_mission(model.get(), mode.c_str(), &sc, run_opts.out.empty() ? nullptr : run_opts.out.c_str(),
                                  &m))
      return report(s);
    std::printf("seed=%llu mode=%s status=%s safety_violation_frac=%.6g energy_violation_frac=%.6g adaptations=%d "
                "no_feasible_events=%d mission_time_s=%.6g\n",
                static_cast<unsigned long long>(m.seed), mode.c_str(), status_text(m.status), m.safety_violation_frac,
                m.energy_violation_frac, m.adaptations, m.no_feasible_events, m.mission_time_s);
    return kExitOk;
  }

  // compare
  if (seed_count == 0 && seed_list.empty()) {
    std::fprintf(stderr, "error: compare needs --seeds <n> or --seed-list <file>\n");
    return kExitUsage;
  }
  std::vector<std::uint64_t> seeds;
  if (!seed_list.empty()) {
    std::uint64_t* buf = nullptr;
    std::size_t n = 0;
    if (auto s = mros_read_seed_list(seed_list.c_str(), &buf, &n)) return report(s);
    seeds.assign(buf, buf + n);
    mros_free(buf);
  } else {
    for (std::size_t i = 1; i <= seed_count; ++i) seeds.push_back(i);
  }

  mros_scenario sc;
  mros_scenario_init(&sc);
  apply_common(cmp_opts, sc);
  ModelPtr model;
  if (auto s = load(cmp_opts, model)) return report(s);
  mros_comparison result{};
  char verdict[1024];
  if (auto s = mros_compare(model.get(), seeds.data(), seeds.size(), static_fd.c_str(), &sc, jobs,
                            cmp_opts.out.empty() ? nullptr : cmp_opts.out.c_str(), &result, verdict, sizeof verdict))
    return report(s);
  std::printf("%zu paired seeds\n%s", seeds.size(), verdict);
  return kExitOk;
}
