#include "mros/mros.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "diagnostics/observer.hpp"
#include "harness/mission.hpp"
#include "navsim/case_study.hpp"

struct mros_model {
  mros::harness::LoadedModel loaded;
  std::vector<std::string> design_ids;
};

namespace {

struct LastError {
  std::string message;
  int line = 0;
  int column = 0;
};

thread_local LastError g_error;

mros_status fail(mros_status status, std::string message, int line = 0, int column = 0) {
  g_error = {std::move(message), line, column};
  return status;
}

template <typename Fn>
mros_status guarded(Fn&& fn) {
  using namespace mros;
  g_error = {};
  try {
    fn();
    return MROS_OK;
  } catch (const dsl::ParseError& e) {
    return fail(MROS_ERR_PARSE, e.what(), e.line(), e.column());
  } catch (const dsl::SemanticError& e) {
    return fail(MROS_ERR_SEMANTIC, e.what(), e.line(), e.column());
  } catch (const dsl::ConfigError& e) {
    return fail(MROS_ERR_CONFIG, e.what());
  } catch (const harness::IoError& e) {
    return fail(MROS_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MROS_ERR_IO, e.what());
  } catch (const harness::UnknownMode& e) {
    return fail(MROS_ERR_UNKNOWN_MODE, e.what());
  } catch (const harness::UnknownStaticFd& e) {
    return fail(MROS_ERR_UNKNOWN_FD, e.what());
  } catch (const nav::UnknownComponent& e) {
    return fail(MROS_ERR_UNKNOWN_COMPONENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MROS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(MROS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MROS_ERR_INTERNAL, "unknown error");
  }
}

mros_status null_argument(const char* name) {
  return fail(MROS_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

mros_model* make_model(mros::harness::LoadedModel loaded) {
  auto* m = new mros_model{std::move(loaded), {}};
  for (const auto& d : m->loaded.document.declarations)
    if (const auto* fd = std::get_if<mros::dsl::DesignDecl>(&d.body)) m->design_ids.push_back(fd->id);
  return m;
}

mros::harness::Scenario to_scenario(const mros_scenario& s) {
  mros::harness::Scenario sc;
  sc.spec.start = {s.start_x, s.start_y};
  sc.spec.goal = {s.goal_x, s.goal_y};
  sc.spec.duration_limit_s = s.duration_limit_s;
  sc.spec.obstacle_rate = s.obstacle_rate;
  sc.spec.seed = s.seed;
  sc.spec.dt = s.dt;
  sc.spec.initial_battery = s.initial_battery;
  if (!(s.staleness_s > 0.0)) throw std::invalid_argument("staleness_s must be positive");
  sc.reasoner.staleness_s = s.staleness_s;
  if (s.initial_fd) sc.initial_fd = s.initial_fd;
  if (s.fault_component) sc.fault = mros::harness::FaultInjection{s.fault_component, s.fault_at};
  return sc;
}

mros_mission_status to_c(mros::nav::MissionStatus s) {
  switch (s) {
    case mros::nav::MissionStatus::Running: return MROS_MISSION_RUNNING;
    case mros::nav::MissionStatus::Success: return MROS_MISSION_SUCCESS;
    case mros::nav::MissionStatus::Collision: return MROS_MISSION_COLLISION;
    case mros::nav::MissionStatus::BatteryDepleted: return MROS_MISSION_BATTERY_DEPLETED;
    case mros::nav::MissionStatus::Timeout: return MROS_MISSION_TIMEOUT;
  }
  return MROS_MISSION_RUNNING;
}

mros_metrics to_c(const mros::harness::MissionMetrics& m) {
  return {m.seed, m.safety_violation_frac, m.energy_violation_frac, m.success ? 1 : 0, to_c(m.status),
          m.adaptations, m.no_feasible_events, m.mission_time_s};
}

mros_mode_summary to_c(const mros::harness::ModeSummary& s) {
  return {s.safety_violation_frac, s.energy_violation_frac, s.success_rate, s.adaptations, s.no_feasible_events};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw mros::harness::IoError("cannot write " + path.string());
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw mros::harness::IoError("cannot write " + path.string());
}

}  // namespace

extern "C" {

const char* mros_last_error(void) { return g_error.message.c_str(); }
int mros_last_error_line(void) { return g_error.line; }
int mros_last_error_column(void) { return g_error.column; }

const char* mros_version(void) { return "1.0.0"; }

const char* mros_status_name(mros_status status) {
  switch (status) {
    case MROS_OK: return "OK";
    case MROS_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case MROS_ERR_IO: return "IO";
    case MROS_ERR_PARSE: return "PARSE";
    case MROS_ERR_SEMANTIC: return "SEMANTIC";
    case MROS_ERR_CONFIG: return "CONFIG";
    case MROS_ERR_UNKNOWN_MODE: return "UNKNOWN_MODE";
    case MROS_ERR_UNKNOWN_FD: return "UNKNOWN_FD";
    case MROS_ERR_UNKNOWN_COMPONENT: return "UNKNOWN_COMPONENT";
    case MROS_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

double mros_energy_attr(double power_load) { return mros::diag::energy_attr(power_load); }
double mros_safety_attr(double d) { return mros::diag::safety_attr(d); }

mros_status mros_model_load_files(const char* model_path, const char* config_path, mros_model** out) {
  if (!model_path) return null_argument("model_path");
  if (!config_path) return null_argument("config_path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = make_model(mros::harness::load_model_files(model_path, config_path)); });
}

mros_status mros_model_load_text(const char* model_text, const char* config_text, mros_model** out) {
  if (!model_text) return null_argument("model_text");
  if (!config_text) return null_argument("config_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = make_model(mros::harness::load_model(model_text, config_text)); });
}

void mros_model_destroy(mros_model* model) { delete model; }

size_t mros_model_design_count(const mros_model* model) { return model ? model->design_ids.size() : 0; }

const char* mros_model_design_id(const mros_model* model, size_t index) {
  if (!model || index >= model->design_ids.size()) return nullptr;
  return model->design_ids[index].c_str();
}

void mros_scenario_init(mros_scenario* s) {
  if (!s) return;
  const mros::nav::MissionSpec spec;
  *s = {};
  s->start_x = spec.start.x;
  s->start_y = spec.start.y;
  s->goal_x = spec.goal.x;
  s->goal_y = spec.goal.y;
  s->duration_limit_s = spec.duration_limit_s;
  s->obstacle_rate = spec.obstacle_rate;
  s->seed = spec.seed;
  s->dt = spec.dt;
  s->initial_battery = spec.initial_battery;
  s->staleness_s = mros::reasoner::ReasonerConfig{}.staleness_s;
}

mros_status mros_run_mission(const mros_model* model, const char* mode, const mros_scenario* scenario,
                             const char* out_dir, mros_metrics* out) {
  if (!model) return null_argument("model");
  if (!mode) return null_argument("mode");
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    const auto result =
        mros::harness::run_mission(model->loaded, mros::harness::Mode::parse(mode), to_scenario(*scenario));
    if (out_dir) mros::harness::write_mission_outputs(result, out_dir);
    if (out) *out = to_c(result.metrics);
  });
}

mros_status mros_compare(const mros_model* model, const uint64_t* seeds, size_t seed_count, const char* static_fd,
                         const mros_scenario* scenario, unsigned jobs, const char* out_dir, mros_comparison* out,
                         char* verdict, size_t verdict_size) {
  if (!model) return null_argument("model");
  if (!seeds && seed_count) return null_argument("seeds");
  if (!static_fd) return null_argument("static_fd");
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    const auto c = mros::harness::compare(model->loaded, std::span<const std::uint64_t>(seeds, seed_count),
                                          static_fd, to_scenario(*scenario), jobs);
    if (out_dir) write_text(std::filesystem::path(out_dir) / mros::harness::kCompareFile, c.csv);
    if (out) *out = {to_c(c.adaptive_mean), to_c(c.static_mean)};
    if (verdict && verdict_size) {
      const size_t n = std::min(verdict_size - 1, c.verdict.size());
      std::memcpy(verdict, c.verdict.data(), n);
      verdict[n] = '\0';
    }
  });
}

mros_status mros_read_seed_list(const char* path, uint64_t** seeds, size_t* count) {
  if (!path) return null_argument("path");
  if (!seeds) return null_argument("seeds");
  if (!count) return null_argument("count");
  *seeds = nullptr;
  *count = 0;
  return guarded([&] {
    const auto list = mros::harness::parse_seed_list(mros::harness::read_file(path));
    auto* buf = static_cast<uint64_t*>(std::malloc(std::max<size_t>(1, list.size()) * sizeof(uint64_t)));
    if (!buf) throw std::bad_alloc();
    std::copy(list.begin(), list.end(), buf);
    *seeds = buf;
    *count = list.size();
  });
}

void mros_free(void* p) { std::free(p); }

mros_status mros_write_case_study(const char* out_dir) {
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    try {
      mros::nav::write_case_study(out_dir);
    } catch (const std::filesystem::filesystem_error&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw mros::harness::IoError(e.what());
    }
  });
}

}  // extern "C"
