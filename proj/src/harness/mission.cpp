#include "harness/mission.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "diagnostics/observer.hpp"
#include "navsim/case_study.hpp"
#include "util/csv.hpp"

namespace mros::harness {

namespace {

constexpr std::string_view kStaticPrefix = "static:";

// Tracks the latest measurement of one QA type and counts violations of
// the objective's requirement on it.
struct QaTrack {
  std::string type_id;
  std::optional<kb::Requirement> requirement;
  kb::Polarity polarity = kb::Polarity::HigherIsBetter;
  std::optional<kb::Measurement> latest;
  long fresh_steps = 0;
  long violations = 0;

  std::optional<double> fresh_value(double now, double staleness) const {
    if (!latest || now - latest->t > staleness) return std::nullopt;
    return latest->value;
  }
  void count(double now, double staleness) {
    auto v = fresh_value(now, staleness);
    if (!v || !requirement) return;
    ++fresh_steps;
    if (!kb::satisfies(polarity, *v, requirement->threshold)) ++violations;
  }
  double fraction() const { return fresh_steps ? static_cast<double>(violations) / fresh_steps : 0.0; }
};

QaTrack make_track(const kb::KnowledgeBase& kb, const kb::Objective& obj, std::string_view type) {
  QaTrack t;
  t.type_id = std::string(type);
  if (const auto* qa = kb.find_qa_type(type)) t.polarity = qa->polarity;
  for (const auto& r : obj.nfrs)
    if (r.type_id == type) t.requirement = r;
  return t;
}

std::string real_or_empty(std::optional<double> v) { return v ? diag::render_real(*v) : std::string(); }

}  // namespace

Mode Mode::parse(std::string_view text) {
  if (text == "adaptive") return {};
  if (text.starts_with(kStaticPrefix) && text.size() > kStaticPrefix.size())
    return make_static(std::string(text.substr(kStaticPrefix.size())));
  throw UnknownMode("unknown mode '" + std::string(text) + "' (expected adaptive or static:<fd>)");
}

std::string Mode::label() const { return adaptive ? "adaptive" : std::string(kStaticPrefix) + static_fd; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedModel load_model(std::string_view model_text, std::string_view config_text) {
  LoadedModel m;
  m.document = dsl::parse_model(model_text);
  m.config = dsl::parse_metacontrol_config(config_text);
  const auto kb = dsl::build_knowledge_base(m.document);
  const std::array<std::string_view, 3> params = {nav::kParamMaxVel, nav::kParamAccLim, nav::kParamSafetyMargin};
  const std::array<std::string_view, 1> components = {nav::kMoveBase};
  dsl::validate_config(m.config, kb, params, components);
  return m;
}

LoadedModel load_model_files(const std::filesystem::path& model, const std::filesystem::path& config) {
  return load_model(read_file(model), read_file(config));
}

MissionResult run_mission(const LoadedModel& model, const Mode& mode, const Scenario& sc) {
  kb::KnowledgeBase kb = dsl::build_knowledge_base(model.document);
  if (kb.objectives().empty()) throw std::invalid_argument("model declares no objective");
  const kb::Objective objective = kb.objectives().front();

  auto require_design = [&](const std::string& fd) {
    if (!kb.find_design(fd)) throw UnknownStaticFd("unknown function design '" + fd + "'");
  };
  if (!mode.adaptive) require_design(mode.static_fd);
  if (mode.adaptive && sc.initial_fd) require_design(*sc.initial_fd);

  MissionResult result;
  result.metrics.seed = sc.spec.seed;
  result.metrics.mode = mode.label();

  diag::Bus bus;
  nav::Simulator sim(sc.spec, bus);
  if (sc.fault) sim.inject_fault(sc.fault->component, sc.fault->at);
  exec::Executor executor(model.config);
  auto energy_obs = diag::make_energy_observer();
  auto safety_obs = diag::make_safety_observer();
  diag::Inbox inbox(bus, diag::kDiagnosticsTopic);
  diag::DiagnosticsRecorder recorder(bus);

  const double staleness = sc.reasoner.staleness_s;
  QaTrack safety = make_track(kb, objective, nav::kSafetyQa);
  QaTrack energy = make_track(kb, objective, nav::kEnergyQa);

  std::string trace = "t,x,y,v,min_obstacle_dist,power_load,battery,active_fd,safety_qa,energy_qa\n";
  auto record_row = [&] {
    const auto& w = sim.world();
    const double now = w.t;
    util::CsvRow row;
    row << diag::render_real(now) << diag::render_real(w.position.x) << diag::render_real(w.position.y)
        << diag::render_real(w.velocity) << diag::render_real(w.min_obstacle_distance)
        << diag::render_real(w.power_load) << diag::render_real(w.battery) << executor.current_fd().value_or("")
        << real_or_empty(safety.fresh_value(now, staleness)) << real_or_empty(energy.fresh_value(now, staleness));
    trace += row.str();
  };

  auto note = [&](const std::optional<diag::DiagnosticStatus>& st, double now) {
    if (!st) return;
    for (auto* track : {&safety, &energy})
      if (const auto* text = st->find(track->type_id))
        if (auto v = diag::parse_real(*text)) track->latest = kb::Measurement{*v, now};
  };

  sim.set_step_hook([&] {
    const double now = sim.time();
    note(energy_obs.tick(bus, now), now);
    note(safety_obs.tick(bus, now), now);
    safety.count(now, staleness);
    energy.count(now, staleness);
    record_row();
  });

  if (!mode.adaptive) executor.apply_initial(objective.id, mode.static_fd, kb, sim);
  else if (sc.initial_fd) executor.apply_initial(objective.id, *sc.initial_fd, kb, sim);
  record_row();

  bool no_feasible_before = false;
  auto mape = [&] {
    auto batch = inbox.drain();
    if (!mode.adaptive) return;
    const double now = sim.time();
    auto out = reasoner::mape_step(kb, batch, now, sc.reasoner);
    const bool no_feasible = out.no_feasible_objective.has_value();
    if (no_feasible && !no_feasible_before) ++result.metrics.no_feasible_events;
    no_feasible_before = no_feasible;
    if (!out.request) return;

    result.decisions_log += reasoner::format_decision(*out.request, now) + "\n";
    result.decisions.push_back(*out.request);
    auto report = executor.execute(*out.request, kb, sim);
    inbox.drain();  // samples taken while reconfiguring describe the old design
    result.reconfigurations_log += exec::format_reconfiguration(report) + "\n";
    if (report.outcome == exec::Outcome::Applied && out.request->reason != reasoner::Reason::InitialGrounding)
      ++result.metrics.adaptations;
    result.reconfigurations.push_back(std::move(report));
  };

  mape();
  while (sim.status() == nav::MissionStatus::Running) {
    sim.step();
    if (sim.status() != nav::MissionStatus::Running) break;
    mape();
  }

  auto& m = result.metrics;
  m.status = sim.status();
  m.success = m.status == nav::MissionStatus::Success;
  m.mission_time_s = sim.time();
  m.safety_violation_frac = safety.fraction();
  m.energy_violation_frac = energy.fraction();
  result.trace_csv = std::move(trace);
  result.diagnostics_csv = recorder.to_csv();
  return result;
}

void write_mission_outputs(const MissionResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](std::string_view name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + (dir / name).string());
  };
  write(kTraceFile, r.trace_csv);
  write(kDiagnosticsFile, r.diagnostics_csv);
  write(kDecisionsFile, r.decisions_log);
  write(kReconfigurationsFile, r.reconfigurations_log);
  write(kMetricsFile, metrics_header() + metrics_row(r.metrics));
}

std::string metrics_header() {
  return "seed,mode,safety_violation_frac,energy_violation_frac,success,status,adaptations,no_feasible_events,"
         "mission_time_s\n";
}

std::string metrics_row(const MissionMetrics& m) {
  util::CsvRow row;
  row << std::to_string(m.seed) << m.mode << diag::render_real(m.safety_violation_frac)
      << diag::render_real(m.energy_violation_frac) << (m.success ? "1" : "0") << nav::to_string(m.status)
      << std::to_string(m.adaptations) << std::to_string(m.no_feasible_events) << diag::render_real(m.mission_time_s);
  return row.str();
}

namespace {

ModeSummary summarize(const std::vector<MissionMetrics>& runs, std::string mode) {
  ModeSummary s;
  s.mode = std::move(mode);
  for (const auto& m : runs) {
    s.safety_violation_frac += m.safety_violation_frac;
    s.energy_violation_frac += m.energy_violation_frac;
    s.success_rate += m.success ? 1.0 : 0.0;
    s.adaptations += m.adaptations;
    s.no_feasible_events += m.no_feasible_events;
  }
  const double n = static_cast<double>(runs.size());
  s.safety_violation_frac /= n;
  s.energy_violation_frac /= n;
  s.success_rate /= n;
  s.adaptations /= n;
  s.no_feasible_events /= n;
  return s;
}

std::string summary_row(const ModeSummary& s) {
  util::CsvRow row;
  row << "mean" << s.mode << diag::render_real(s.safety_violation_frac) << diag::render_real(s.energy_violation_frac)
      << diag::render_real(s.success_rate) << "" << diag::render_real(s.adaptations)
      << diag::render_real(s.no_feasible_events) << "";
  return row.str();
}

std::string verdict_line(std::string_view metric, double adaptive, double fixed, bool lower_is_better) {
  std::string judgement = "equal";
  if (adaptive != fixed) judgement = (adaptive < fixed) == lower_is_better ? "adaptive better" : "adaptive worse";
  return std::string(metric) + ": adaptive=" + diag::render_real(adaptive) + " static=" + diag::render_real(fixed) +
         " -> " + judgement + "\n";
}

}  // namespace

Comparison compare(const LoadedModel& model, std::span<const std::uint64_t> seeds, const std::string& static_fd,
                   const Scenario& scenario, unsigned jobs) {
  if (seeds.size() < 2) throw std::invalid_argument("compare needs at least two seeds");
  const Mode adaptive_mode;
  const Mode static_mode = Mode::make_static(static_fd);

  Scenario adaptive_scenario = scenario;
  if (!adaptive_scenario.initial_fd) adaptive_scenario.initial_fd = static_fd;

  const std::size_t n = seeds.size();
  std::vector<MissionMetrics> slots(2 * n);
  std::vector<std::exception_ptr> errors(2 * n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < 2 * n; i = next++) {
      try {
        const bool adaptive = i % 2 == 0;
        Scenario sc = adaptive ? adaptive_scenario : scenario;
        sc.spec.seed = seeds[i / 2];
        slots[i] = run_mission(model, adaptive ? adaptive_mode : static_mode, sc).metrics;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, 2 * n));
  std::vector<std::jthread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Comparison c;
  for (std::size_t i = 0; i < n; ++i) {
    c.adaptive.push_back(slots[2 * i]);
    c.fixed.push_back(slots[2 * i + 1]);
  }
  c.adaptive_mean = summarize(c.adaptive, adaptive_mode.label());
  c.static_mean = summarize(c.fixed, static_mode.label());

  c.csv = metrics_header();
  for (std::size_t i = 0; i < n; ++i) c.csv += metrics_row(c.adaptive[i]) + metrics_row(c.fixed[i]);
  c.csv += summary_row(c.adaptive_mean) + summary_row(c.static_mean);

  c.verdict = verdict_line("safety_violation_frac", c.adaptive_mean.safety_violation_frac,
                           c.static_mean.safety_violation_frac, true) +
              verdict_line("energy_violation_frac", c.adaptive_mean.energy_violation_frac,
                           c.static_mean.energy_violation_frac, true) +
              verdict_line("success_rate", c.adaptive_mean.success_rate, c.static_mean.success_rate, false);
  return c;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw dsl::ParseError({line_no, static_cast<int>(first) + 1}, "invalid seed '" + std::string(line) + "'",
                            "unsigned integer");
    seeds.push_back(v);
  }
  return seeds;
}

}  // namespace mros::harness
