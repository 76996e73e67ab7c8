#include "navsim/case_study.hpp"

#include <algorithm>
#include <fstream>

#include "diagnostics/observer.hpp"

namespace mros::nav {

std::string design_id(int vel_index, int acc_index, int margin_index) {
  return "f1_v" + std::to_string(vel_index) + "_a" + std::to_string(acc_index) + "_m" +
         std::to_string(margin_index);
}

double expected_safety(const NavParams& p, double) {
  const double overshoot = p.max_vel * p.max_vel / (2.0 * p.acc_lim);
  return diag::safety_attr(std::max(0.0, p.safety_margin - overshoot));
}

double expected_energy(const NavParams& p, double dt) {
  double peak = power_load(p.max_vel, 0.0);
  double v = 0.0;
  while (v < p.max_vel) {
    const double next = std::min(p.max_vel, v + p.acc_lim * dt);
    peak = std::max(peak, power_load(next, (next - v) / dt));
    v = next;
  }
  return diag::energy_attr(peak);
}

dsl::ModelDocument case_study_designs() {
  dsl::ModelDocument doc;
  auto add = [&](dsl::DeclBody body) { doc.declarations.push_back({std::move(body), {}}); };
  add(dsl::QATypeDecl{std::string(kSafetyQa), kb::Polarity::HigherIsBetter});
  add(dsl::QATypeDecl{std::string(kEnergyQa), kb::Polarity::LowerIsBetter});
  add(dsl::FunctionDecl{std::string(kNavigateFunction)});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const NavParams p{kGridMaxVel[i], kGridAccLim[j], kGridSafetyMargin[k]};
        dsl::DesignDecl d;
        d.id = design_id(i + 1, j + 1, k + 1);
        d.solves = std::string(kNavigateFunction);
        const bool pinned = d.id == kReferenceDesign;
        d.qas = {{std::string(kSafetyQa), pinned ? kReferenceSafety : expected_safety(p)},
                 {std::string(kEnergyQa), pinned ? kReferenceEnergy : expected_energy(p)}};
        d.config = d.id;
        add(std::move(d));
      }
  add(dsl::ObjectiveDecl{std::string(kNavigateObjective),
                         std::string(kNavigateFunction),
                         {{std::string(kSafetyQa), dsl::Comparator::AtLeast, kSafetyThreshold},
                          {std::string(kEnergyQa), dsl::Comparator::AtMost, kEnergyThreshold}}});
  return doc;
}

dsl::MetacontrolConfig case_study_config() {
  dsl::MetacontrolConfig cfg;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        dsl::ConfigurationSpec spec;
        spec.fd_id = design_id(i + 1, j + 1, k + 1);
        spec.params = {{std::string(kParamMaxVel), kGridMaxVel[i]},
                       {std::string(kParamAccLim), kGridAccLim[j]},
                       {std::string(kParamSafetyMargin), kGridSafetyMargin[k]}};
        spec.restart_components = {std::string(kMoveBase)};
        cfg.configurations.push_back(std::move(spec));
      }
  cfg.kill_components = {std::string(kMoveBase)};
  cfg.save_goal = true;
  cfg.reconfig_latency_s = 1.0;
  return cfg;
}

std::string case_study_model_text() {
  std::string header =
      "# Navigation case study: 27 function designs over max_vel x acc_lim x safety_margin.\n"
      "# Expected QA values are synthetic, computed from the simulator's load and\n"
      "# clearance models. " +
      std::string(kReferenceDesign) + " carries hand-set values.\n\n";
  return header + dsl::serialize_model(case_study_designs());
}

void write_case_study(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](std::string_view name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  };
  write(kCaseStudyModelFile, case_study_model_text());
  write(kCaseStudyConfigFile,
        "# Metacontrol configuration for the navigation case study.\n\n" +
            dsl::serialize_metacontrol_config(case_study_config()));
}

}  // namespace mros::nav
