#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dsl/config.hpp"
#include "dsl/model.hpp"
#include "navsim/simulator.hpp"

namespace mros::nav {

inline constexpr std::string_view kSafetyQa = "safety";
inline constexpr std::string_view kEnergyQa = "energy";
inline constexpr std::string_view kNavigateFunction = "f_navigate";
inline constexpr std::string_view kNavigateObjective = "o_navigate";
inline constexpr double kSafetyThreshold = 0.4;
inline constexpr double kEnergyThreshold = 0.35;

/// The fully specified reference design (max_vel 0.3, acc_lim 3.6), whose
/// expected values are pinned rather than computed.
inline constexpr std::string_view kReferenceDesign = "f1_v1_a3_m2";
inline constexpr double kReferenceSafety = 0.7;
inline constexpr double kReferenceEnergy = 0.33;

inline constexpr double kGridMaxVel[3] = {0.3, 0.6, 1.0};
inline constexpr double kGridAccLim[3] = {1.2, 2.4, 3.6};
inline constexpr double kGridSafetyMargin[3] = {0.6, 0.9, 1.2};

inline constexpr std::string_view kCaseStudyModelFile = "case_study.model";
inline constexpr std::string_view kCaseStudyConfigFile = "case_study.config";

/// `f1_v<i>_a<j>_m<k>`, indices 1-based into the grid axes.
std::string design_id(int vel_index, int acc_index, int margin_index);

/// Safety at the standoff left after braking from max_vel at acc_lim once
/// the margin is reached.
double expected_safety(const NavParams& params, double dt = 0.1);
/// Energy at the highest load seen while ramping from rest to max_vel at
/// acc_lim, or while cruising, whichever is larger.
double expected_energy(const NavParams& params, double dt = 0.1);

/// Two QA types, one function, the 27 grid designs and one objective.
dsl::ModelDocument case_study_designs();
/// One configuration per design, move_base killed and restarted.
dsl::MetacontrolConfig case_study_config();
/// Serialized model with a header comment.
std::string case_study_model_text();

/// Writes the model and configuration files into `dir`, creating it.
void write_case_study(const std::filesystem::path& dir);

}  // namespace mros::nav
