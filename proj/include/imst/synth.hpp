#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "imst/geometry.hpp"
#include "imst/imaging.hpp"

namespace imst {

enum class ScenarioKind {
  kLinear,        // constant velocity along a straight line
  kFastMotion,    // slow drift with windows of jumps larger than the search sigma
  kOcclusion,     // a textured bar sweeps across the target
  kIllumination,  // global brightness ramps down and back
  kBlur,          // horizontal camera blur of varying length
  kScaleChange,   // target grows to 1.6x and shrinks back
  kClutter,       // look-alike distractors wander behind the target
};

inline constexpr ScenarioKind kAllScenarioKinds[] = {
    ScenarioKind::kLinear,       ScenarioKind::kFastMotion, ScenarioKind::kOcclusion,
    ScenarioKind::kIllumination, ScenarioKind::kBlur,       ScenarioKind::kScaleChange,
    ScenarioKind::kClutter};

std::string to_string(ScenarioKind kind);
/// Accepts the names printed by to_string (e.g. "fast_motion").
ScenarioKind parse_scenario_kind(std::string_view name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::kLinear;
  std::size_t frame_count = 100;
  int width = 320;
  int height = 240;
  double target_w = 36.0;
  double target_h = 36.0;
  std::uint64_t seed = 1;
  double speed = 1.5;               // px/frame of ordinary motion
  double motion_amplitude = 0.0;    // px/frame inside fast windows; 0 picks 1.4x the default search sigma
  double occluder_fraction = 0.7;   // occluding bar width relative to target width
  double intensity_ramp = 0.5;      // deepest relative darkening
  int distractors = 3;
  double noise = 0.02;              // per-pixel Gaussian noise sigma

  /// Throws std::invalid_argument if the target cannot fit or counts are bad.
  void validate() const;
};

struct SyntheticSequence {
  std::vector<Frame> frames;
  std::vector<BoundingBox> ground_truth;
  /// Fraction of target pixels not covered by an occluder, per frame.
  std::vector<double> visible_fraction;
};

/// Deterministic in-memory rendering; all randomness comes from the seed.
/// Frames are already 8-bit quantized, so writing and reloading them is exact.
SyntheticSequence render(const Scenario& scenario);

/// Writes `NNNN.pgm` frames (zero-padded) and `groundtruth_rect.txt` into
/// `directory`, creating it if needed.
void write_sequence(const SyntheticSequence& seq, const std::filesystem::path& directory);
void generate(const Scenario& scenario, const std::filesystem::path& directory);

inline constexpr const char* kGroundTruthFile = "groundtruth_rect.txt";

}  // namespace imst
