#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "imst/critic.hpp"
#include "imst/features.hpp"
#include "imst/geometry.hpp"
#include "imst/hybrid_sampler.hpp"
#include "imst/imaging.hpp"
#include "imst/sampler.hpp"
#include "imst/svm.hpp"
#include "imst/uncertainty.hpp"

namespace imst {

enum class SamplingMode { kHybrid, kGaussian };

struct TrackerParams {
  std::size_t m = 5;        // queries per classifier per frame
  std::size_t delta = 10;   // long-term update period, in frames
  double epsilon = 1e-6;
  double tau_match = 0.0;   // single-classifier match threshold; fusion supersedes it
  double lost_inflation = 1.5;
  double max_inflation = 3.0;
};

struct TrackerConfig {
  FeatureConfig features{};
  SvmParams short_svm{};
  SvmParams long_svm{};
  CriticParams critic{};
  SamplerConfig sampler{};
  TrackerParams tracker{};
  SamplingMode mode = SamplingMode::kHybrid;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ClassifierWeights {
  double alpha1 = 0.5;
  double alpha2 = 0.5;
};

struct ScoredSample {
  Transformation y;
  FeatureVector features;
  double s1 = 0.0;        // short-term score
  double s2 = 0.0;        // long-term score
  int fused_label = 0;    // 0 until fusion
  SampleSource source = SampleSource::kGaussian;
};

struct QuerySets {
  std::vector<std::size_t> q12;  // classifier 1's most uncertain samples
  std::vector<std::size_t> q21;  // classifier 2's most uncertain samples
};

struct ErrorsWeights {
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  ClassifierWeights alpha{};
};

struct StateEstimate {
  BoundingBox box;
  Transformation y;
  double confidence = 0.0;
  std::size_t positives = 0;
  bool lost = false;
};

struct FrameContext {
  std::size_t frame_index = 0;
  std::vector<ScoredSample> samples;
  double tau = 0.0;
  QuerySets queries;
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  ClassifierWeights alpha{};  // weights computed this frame, used next frame
  HybridStats sampling;
  bool long_updated = false;
};

/// Raised when no sample of a frame yields a usable patch.
class TrackingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Features and both scores for every non-degenerate transformation, in
/// input order. Throws TrackingFailure if all are degenerate.
std::vector<ScoredSample> score_all(const BudgetedSvm& short_model, const BudgetedSvm& long_model,
                                    const FrameFeatures& image, const BoundingBox& p_prev,
                                    std::span<const Transformation> transformations);

/// Label fusion for one sample. A classifier is uncertain when |s| < tau.
/// Only the long-term one uncertain: sign(s1). Only the short-term one
/// uncertain: sign(s2). Otherwise sign(alpha1 s1 + alpha2 s2). Zero maps to -1.
int fuse_label(double s1, double s2, double tau, const ClassifierWeights& alpha);

/// Sets fused_label on every sample and returns the m most uncertain
/// samples of each classifier.
QuerySets fuse_labels(std::vector<ScoredSample>& samples, double tau,
                      const ClassifierWeights& alpha_prev, std::size_t m);

/// alpha_i = 1 - (e_i + eps) / (e1 + e2 + eps), clamped to [0, 1];
/// (0.5, 0.5) when both error counts are zero.
ClassifierWeights weights_from_errors(std::size_t e1, std::size_t e2, double epsilon);

/// Counts disagreements between each classifier's sign and the fused label,
/// then derives the weights.
ErrorsWeights compute_errors_weights(std::span<const ScoredSample> samples, double epsilon);

/// Score-weighted mean transformation over samples with a positive fused
/// label and positive fused score alpha1 s1 + alpha2 s2. Without any, the
/// state is unchanged and the estimate is flagged lost with confidence 0.
StateEstimate estimate_state(std::span<const ScoredSample> samples, const BoundingBox& p_prev,
                             const ClassifierWeights& alpha);

/// Fused-labeled samples of the last `max_frames` frames, whole frames at a time.
class SampleArchive {
 public:
  explicit SampleArchive(std::size_t max_frames) : max_frames_(max_frames) {}

  void push_frame(std::vector<LabeledExample> frame);
  std::size_t frame_count() const { return frames_.size(); }
  std::size_t max_frames() const { return max_frames_; }
  /// Oldest frame first.
  std::vector<LabeledExample> examples() const;

 private:
  std::size_t max_frames_;
  std::deque<std::vector<LabeledExample>> frames_;
};

struct FrameResult {
  BoundingBox box;
  double confidence = 0.0;
  bool lost = false;
  bool failed = false;  // no usable sample; state left unchanged
  FrameContext context;
};

/// Two-classifier tracker with critic-guided sampling. The short-term model
/// learns its own uncertain samples every frame with labels from the fused
/// vote; the long-term model retrains from the archive every `delta` frames.
class CoTracker {
 public:
  /// Trains both classifiers on the ground-truth patch (positive) and 16
  /// shifted negatives (8 compass directions at 1.0 and 1.5 box sizes),
  /// negatives first so the positive's margin holds afterwards.
  static CoTracker init_from_first_frame(const Frame& frame, const BoundingBox& gt,
                                         const TrackerConfig& config);

  /// Processes the next frame.
  FrameResult step(const Frame& frame);

  /// Short-term update from q12, archive push, long-term update when the
  /// frame index is a multiple of delta, and weights carried forward.
  void update_models(const FrameContext& ctx);

  const TrackerConfig& config() const { return config_; }
  const BoundingBox& box() const { return p_prev_; }
  const BudgetedSvm& short_model() const { return short_; }
  const BudgetedSvm& long_model() const { return long_; }
  const Critic& critic() const { return critic_; }
  const ClassifierWeights& alpha() const { return alpha_; }
  const SampleArchive& archive() const { return archive_; }
  std::size_t frame_index() const { return t_; }
  double inflation() const { return inflation_; }

 private:
  CoTracker(const TrackerConfig& config, const BoundingBox& box);
  BoundingBox keep_in_frame(const BoundingBox& b, int width, int height) const;

  TrackerConfig config_;
  BoundingBox p_prev_;
  BudgetedSvm short_;
  BudgetedSvm long_;
  Critic critic_;
  GaussianSampler rng_;
  ClassifierWeights alpha_{};
  SampleArchive archive_;
  std::size_t t_ = 0;
  std::size_t lost_frames_ = 0;
  double inflation_ = 1.0;
};

// ---------------------------------------------------------------------------
// Sequence runs and trajectory files

struct TrajectoryRow {
  std::size_t frame_index = 0;
  BoundingBox box;
  double confidence = 0.0;
};

struct FrameDiagnostics {
  double tau = 0.0;
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double critic_accept_rate = 0.0;
};

struct TrackingRun {
  std::vector<TrajectoryRow> trajectory;
  std::vector<FrameDiagnostics> diagnostics;  // one per processed frame after the first
  std::vector<double> frame_seconds;          // wall time per frame, first frame = init
  std::size_t failures = 0;
};

/// Runs the tracker over `frame_count` frames supplied by `frame_at`,
/// initializing on frame 0 with `initial`. Row 0 is the initial box with
/// confidence 1.
TrackingRun run_tracker(const std::function<Frame(std::size_t)>& frame_at, std::size_t frame_count,
                        const BoundingBox& initial, const TrackerConfig& config,
                        const std::function<void(const FrameResult&, const CoTracker&)>& observer = {});

/// `frame_index,x,y,w,h,confidence` rows.
void write_trajectory(std::ostream& out, const std::vector<TrajectoryRow>& rows);
/// Accepts trajectory rows or plain `x,y,w,h` box lines.
std::vector<BoundingBox> read_trajectory_boxes(const std::filesystem::path& path);
/// `tau_t,e1,e2,alpha1,alpha2,critic_accept_rate` rows with a header line.
void write_diagnostics(std::ostream& out, const std::vector<FrameDiagnostics>& rows);

}  // namespace imst
