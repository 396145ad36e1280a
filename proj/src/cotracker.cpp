#include "imst/cotracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace imst {

void TrackerConfig::validate() const {
  features.validate();
  short_svm.validate();
  long_svm.validate();
  critic.validate();
  sampler.validate();
  if (tracker.m == 0) throw std::invalid_argument("tracker.m must be at least 1");
  if (tracker.m >= sampler.n) throw std::invalid_argument("tracker.m must be below sampler.n");
  if (tracker.delta == 0) throw std::invalid_argument("tracker.delta must be at least 1");
  if (!(tracker.epsilon > 0.0)) throw std::invalid_argument("tracker.epsilon must be positive");
  if (tracker.lost_inflation < 1.0 || tracker.max_inflation < 1.0) {
    throw std::invalid_argument("lost-target inflation factors must be >= 1");
  }
}

std::vector<ScoredSample> score_all(const BudgetedSvm& short_model, const BudgetedSvm& long_model,
                                    const FrameFeatures& image, const BoundingBox& p_prev,
                                    std::span<const Transformation> transformations) {
  std::vector<ScoredSample> out;
  out.reserve(transformations.size());
  for (const auto& y : transformations) {
    try {
      ScoredSample s;
      s.y = y;
      s.features = extract(image, compose(p_prev, y));
      s.s1 = short_model.score(s.features);
      s.s2 = long_model.score(s.features);
      out.push_back(std::move(s));
    } catch (const DegenerateSample&) {
    }
  }
  if (out.empty()) throw TrackingFailure("every sample of the frame is degenerate");
  return out;
}

int fuse_label(double s1, double s2, double tau, const ClassifierWeights& alpha) {
  const bool uncertain1 = std::abs(s1) < tau;
  const bool uncertain2 = std::abs(s2) < tau;
  if (uncertain2 && !uncertain1) return sign_label(s1);
  if (uncertain1 && !uncertain2) return sign_label(s2);
  return sign_label(alpha.alpha1 * s1 + alpha.alpha2 * s2);
}

QuerySets fuse_labels(std::vector<ScoredSample>& samples, double tau,
                      const ClassifierWeights& alpha_prev, std::size_t m) {
  std::vector<double> s1(samples.size());
  std::vector<double> s2(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    auto& s = samples[j];
    s.fused_label = fuse_label(s.s1, s.s2, tau, alpha_prev);
    s1[j] = s.s1;
    s2[j] = s.s2;
  }
  return {most_uncertain(s1, m), most_uncertain(s2, m)};
}

ClassifierWeights weights_from_errors(std::size_t e1, std::size_t e2, double epsilon) {
  if (e1 == 0 && e2 == 0) return {0.5, 0.5};
  const double total = static_cast<double>(e1 + e2) + epsilon;
  const double a1 = 1.0 - (static_cast<double>(e1) + epsilon) / total;
  const double a2 = 1.0 - (static_cast<double>(e2) + epsilon) / total;
  return {std::clamp(a1, 0.0, 1.0), std::clamp(a2, 0.0, 1.0)};
}

ErrorsWeights compute_errors_weights(std::span<const ScoredSample> samples, double epsilon) {
  ErrorsWeights out;
  for (const auto& s : samples) {
    if (s.fused_label != sign_label(s.s1)) ++out.e1;
    if (s.fused_label != sign_label(s.s2)) ++out.e2;
  }
  out.alpha = weights_from_errors(out.e1, out.e2, epsilon);
  return out;
}

StateEstimate estimate_state(std::span<const ScoredSample> samples, const BoundingBox& p_prev,
                             const ClassifierWeights& alpha) {
  StateEstimate est;
  est.box = p_prev;
  double total = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double ds = 0.0;
  for (const auto& s : samples) {
    if (s.fused_label <= 0) continue;
    const double fused = alpha.alpha1 * s.s1 + alpha.alpha2 * s.s2;
    if (!(fused > 0.0)) continue;
    ++est.positives;
    total += fused;
    dx += fused * s.y.dx;
    dy += fused * s.y.dy;
    ds += fused * s.y.ds;
    est.confidence = std::max(est.confidence, fused);
  }
  if (est.positives == 0) {
    est.lost = true;
    est.confidence = 0.0;
    return est;
  }
  est.y = Transformation{dx / total, dy / total, ds / total}.clamped();
  est.box = compose(p_prev, est.y);
  return est;
}

void SampleArchive::push_frame(std::vector<LabeledExample> frame) {
  frames_.push_back(std::move(frame));
  while (frames_.size() > max_frames_) frames_.pop_front();
}

std::vector<LabeledExample> SampleArchive::examples() const {
  std::vector<LabeledExample> out;
  for (const auto& f : frames_) out.insert(out.end(), f.begin(), f.end());
  return out;
}

CoTracker::CoTracker(const TrackerConfig& config, const BoundingBox& box)
    : config_(config),
      p_prev_(box),
      short_(config.short_svm),
      long_(config.long_svm),
      critic_(config.critic, derive_seed(config.seed, kCriticStream)),
      rng_(derive_seed(config.seed, kSamplerStream)),
      archive_(config.tracker.delta) {}

CoTracker CoTracker::init_from_first_frame(const Frame& frame, const BoundingBox& gt,
                                           const TrackerConfig& config) {
  config.validate();
  if (!gt.valid()) throw std::invalid_argument("initial box must have positive size");
  const FrameFeatures image(frame, config.features);

  std::vector<LabeledExample> seed_examples;
  FeatureVector positive;
  try {
    positive = extract(image, gt);
  } catch (const DegenerateSample&) {
    throw std::invalid_argument("initial box lies outside the frame");
  }
  static constexpr int kCompass[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                         {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  for (double ring : {1.0, 1.5}) {
    for (const auto& dir : kCompass) {
      const Transformation y{ring * gt.w * dir[0], ring * gt.h * dir[1], 0.0};
      try {
        seed_examples.push_back({extract(image, compose(gt, y)), -1});
      } catch (const DegenerateSample&) {
      }
    }
  }
  seed_examples.push_back({std::move(positive), 1});

  CoTracker tracker(config, gt);
  tracker.short_.update(seed_examples);
  tracker.long_.update(seed_examples);
  tracker.archive_.push_frame(std::move(seed_examples));
  return tracker;
}

void CoTracker::update_models(const FrameContext& ctx) {
  std::vector<LabeledExample> queries;
  queries.reserve(ctx.queries.q12.size());
  for (std::size_t j : ctx.queries.q12) {
    queries.push_back({ctx.samples[j].features, ctx.samples[j].fused_label});
  }
  short_.update(queries);

  std::vector<LabeledExample> frame;
  frame.reserve(ctx.samples.size());
  for (const auto& s : ctx.samples) frame.push_back({s.features, s.fused_label});
  archive_.push_frame(std::move(frame));

  if (ctx.frame_index % config_.tracker.delta == 0) {
    long_.update(archive_.examples());
  }
  alpha_ = ctx.alpha;
}

BoundingBox CoTracker::keep_in_frame(const BoundingBox& b, int width, int height) const {
  // Size stays between 4 px and the frame; the center stays on the frame.
  const double w = std::clamp(b.w, 4.0, static_cast<double>(width));
  const double h = std::clamp(b.h, 4.0, static_cast<double>(height));
  const double cx = std::clamp(b.center_x(), 0.0, static_cast<double>(width));
  const double cy = std::clamp(b.center_y(), 0.0, static_cast<double>(height));
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

FrameResult CoTracker::step(const Frame& frame) {
  ++t_;
  FrameResult result;
  result.box = p_prev_;
  FrameContext& ctx = result.context;
  ctx.frame_index = t_;

  const FrameFeatures image(frame, config_.features);
  std::vector<DrawnSample> drawn;
  if (config_.mode == SamplingMode::kHybrid) {
    HybridOptions options;
    options.queries = config_.tracker.m;
    options.inflation = inflation_;
    auto batch = hybrid_batch(config_.sampler, rng_, critic_, image, p_prev_, short_, options);
    drawn = std::move(batch.samples);
    ctx.sampling = batch.stats;
  } else {
    drawn = gaussian_samples(rng_, config_.sampler.sigma_for(p_prev_, inflation_), config_.sampler.n,
                             image, p_prev_, short_);
  }

  for (auto& d : drawn) {
    if (d.degenerate) continue;
    ScoredSample s;
    s.y = d.y;
    s.s1 = d.short_score;
    s.s2 = long_.score(d.patch);
    s.features = std::move(d.patch);
    s.source = d.source;
    ctx.samples.push_back(std::move(s));
  }
  if (ctx.samples.empty()) {
    result.failed = true;
    result.lost = true;
    return result;
  }

  std::vector<double> s1(ctx.samples.size());
  for (std::size_t j = 0; j < s1.size(); ++j) s1[j] = ctx.samples[j].s1;
  ctx.tau = uncertainty_threshold(s1, config_.tracker.m);
  ctx.queries = fuse_labels(ctx.samples, ctx.tau, alpha_, config_.tracker.m);
  const ErrorsWeights ew = compute_errors_weights(ctx.samples, config_.tracker.epsilon);
  ctx.e1 = ew.e1;
  ctx.e2 = ew.e2;
  ctx.alpha = ew.alpha;
  ctx.long_updated = t_ % config_.tracker.delta == 0;

  update_models(ctx);

  const StateEstimate est = estimate_state(ctx.samples, p_prev_, ctx.alpha);
  if (est.lost) {
    ++lost_frames_;
    inflation_ = std::min(config_.tracker.max_inflation,
                          std::pow(config_.tracker.lost_inflation, static_cast<double>(lost_frames_)));
  } else {
    lost_frames_ = 0;
    inflation_ = 1.0;
    p_prev_ = keep_in_frame(est.box, frame.width(), frame.height());
  }
  result.box = p_prev_;
  result.confidence = est.confidence;
  result.lost = est.lost;
  return result;
}

TrackingRun run_tracker(const std::function<Frame(std::size_t)>& frame_at, std::size_t frame_count,
                        const BoundingBox& initial, const TrackerConfig& config,
                        const std::function<void(const FrameResult&, const CoTracker&)>& observer) {
  using clock = std::chrono::steady_clock;
  TrackingRun run;
  if (frame_count == 0) return run;

  auto start = clock::now();
  CoTracker tracker = CoTracker::init_from_first_frame(frame_at(0), initial, config);
  run.frame_seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
  run.trajectory.push_back({0, initial, 1.0});

  for (std::size_t i = 1; i < frame_count; ++i) {
    const Frame frame = frame_at(i);
    start = clock::now();
    const FrameResult r = tracker.step(frame);
    run.frame_seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
    if (r.failed) ++run.failures;
    run.trajectory.push_back({i, r.box, r.confidence});
    run.diagnostics.push_back({r.context.tau, r.context.e1, r.context.e2, r.context.alpha.alpha1,
                               r.context.alpha.alpha2, r.context.sampling.accept_rate()});
    if (observer) observer(r, tracker);
  }
  return run;
}

void write_trajectory(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.frame_index, r.box.x, r.box.y,
                  r.box.w, r.box.h, r.confidence);
    out << buf;
  }
}

std::vector<BoundingBox> read_trajectory_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory " + path.string());
  std::vector<BoundingBox> boxes;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = std::count(line.begin(), line.end(), ',') + 1;
    if (fields == 6) {
      // drop frame_index and confidence
      const auto first = line.find(',');
      const auto last = line.rfind(',');
      boxes.push_back(parse_box_line(std::string_view(line).substr(first + 1, last - first - 1), number));
    } else {
      boxes.push_back(parse_box_line(line, number));
    }
  }
  return boxes;
}

void write_diagnostics(std::ostream& out, const std::vector<FrameDiagnostics>& rows) {
  out << "tau_t,e1,e2,alpha1,alpha2,critic_accept_rate\n";
  char buf[192];
  for (const auto& d : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%zu,%zu,%.9g,%.9g,%.6f\n", d.tau, d.e1, d.e2, d.alpha1,
                  d.alpha2, d.critic_accept_rate);
    out << buf;
  }
}

}  // namespace imst
