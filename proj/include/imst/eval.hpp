#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "imst/geometry.hpp"

namespace imst {

inline constexpr std::size_t kSuccessPoints = 101;   // overlap thresholds 0, 0.01, ..., 1
inline constexpr std::size_t kPrecisionPoints = 51;  // center-error thresholds 0..50 px
inline constexpr double kPrecisionSummaryPx = 20.0;

struct EvalCurves {
  std::vector<double> success;    // fraction of frames with IoU > threshold
  std::vector<double> precision;  // fraction of frames with center error <= threshold
  double auc_success = 0.0;       // mean of the success points
  double precision_at_20 = 0.0;
  std::size_t frames = 0;         // frames evaluated (the first frame is excluded)

  static double success_threshold(std::size_t i) { return static_cast<double>(i) / 100.0; }
  static double precision_threshold(std::size_t i) { return static_cast<double>(i); }
};

/// Success and precision curves over frames 2..N. Throws
/// std::invalid_argument on a length mismatch or fewer than two frames.
EvalCurves evaluate(const std::vector<BoundingBox>& trajectory,
                    const std::vector<BoundingBox>& ground_truth);

struct MetricDelta {
  std::string metric;
  double run_a = 0.0;
  double run_b = 0.0;
  double delta = 0.0;  // run_b - run_a
};

/// One row per summary metric (auc_success, precision_at_20).
std::vector<MetricDelta> compare(const std::vector<BoundingBox>& run_a,
                                 const std::vector<BoundingBox>& run_b,
                                 const std::vector<BoundingBox>& ground_truth);

/// `threshold,value` rows with a header.
void write_success_csv(std::ostream& out, const EvalCurves& curves);
void write_precision_csv(std::ostream& out, const EvalCurves& curves);
/// Flat `key=value` summary.
void write_summary(std::ostream& out, const EvalCurves& curves);
void write_comparison(std::ostream& out, const std::vector<MetricDelta>& rows);

}  // namespace imst
