#include "imst/eval.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace imst {

EvalCurves evaluate(const std::vector<BoundingBox>& trajectory,
                    const std::vector<BoundingBox>& ground_truth) {
  if (trajectory.size() != ground_truth.size()) {
    throw std::invalid_argument("trajectory has " + std::to_string(trajectory.size()) +
                                " boxes but ground truth has " + std::to_string(ground_truth.size()));
  }
  if (trajectory.size() < 2) {
    throw std::invalid_argument("evaluation needs at least two frames (the first is excluded)");
  }
  EvalCurves c;
  c.frames = trajectory.size() - 1;
  c.success.assign(kSuccessPoints, 0.0);
  c.precision.assign(kPrecisionPoints, 0.0);
  for (std::size_t f = 1; f < trajectory.size(); ++f) {
    const double overlap = iou(trajectory[f], ground_truth[f]);
    const double error = center_distance(trajectory[f], ground_truth[f]);
    for (std::size_t i = 0; i < kSuccessPoints; ++i) {
      if (overlap > EvalCurves::success_threshold(i)) c.success[i] += 1.0;
    }
    for (std::size_t i = 0; i < kPrecisionPoints; ++i) {
      if (error <= EvalCurves::precision_threshold(i)) c.precision[i] += 1.0;
    }
  }
  const double n = static_cast<double>(c.frames);
  for (auto& v : c.success) v /= n;
  for (auto& v : c.precision) v /= n;
  c.auc_success = std::accumulate(c.success.begin(), c.success.end(), 0.0) / kSuccessPoints;
  c.precision_at_20 = c.precision[static_cast<std::size_t>(kPrecisionSummaryPx)];
  return c;
}

std::vector<MetricDelta> compare(const std::vector<BoundingBox>& run_a,
                                 const std::vector<BoundingBox>& run_b,
                                 const std::vector<BoundingBox>& ground_truth) {
  const EvalCurves a = evaluate(run_a, ground_truth);
  const EvalCurves b = evaluate(run_b, ground_truth);
  return {{"auc_success", a.auc_success, b.auc_success, b.auc_success - a.auc_success},
          {"precision_at_20", a.precision_at_20, b.precision_at_20,
           b.precision_at_20 - a.precision_at_20}};
}

namespace {

void write_curve(std::ostream& out, const std::vector<double>& values, double step) {
  out << "threshold,value\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.2f,%.6f\n", static_cast<double>(i) * step, values[i]);
    out << buf;
  }
}

}  // namespace

void write_success_csv(std::ostream& out, const EvalCurves& curves) {
  write_curve(out, curves.success, 0.01);
}

void write_precision_csv(std::ostream& out, const EvalCurves& curves) {
  write_curve(out, curves.precision, 1.0);
}

void write_summary(std::ostream& out, const EvalCurves& curves) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "frames=%zu\nauc_success=%.6f\nprecision_at_20=%.6f\n", curves.frames,
                curves.auc_success, curves.precision_at_20);
  out << buf;
}

void write_comparison(std::ostream& out, const std::vector<MetricDelta>& rows) {
  out << "metric,run_a,run_b,delta\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n", r.metric.c_str(), r.run_a, r.run_b, r.delta);
    out << buf;
  }
}

}  // namespace imst
