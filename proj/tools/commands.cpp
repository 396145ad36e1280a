#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "imst/config.hpp"
#include "imst/cotracker.hpp"
#include "imst/eval.hpp"
#include "imst/imaging.hpp"
#include "imst/synth.hpp"
#include "imst/version.hpp"

namespace imst::cli {

namespace fs = std::filesystem;

namespace {

/// Files written through here are renamed into place on commit and deleted
/// if the command fails first.
class OutputSet {
 public:
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) {
      fs::remove(tmp, ec);
      fs::remove(final_path, ec);
    }
  }

  void write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    files_.emplace_back(tmp, path);
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) fs::rename(tmp, final_path);
    committed_ = true;
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> files_;
  bool committed_ = false;
};

struct TrackOptions {
  std::string seq;
  std::string gt;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string diagnostics;
  std::string sampler;
};

int cmd_track(const TrackOptions& o, std::ostream& out) {
  ConfigMap map;
  if (!o.config.empty()) map = load_config(o.config);
  if (o.seed) map["seed"] = std::to_string(*o.seed);
  if (!o.sampler.empty()) map["sampler.mode"] = o.sampler;
  const TrackerConfig config = tracker_config_from(map);

  const SequenceHandle seq = load_sequence(o.seq);
  const fs::path gt_path = o.gt.empty() ? fs::path(o.seq) / kGroundTruthFile : fs::path(o.gt);
  const auto gt = read_boxes(gt_path);
  if (gt.empty()) throw std::runtime_error("ground truth " + gt_path.string() + " has no boxes");

  const TrackingRun run = run_tracker([&](std::size_t i) { return read_pgm(seq.frames[i]); }, seq.size(),
                                      gt.front(), config);

  OutputSet outputs;
  std::ostringstream traj;
  write_trajectory(traj, run.trajectory);
  outputs.write(o.out, traj.str());

  if (!o.diagnostics.empty()) {
    std::ostringstream diag;
    write_diagnostics(diag, run.diagnostics);
    outputs.write(o.diagnostics, diag.str());
  }

  const double total = std::accumulate(run.frame_seconds.begin(), run.frame_seconds.end(), 0.0);
  const double tracked = total - (run.frame_seconds.empty() ? 0.0 : run.frame_seconds.front());
  const double fps = tracked > 0.0 ? static_cast<double>(run.frame_seconds.size() - 1) / tracked : 0.0;
  nlohmann::json manifest;
  manifest["tool"] = "imst";
  manifest["version"] = kVersion;
  manifest["sequence"] = fs::absolute(o.seq).lexically_normal().string();
  manifest["ground_truth"] = fs::absolute(gt_path).lexically_normal().string();
  manifest["trajectory"] = fs::path(o.out).filename().string();
  manifest["seed"] = config.seed;
  manifest["frames"] = run.trajectory.size();
  manifest["failures"] = run.failures;
  manifest["frame_seconds"] = run.frame_seconds;
  manifest["mean_fps"] = fps;
  manifest["config"] = to_config_map(config);
  fs::path manifest_path = o.out;
  manifest_path += ".manifest.json";
  outputs.write(manifest_path, manifest.dump(2) + "\n");
  outputs.commit();

  out << "tracked " << run.trajectory.size() << " frames at " << fps << " fps -> " << o.out << '\n';
  return 0;
}

struct SynthOptions {
  std::string scenario = "linear";
  std::size_t frames = 100;
  std::string size = "320x240";
  std::string target = "36x36";
  std::uint64_t seed = 1;
  double noise = 0.02;
  std::string out;
};

std::pair<double, double> parse_size(const std::string& text, const char* flag) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument(std::string(flag) + " expects WxH");
  try {
    return {std::stod(text.substr(0, x)), std::stod(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(flag) + " expects WxH, got '" + text + "'");
  }
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  Scenario s;
  s.kind = parse_scenario_kind(o.scenario);
  s.frame_count = o.frames;
  const auto [fw, fh] = parse_size(o.size, "--size");
  s.width = static_cast<int>(fw);
  s.height = static_cast<int>(fh);
  const auto [tw, th] = parse_size(o.target, "--target");
  s.target_w = tw;
  s.target_h = th;
  s.seed = o.seed;
  s.noise = o.noise;
  generate(s, o.out);
  out << "wrote " << s.frame_count << " frames of '" << o.scenario << "' to " << o.out << '\n';
  return 0;
}

int cmd_eval(const std::string& traj, const std::string& gt, const std::string& out_dir,
             std::ostream& out) {
  const EvalCurves curves = evaluate(read_trajectory_boxes(traj), read_boxes(gt));
  if (!out_dir.empty()) {
    OutputSet outputs;
    std::ostringstream success, precision, summary;
    write_success_csv(success, curves);
    write_precision_csv(precision, curves);
    write_summary(summary, curves);
    outputs.write(fs::path(out_dir) / "success.csv", success.str());
    outputs.write(fs::path(out_dir) / "precision.csv", precision.str());
    outputs.write(fs::path(out_dir) / "summary.txt", summary.str());
    outputs.commit();
  }
  write_summary(out, curves);
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& gt, std::ostream& out) {
  write_comparison(out, compare(read_trajectory_boxes(a), read_trajectory_boxes(b), read_boxes(gt)));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"imst: critic-guided co-tracking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  TrackOptions track;
  auto* t = app.add_subcommand("track", "Track a target through a PGM sequence");
  t->add_option("--seq", track.seq, "Directory of .pgm frames")->required();
  t->add_option("--gt", track.gt, "Ground-truth boxes; only the first is used (default: <seq>/groundtruth_rect.txt)");
  t->add_option("--config", track.config, "key=value config file or a run manifest");
  t->add_option("--seed", track.seed, "RNG seed (overrides the config)");
  t->add_option("--out", track.out, "Trajectory CSV to write")->required();
  t->add_option("--diagnostics", track.diagnostics, "Per-frame diagnostics CSV");
  t->add_option("--sampler", track.sampler, "hybrid (default) or gaussian baseline")
      ->check(CLI::IsMember({"hybrid", "gaussian"}));

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic sequence with ground truth");
  s->add_option("--scenario", synth.scenario,
                "linear|fast_motion|occlusion|illumination|blur|scale_change|clutter");
  s->add_option("--frames", synth.frames, "Frame count");
  s->add_option("--size", synth.size, "Frame size WxH");
  s->add_option("--target", synth.target, "Target size WxH");
  s->add_option("--seed", synth.seed, "Scenario seed");
  s->add_option("--noise", synth.noise, "Pixel noise sigma");
  s->add_option("--out", synth.out, "Output directory")->required();

  std::string eval_traj, eval_gt, eval_out;
  auto* e = app.add_subcommand("eval", "Success/precision curves of a trajectory");
  e->add_option("--traj", eval_traj, "Trajectory CSV or box file")->required();
  e->add_option("--gt", eval_gt, "Ground-truth boxes")->required();
  e->add_option("--out", eval_out, "Directory for success.csv, precision.csv, summary.txt");

  std::string cmp_a, cmp_b, cmp_gt;
  auto* c = app.add_subcommand("compare", "Summary metrics of two runs and their deltas");
  c->add_option("--traj-a", cmp_a, "First trajectory")->required();
  c->add_option("--traj-b", cmp_b, "Second trajectory")->required();
  c->add_option("--gt", cmp_gt, "Ground-truth boxes")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  try {
    if (t->parsed()) return cmd_track(track, out);
    if (s->parsed()) return cmd_synth(synth, out);
    if (e->parsed()) return cmd_eval(eval_traj, eval_gt, eval_out, out);
    if (c->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_gt, out);
  } catch (const std::exception& ex) {
    err << "imst: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace imst::cli
