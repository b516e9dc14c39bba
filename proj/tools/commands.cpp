// Copyright 2026 The maskfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maskfuse/io.hpp"
#include "maskfuse/parallel.hpp"
#include "maskfuse/synthgen.hpp"
#include "maskfuse/threshold.hpp"
#include "maskfuse/tta_fusion.hpp"

namespace maskfuse::cli
{

namespace
{

using json = nlohmann::ordered_json;

struct FusionFlags
{
  double match_threshold = 0.5;
  int min_versions = 1;
  std::string denominator = "matched";
  std::string overlap_rule = "score";

  FusionConfig config() const
  {
    FusionConfig cfg;
    cfg.match_threshold = match_threshold;
    cfg.min_versions = min_versions;
    if (denominator == "matched") {
      cfg.denominator = VoteDenominator::matched;
    } else if (denominator == "all") {
      cfg.denominator = VoteDenominator::all_versions;
    } else {
      throw InputError("--vote-denominator must be matched|all");
    }
    validate(cfg);
    return cfg;
  }

  OverlapRule rule() const
  {
    try {
      return parse_overlap_rule(overlap_rule);
    } catch (const InvalidArgument & e) {
      throw InputError(std::string("--overlap-rule: ") + e.what());
    }
  }
};

void add_fusion_flags(CLI::App & cmd, FusionFlags & f)
{
  cmd.add_option("--match-threshold", f.match_threshold, "IoU above which instances are matched")
    ->capture_default_str();
  cmd.add_option("--min-versions", f.min_versions, "Minimum matched versions per fused instance")
    ->capture_default_str();
  cmd.add_option("--vote-denominator", f.denominator, "Majority over matched members or all versions")
    ->check(CLI::IsMember({"matched", "all"}))
    ->capture_default_str();
  cmd.add_option("--overlap-rule", f.overlap_rule, "Flattening priority for overlapping instances")
    ->check(CLI::IsMember({"score", "votes"}))
    ->capture_default_str();
}

void ensure_directory(const fs::path & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory " + dir.string());
  }
}

void require_directory(const fs::path & dir, const std::string & what)
{
  if (!fs::is_directory(dir)) {
    throw InputError(what + " is not a directory: " + dir.string());
  }
}

/// stem -> path for every file with the given extension, sorted by stem.
std::map<std::string, fs::path> list_by_stem(
  const fs::path & dir, const std::set<std::string> & extensions, std::string_view suffix = {})
{
  std::map<std::string, fs::path> out;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !extensions.contains(entry.path().extension().string())) {
      continue;
    }
    const std::string stem = pairing_stem(entry.path(), suffix);
    if (!out.emplace(stem, entry.path()).second) {
      throw InputError("two files pair to image id '" + stem + "' in " + dir.string());
    }
  }
  return out;
}

std::string join(const std::vector<std::string> & items, std::size_t limit = 20)
{
  std::string s;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    s += (i ? ", " : "") + items[i];
  }
  if (items.size() > limit) {
    s += ", ...";
  }
  return s;
}

/// Prediction manifests arranged as <dir>/<transform>/<image_id>.json.
struct VersionedDir
{
  std::map<Transform, std::map<std::string, fs::path>> files;

  static VersionedDir scan(const fs::path & dir, bool identity_only)
  {
    require_directory(dir, "prediction directory");
    VersionedDir out;
    for (const auto t : all_transforms) {
      const fs::path sub = dir / to_string(t);
      if (fs::is_directory(sub) && (!identity_only || t == Transform::identity)) {
        out.files.emplace(t, list_by_stem(sub, {".json"}));
      }
    }
    if (!out.files.contains(Transform::identity)) {
      throw InputError("identity predictions missing: expected " + (dir / "identity").string());
    }
    return out;
  }

  const std::map<std::string, fs::path> & identity() const { return files.at(Transform::identity); }

  VersionMap load(const std::string & id) const
  {
    VersionMap versions;
    for (const auto & [t, by_stem] : files) {
      const auto it = by_stem.find(id);
      if (it == by_stem.end()) {
        throw InputError("no " + to_string(t) + " manifest for image '" + id + "'");
      }
      Manifest m = read_manifest(it->second);
      if (m.transform != t && m.transform != Transform::identity) {
        throw InputError(it->second.string() + ": transform field disagrees with its directory");
      }
      versions.emplace(t, std::move(m.predictions));
    }
    return versions;
  }
};

std::map<std::string, fs::path> gt_files(const fs::path & dir, const std::string & suffix)
{
  require_directory(dir, "ground-truth directory");
  auto files = list_by_stem(dir, {".png"}, suffix);
  if (files.empty()) {
    throw InputError("no ground-truth PNGs in " + dir.string());
  }
  return files;
}

void check_pairing(const std::vector<std::string> & pred_ids, const std::map<std::string, fs::path> & gt)
{
  std::vector<std::string> unpaired;
  std::set<std::string> pred_set(pred_ids.begin(), pred_ids.end());
  for (const auto & id : pred_ids) {
    if (!gt.contains(id)) {
      unpaired.push_back(id + " (no ground truth)");
    }
  }
  for (const auto & [id, path] : gt) {
    if (!pred_set.contains(id)) {
      unpaired.push_back(id + " (no prediction)");
    }
  }
  if (!unpaired.empty()) {
    throw InputError("unpaired image ids: " + join(unpaired));
  }
}

std::vector<SweepItem> load_sweep_corpus(
  const fs::path & pred_dir, const fs::path & gt_dir, const std::string & suffix, bool identity_only, int threads)
{
  const auto versions = VersionedDir::scan(pred_dir, identity_only);
  const auto gt = gt_files(gt_dir, suffix);
  std::vector<std::string> ids;
  for (const auto & [id, path] : versions.identity()) {
    ids.push_back(id);
  }
  if (ids.empty()) {
    throw InputError("no prediction manifests in " + (pred_dir / "identity").string());
  }
  check_pairing(ids, gt);
  std::vector<SweepItem> corpus(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    corpus[i] = {ids[i], versions.load(ids[i]), read_label_png(gt.at(ids[i]))};
  });
  return corpus;
}

// ---------------------------------------------------------------------------

struct GenOptions
{
  std::string out;
  std::size_t images = 10;
  CorpusConfig corpus;
  double noise_scale = 1.0;
  std::vector<std::string> transforms;
  int threads = 1;
};

int cmd_gen(const GenOptions & o, std::ostream & out)
{
  CorpusConfig cfg = o.corpus;
  cfg.images = o.images;
  validate(cfg.noise);
  if (!(o.noise_scale >= 0.0)) {
    throw InputError("--noise must be non-negative");
  }
  if (o.noise_scale == 0.0) {
    const auto seed = cfg.noise.seed;
    cfg.noise = NoiseConfig::none();
    cfg.noise.seed = seed;
  } else {
    cfg.noise.merge_prob = std::min(1.0, cfg.noise.merge_prob * o.noise_scale);
    cfg.noise.drop_prob = std::min(1.0, cfg.noise.drop_prob * o.noise_scale);
    cfg.noise.boundary_noise = static_cast<int>(std::lround(cfg.noise.boundary_noise * o.noise_scale));
    cfg.noise.score_model.jitter *= o.noise_scale;
  }
  if (!o.transforms.empty()) {
    cfg.transforms.clear();
    for (const auto & s : o.transforms) {
      cfg.transforms.push_back(parse_transform(s));
    }
  }

  const auto corpus = generate_corpus(cfg, o.threads);

  const fs::path root = o.out;
  ensure_directory(root / "gt");
  for (const auto t : cfg.transforms) {
    ensure_directory(root / "pred" / to_string(t));
  }
  parallel_for(corpus.size(), o.threads, [&](std::size_t i) {
    const auto & item = corpus[i];
    write_label_png(root / "gt" / (item.image_id + ".png"), item.gt);
    for (const auto & [t, ps] : item.versions) {
      write_manifest(root / "pred" / to_string(t) / (item.image_id + ".json"), {item.image_id, t, ps});
    }
  });

  json index;
  json ids = json::array();
  for (const auto & item : corpus) {
    ids.push_back(item.image_id);
  }
  json transforms = json::array();
  for (const auto t : cfg.transforms) {
    transforms.push_back(to_string(t));
  }
  const auto & r = cfg.rosette;
  const auto & n = cfg.noise;
  index["images"] = std::move(ids);
  index["transforms"] = std::move(transforms);
  index["seed"] = cfg.seed;
  index["rosette"] = {
    {"width", r.width},
    {"height", r.height},
    {"leaf_count", r.leaf_count},
    {"leaf_length", {r.leaf_length_min, r.leaf_length_max}},
    {"leaf_width", {r.leaf_width_min, r.leaf_width_max}},
    {"center_jitter", r.center_jitter},
    {"connectivity", r.connectivity}};
  index["noise"] = {
    {"merge_prob", n.merge_prob},
    {"drop_prob", n.drop_prob},
    {"boundary_noise", n.boundary_noise},
    {"merge_penalty", n.score_model.merge_penalty},
    {"boundary_penalty", n.score_model.boundary_penalty},
    {"score_jitter", n.score_model.jitter}};
  index["layout"] = {{"gt", "gt/<image_id>.png"}, {"predictions", "pred/<transform>/<image_id>.json"}};
  write_file_atomic(root / "corpus.json", index.dump(2) + "\n");

  out << "wrote " << corpus.size() << " images to " << root.string() << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct FuseOptions
{
  std::string pred_dir;
  std::vector<std::string> inputs;
  std::string out;
  double tau = 0.0;
  FusionFlags fusion;
  int threads = 1;
};

int cmd_fuse(const FuseOptions & o, std::ostream & out)
{
  const FusionConfig cfg = o.fusion.config();
  const OverlapRule rule = o.fusion.rule();
  if (!(o.tau >= 0.0 && o.tau <= 1.0)) {
    throw InputError("--tau must lie in [0,1]");
  }

  std::vector<std::pair<std::string, VersionMap>> jobs;
  if (!o.inputs.empty()) {
    if (!o.pred_dir.empty()) {
      throw InputError("use either --pred-dir or --input, not both");
    }
    VersionMap versions;
    std::string id;
    for (const auto & spec : o.inputs) {
      Manifest m;
      Transform t;
      const auto eq = spec.find('=');
      if (eq != std::string::npos) {
        try {
          t = parse_transform(spec.substr(0, eq));
        } catch (const InvalidArgument & e) {
          throw InputError(std::string("--input: ") + e.what());
        }
        m = read_manifest(spec.substr(eq + 1));
      } else {
        m = read_manifest(spec);
        t = m.transform;
      }
      if (!id.empty() && m.image_id != id) {
        throw InputError("--input manifests describe different images ('" + id + "' vs '" + m.image_id + "')");
      }
      id = m.image_id;
      if (!versions.emplace(t, std::move(m.predictions)).second) {
        throw InputError("--input: transform " + to_string(t) + " given twice");
      }
    }
    if (!versions.contains(Transform::identity)) {
      throw InputError("identity predictions missing among --input manifests");
    }
    jobs.emplace_back(id, std::move(versions));
  } else {
    if (o.pred_dir.empty()) {
      throw InputError("fuse needs --pred-dir or --input");
    }
    const auto dir = VersionedDir::scan(o.pred_dir, false);
    for (const auto & [id, path] : dir.identity()) {
      jobs.emplace_back(id, dir.load(id));
    }
    if (jobs.empty()) {
      throw InputError("no prediction manifests in " + (fs::path(o.pred_dir) / "identity").string());
    }
  }

  const fs::path root = o.out;
  ensure_directory(root);
  parallel_for(jobs.size(), o.threads, [&](std::size_t i) {
    const auto & [id, versions] = jobs[i];
    try {
      VersionMap filtered;
      for (const auto & [t, ps] : versions) {
        filtered.emplace(t, filter_by_score(ps, o.tau));
      }
      const PredictionSet fused = tta_pipeline(filtered, cfg);
      write_manifest(root / (id + ".json"), {id, Transform::identity, fused});
      write_label_png(root / (id + ".png"), instances_to_label_map(fused, rule));
    } catch (const InvalidArgument & e) {
      throw InputError(id + ": " + e.what());
    }
  });
  out << "fused " << jobs.size() << " image(s) into " << root.string() << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct EvaluateOptions
{
  std::string pred;
  std::string gt;
  std::string out;
  std::string suffix;
  std::string pred_suffix;
  double tau = 0.0;
  std::string overlap_rule = "score";
  int threads = 1;
};

int cmd_evaluate(const EvaluateOptions & o, std::ostream & out)
{
  const OverlapRule rule = parse_overlap_rule(o.overlap_rule);
  require_directory(o.pred, "prediction directory");
  // A manifest wins over a label PNG with the same stem (fuse writes both).
  auto preds = list_by_stem(o.pred, {".json"}, o.pred_suffix);
  preds.merge(list_by_stem(o.pred, {".png"}, o.pred_suffix));
  if (preds.empty()) {
    throw InputError("no predictions (*.png or *.json) in " + o.pred);
  }
  const auto gt = gt_files(o.gt, o.suffix);
  std::vector<std::string> ids;
  for (const auto & [id, path] : preds) {
    ids.push_back(id);
  }
  check_pairing(ids, gt);

  std::vector<CorpusItem> items(ids.size());
  parallel_for(ids.size(), o.threads, [&](std::size_t i) {
    const fs::path & p = preds.at(ids[i]);
    PredictionSet ps = p.extension() == ".json" ? read_manifest(p).predictions
                                                 : label_map_to_instances(read_label_png(p));
    items[i] = {ids[i], filter_by_score(ps, o.tau), read_label_png(gt.at(ids[i]))};
  });
  const EvalReport report = evaluate_corpus(items, rule, o.threads);

  fs::path csv = o.out;
  csv += ".csv";
  fs::path js = o.out;
  js += ".json";
  if (const auto parent = fs::path(o.out).parent_path(); !parent.empty()) {
    ensure_directory(parent);
  }
  write_file_atomic(csv, format_report_csv(report));
  write_file_atomic(js, format_report_json(report));
  out << "images " << report.n_images << "  mean_sbd " << format_double(report.mean_sbd)
      << "  mean_dic " << format_double(report.mean_dic) << "  mean_abs_dic "
      << format_double(report.mean_abs_dic) << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct SweepOptions
{
  std::string pred_dir;
  std::string gt;
  std::string out;
  std::string suffix;
  std::vector<double> taus{0.5, 0.6, 0.7, 0.8, 0.9};
  bool tta = false;
  FusionFlags fusion;
  int threads = 1;
};

int cmd_sweep(const SweepOptions & o, std::ostream & out)
{
  SweepConfig cfg;
  cfg.taus = o.taus;
  cfg.apply_tta = o.tta;
  cfg.fusion = o.fusion.config();
  cfg.overlap_rule = o.fusion.rule();
  try {
    validate(cfg);
  } catch (const InvalidArgument & e) {
    throw InputError(e.what());
  }
  const auto corpus = load_sweep_corpus(o.pred_dir, o.gt, o.suffix, !o.tta, o.threads);
  const SweepTable table = sweep(corpus, cfg, o.threads);
  const std::string csv = format_sweep_csv(table);
  if (o.out.empty()) {
    out << csv;
  } else {
    if (const auto parent = fs::path(o.out).parent_path(); !parent.empty()) {
      ensure_directory(parent);
    }
    write_file_atomic(o.out, csv);
    out << "wrote " << table.size() << " rows to " << o.out << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct ReportOptions
{
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::string out;
  std::string plot_csv;
};

std::string fixed4(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int cmd_report(const ReportOptions & o, std::ostream & out)
{
  if (!o.labels.empty() && o.labels.size() != o.inputs.size()) {
    throw InputError("--label must be given once per --in");
  }
  std::ostringstream md;
  std::ostringstream plot;
  plot << "series,tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images\n";
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    const auto bytes = read_file(o.inputs[i]);
    SweepTable table;
    try {
      table = parse_sweep_csv(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
    } catch (const InputError & e) {
      throw InputError(o.inputs[i] + ": " + e.what());
    }
    const std::string label = o.labels.empty() ? fs::path(o.inputs[i]).stem().string() : o.labels[i];
    if (i > 0) {
      md << "\n";
    }
    md << "### " << label << "\n\n";
    md << "| tau | mean SBD | mean DiC | mean \\|DiC\\| | mean count | images |\n";
    md << "|----:|---------:|---------:|-------------:|-----------:|-------:|\n";
    for (const auto & row : table) {
      md << "| " << fixed4(row.tau) << " | " << fixed4(row.mean_sbd) << " | " << fixed4(row.mean_dic)
         << " | " << fixed4(row.mean_abs_dic) << " | " << fixed4(row.mean_pred_count) << " | "
         << row.n_images << " |\n";
      plot << label << ',' << format_double(row.tau) << ',' << format_double(row.mean_sbd) << ','
           << format_double(row.mean_dic) << ',' << format_double(row.mean_abs_dic) << ','
           << format_double(row.mean_pred_count) << ',' << row.n_images << '\n';
    }
  }
  if (o.out.empty()) {
    out << md.str();
  } else {
    write_file_atomic(o.out, md.str());
  }
  if (!o.plot_csv.empty()) {
    write_file_atomic(o.plot_csv, plot.str());
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"maskfuse: test-time augmentation fusion and leaf segmentation metrics"};
  app.name("maskfuse");
  app.require_subcommand(1);

  GenOptions gen;
  auto * gen_cmd = app.add_subcommand("gen", "Generate a synthetic rosette corpus with simulated predictions");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--images", gen.images, "Number of images")->capture_default_str();
  gen_cmd->add_option("--leaves", gen.corpus.rosette.leaf_count, "Leaves per image")->capture_default_str();
  gen_cmd->add_option("--width", gen.corpus.rosette.width)->capture_default_str();
  gen_cmd->add_option("--height", gen.corpus.rosette.height)->capture_default_str();
  gen_cmd->add_option("--leaf-length-min", gen.corpus.rosette.leaf_length_min)->capture_default_str();
  gen_cmd->add_option("--leaf-length-max", gen.corpus.rosette.leaf_length_max)->capture_default_str();
  gen_cmd->add_option("--leaf-width-min", gen.corpus.rosette.leaf_width_min)->capture_default_str();
  gen_cmd->add_option("--leaf-width-max", gen.corpus.rosette.leaf_width_max)->capture_default_str();
  gen_cmd->add_option("--center-jitter", gen.corpus.rosette.center_jitter)->capture_default_str();
  gen_cmd->add_option("--connectivity", gen.corpus.rosette.connectivity, "Leaf connectivity check (4 or 8)")
    ->check(CLI::IsMember({4, 8}))
    ->capture_default_str();
  gen_cmd->add_option("--merge-prob", gen.corpus.noise.merge_prob)->capture_default_str();
  gen_cmd->add_option("--drop-prob", gen.corpus.noise.drop_prob)->capture_default_str();
  gen_cmd->add_option("--boundary-noise", gen.corpus.noise.boundary_noise, "Erosion/dilation radius")
    ->capture_default_str();
  gen_cmd->add_option("--score-jitter", gen.corpus.noise.score_model.jitter)->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise_scale, "Multiplier on all noise parameters; 0 disables noise")
    ->capture_default_str();
  gen_cmd->add_option("--transforms", gen.transforms, "Transforms to simulate (default: all five)")
    ->delimiter(',');
  gen_cmd->add_option("--seed", gen.corpus.seed)->capture_default_str();
  gen_cmd->add_option("--threads", gen.threads)->capture_default_str();

  FuseOptions fuse_opts;
  auto * fuse_cmd = app.add_subcommand("fuse", "Fuse per-transform predictions into one prediction per image");
  fuse_cmd->add_option("--pred-dir", fuse_opts.pred_dir, "Directory with <transform>/<image_id>.json");
  fuse_cmd->add_option("--input", fuse_opts.inputs, "Single-image manifest, optionally TRANSFORM=PATH");
  fuse_cmd->add_option("--out", fuse_opts.out, "Output directory")->required();
  fuse_cmd->add_option("--tau", fuse_opts.tau, "Detection threshold applied to each version before fusion")
    ->capture_default_str();
  add_fusion_flags(*fuse_cmd, fuse_opts.fusion);
  fuse_cmd->add_option("--threads", fuse_opts.threads)->capture_default_str();

  EvaluateOptions eval;
  auto * eval_cmd = app.add_subcommand("evaluate", "Compute SBD and DiC against ground-truth label PNGs");
  eval_cmd->add_option("--pred", eval.pred, "Directory of prediction label PNGs or manifests")->required();
  eval_cmd->add_option("--gt", eval.gt, "Directory of ground-truth label PNGs")->required();
  eval_cmd->add_option("--out", eval.out, "Output prefix; writes <prefix>.csv and <prefix>.json")->required();
  eval_cmd->add_option("--suffix", eval.suffix, "Ground-truth file stem suffix, e.g. _label");
  eval_cmd->add_option("--pred-suffix", eval.pred_suffix, "Prediction file stem suffix");
  eval_cmd->add_option("--tau", eval.tau, "Detection threshold for manifest predictions")->capture_default_str();
  eval_cmd->add_option("--overlap-rule", eval.overlap_rule)
    ->check(CLI::IsMember({"score", "votes"}))
    ->capture_default_str();
  eval_cmd->add_option("--threads", eval.threads)->capture_default_str();

  SweepOptions sw;
  auto * sweep_cmd = app.add_subcommand("sweep", "Evaluate a range of detection thresholds");
  sweep_cmd->add_option("--pred-dir", sw.pred_dir, "Directory with <transform>/<image_id>.json")->required();
  sweep_cmd->add_option("--gt", sw.gt, "Directory of ground-truth label PNGs")->required();
  sweep_cmd->add_option("--out", sw.out, "Output CSV (default: stdout)");
  sweep_cmd->add_option("--suffix", sw.suffix, "Ground-truth file stem suffix");
  sweep_cmd->add_option("--taus", sw.taus, "Comma-separated thresholds")->delimiter(',');
  sweep_cmd->add_flag("--tta", sw.tta, "Fuse all transforms at every threshold");
  add_fusion_flags(*sweep_cmd, sw.fusion);
  sweep_cmd->add_option("--threads", sw.threads)->capture_default_str();

  ReportOptions rep;
  auto * report_cmd = app.add_subcommand("report", "Render sweep CSVs as markdown tables and plot-ready CSV");
  report_cmd->add_option("--in", rep.inputs, "Sweep CSV (repeatable)")->required();
  report_cmd->add_option("--label", rep.labels, "Series label per --in");
  report_cmd->add_option("--out", rep.out, "Markdown output (default: stdout)");
  report_cmd->add_option("--plot-csv", rep.plot_csv, "Long-format CSV for plotting");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError & e) {
    err << "maskfuse: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (gen_cmd->parsed()) {
      return cmd_gen(gen, out);
    }
    if (fuse_cmd->parsed()) {
      return cmd_fuse(fuse_opts, out);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval, out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sw, out);
    }
    if (report_cmd->parsed()) {
      return cmd_report(rep, out);
    }
  } catch (const InputError & e) {
    err << "maskfuse: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvalidArgument & e) {
    err << "maskfuse: " << e.what() << "\n";
    return kUsageError;
  } catch (const fs::filesystem_error & e) {
    err << "maskfuse: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception & e) {
    err << "maskfuse: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace maskfuse::cli
