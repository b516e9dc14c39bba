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


#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "maskfuse/io.hpp"
#include "maskfuse/synthgen.hpp"

namespace maskfuse
{
namespace
{

struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path & p)
{
  const auto bytes = read_file(p);
  return {bytes.begin(), bytes.end()};
}

// Small rosettes keep the end-to-end runs fast.
const std::vector<std::string> kSmall{"--width",           "64", "--height",          "64",
                                      "--leaf-length-min", "14", "--leaf-length-max", "22",
                                      "--leaf-width-min",  "6",  "--leaf-width-max",  "10"};

std::vector<std::string> gen_args(const fs::path & out, std::vector<std::string> extra)
{
  std::vector<std::string> args{"gen", "--out", out.string()};
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

RosetteConfig small_rosette()
{
  RosetteConfig rc;
  rc.width = 64;
  rc.height = 64;
  rc.leaf_length_min = 14;
  rc.leaf_length_max = 22;
  rc.leaf_width_min = 6;
  rc.leaf_width_max = 10;
  return rc;
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("maskfuse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Cli, UsageErrors)
{
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen"}).code, 2);
  EXPECT_EQ(run({"gen", "--out", (dir_ / "g").string(), "--merge-prob", "1.5"}).code, 2);
  EXPECT_EQ(run({"evaluate", "--pred", (dir_ / "nope").string(), "--gt", dir_.string(), "--out", "x"}).code, 2);
  const Result help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("sweep"), std::string::npos);
}

TEST_F(Cli, GenWritesCorpusDeterministically)
{
  const auto args_a = gen_args(dir_ / "a", {"--images", "10", "--leaves", "6", "--seed", "1", "--merge-prob", "0.3"});
  const auto args_b = gen_args(dir_ / "b", {"--images", "10", "--leaves", "6", "--seed", "1", "--merge-prob", "0.3"});
  ASSERT_EQ(run(args_a).code, 0);
  ASSERT_EQ(run(args_b).code, 0);

  std::size_t pngs = 0;
  for (const auto & e : fs::directory_iterator(dir_ / "a" / "gt")) {
    ++pngs;
    EXPECT_EQ(instance_count(read_label_png(e.path())), 6) << e.path();
  }
  EXPECT_EQ(pngs, 10u);

  std::size_t compared = 0;
  for (const auto & e : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!e.is_regular_file()) {
      continue;
    }
    const fs::path twin = dir_ / "b" / fs::relative(e.path(), dir_ / "a");
    ASSERT_TRUE(fs::exists(twin)) << twin;
    EXPECT_EQ(read_file(e.path()), read_file(twin)) << e.path();
    ++compared;
  }
  EXPECT_EQ(compared, 10u + 5u * 10u + 1u);
}

TEST_F(Cli, GenMergeNoiseUndercounts)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "12", "--merge-prob", "0.5", "--seed", "4"})).code, 0);
  const Result r = run({"evaluate", "--pred", (dir_ / "c" / "pred" / "identity").string(), "--gt",
                        (dir_ / "c" / "gt").string(), "--out", (dir_ / "eval").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "eval.csv");
  const auto mean = csv.substr(csv.find("MEAN,"));
  std::vector<std::string> cols;
  std::stringstream ss(mean);
  for (std::string c; std::getline(ss, c, ',');) {
    cols.push_back(c);
  }
  ASSERT_GE(cols.size(), 3u);
  EXPECT_LT(std::stod(cols[2]), 0.0);
}

TEST_F(Cli, FuseWithoutNoiseReproducesIdentity)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "3", "--noise", "0", "--seed", "2"})).code, 0);
  const Result r = run({"fuse", "--pred-dir", (dir_ / "c" / "pred").string(), "--out", (dir_ / "fused").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string id = image_id(i);
    const Manifest fused = read_manifest(dir_ / "fused" / (id + ".json"));
    const Manifest ident = read_manifest(dir_ / "c" / "pred" / "identity" / (id + ".json"));
    EXPECT_EQ(fused.image_id, id);
    EXPECT_TRUE(same_predictions(fused.predictions, ident.predictions));
    EXPECT_TRUE(identical(read_label_png(dir_ / "fused" / (id + ".png")),
                          read_label_png(dir_ / "c" / "gt" / (id + ".png"))));
  }
  // The fused directory holds a manifest and a PNG per image; evaluate reads the manifest.
  const Result e = run({"evaluate", "--pred", (dir_ / "fused").string(), "--gt", (dir_ / "c" / "gt").string(),
                        "--out", (dir_ / "eval").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(slurp(dir_ / "eval.csv").find("\nMEAN,1,0,0,"), std::string::npos);
}

TEST_F(Cli, FuseSingleImageInputs)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "1", "--merge-prob", "0.5", "--seed", "5"})).code, 0);
  const fs::path pred = dir_ / "c" / "pred";
  const std::string id = image_id(0);
  std::vector<std::string> args{"fuse", "--out", (dir_ / "f").string()};
  for (auto t : all_transforms) {
    args.push_back("--input");
    args.push_back((pred / to_string(t) / (id + ".json")).string());
  }
  ASSERT_EQ(run(args).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "f" / (id + ".json")));

  // Without identity.
  std::vector<std::string> partial{"fuse", "--out", (dir_ / "g").string(), "--input",
                                   (pred / "hflip" / (id + ".json")).string()};
  EXPECT_EQ(run(partial).code, 2);

  // A manifest filed under the wrong transform.
  fs::copy_file(pred / "hflip" / (id + ".json"), pred / "vflip" / (id + ".json"),
                fs::copy_options::overwrite_existing);
  EXPECT_EQ(run({"fuse", "--pred-dir", pred.string(), "--out", (dir_ / "h").string()}).code, 2);
}

TEST_F(Cli, FuseMissingIdentityDirectory)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "2", "--transforms", "identity", "--transforms", "hflip"})).code, 0);
  fs::remove_all(dir_ / "c" / "pred" / "identity");
  const Result r = run({"fuse", "--pred-dir", (dir_ / "c" / "pred").string(), "--out", (dir_ / "f").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("identity"), std::string::npos);
}

TEST_F(Cli, FuseMalformedManifestNamesField)
{
  const fs::path id_dir = dir_ / "pred" / "identity";
  fs::create_directories(id_dir);
  write_file_atomic(id_dir / "x.json", std::string_view(R"({"image_id": "x", "width": 2, "height": 1,
    "instances": [{"score": "high", "rle": [0, 2]}]})"));
  const Result r = run({"fuse", "--pred-dir", (dir_ / "pred").string(), "--out", (dir_ / "f").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("instances[0].score"), std::string::npos) << r.err;
}

TEST_F(Cli, FuseRecoversMergedLeaves)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "8", "--merge-prob", "0.5", "--seed", "6"})).code, 0);
  ASSERT_EQ(run({"fuse", "--pred-dir", (dir_ / "c" / "pred").string(), "--out", (dir_ / "f").string()}).code, 0);
  std::size_t fused_total = 0;
  std::size_t identity_total = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const std::string id = image_id(i);
    fused_total += read_manifest(dir_ / "f" / (id + ".json")).predictions.size();
    identity_total += read_manifest(dir_ / "c" / "pred" / "identity" / (id + ".json")).predictions.size();
  }
  EXPECT_GT(fused_total, identity_total);
}

TEST_F(Cli, EvaluateAgainstItself)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "4", "--transforms", "identity"})).code, 0);
  const Result r = run({"evaluate", "--pred", (dir_ / "c" / "gt").string(), "--gt", (dir_ / "c" / "gt").string(),
                        "--out", (dir_ / "out" / "self").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "out" / "self.csv");
  EXPECT_NE(csv.find("\nMEAN,1,0,0,"), std::string::npos) << csv;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "self.json"));
}

TEST_F(Cli, EvaluatePairingErrors)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "3", "--transforms", "identity"})).code, 0);
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run({"evaluate", "--pred", (dir_ / "empty").string(), "--gt", (dir_ / "c" / "gt").string(), "--out",
                 (dir_ / "e").string()})
              .code,
            2);

  fs::create_directories(dir_ / "partial");
  fs::copy_file(dir_ / "c" / "gt" / "img_0001.png", dir_ / "partial" / "img_0001.png");
  fs::copy_file(dir_ / "c" / "gt" / "img_0001.png", dir_ / "partial" / "stray.png");
  const Result r = run({"evaluate", "--pred", (dir_ / "partial").string(), "--gt", (dir_ / "c" / "gt").string(),
                        "--out", (dir_ / "e").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("stray"), std::string::npos) << r.err;

  // Suffix pairing.
  fs::create_directories(dir_ / "labels");
  for (std::size_t i = 0; i < 3; ++i) {
    fs::copy_file(dir_ / "c" / "gt" / (image_id(i) + ".png"), dir_ / "labels" / (image_id(i) + "_label.png"));
  }
  EXPECT_EQ(run({"evaluate", "--pred", (dir_ / "c" / "gt").string(), "--gt", (dir_ / "labels").string(),
                 "--suffix", "_label", "--out", (dir_ / "s").string()})
              .code,
            0);

  write_file_atomic(dir_ / "partial" / "stray.png", std::string_view("not a png"));
  fs::remove(dir_ / "partial" / "img_0001.png");
  fs::copy_file(dir_ / "c" / "gt" / "img_0002.png", dir_ / "c" / "gt" / "stray.png");
  EXPECT_EQ(run({"evaluate", "--pred", (dir_ / "partial").string(), "--gt", (dir_ / "c" / "gt").string(), "--out",
                 (dir_ / "e").string()})
              .code,
            2);
}

TEST_F(Cli, EvaluateMatchesLibraryBitExactly)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "50", "--merge-prob", "0.3", "--drop-prob", "0.05",
                                      "--boundary-noise", "1", "--transforms", "identity", "--seed", "9",
                                      "--threads", "2"}))
              .code,
            0);
  ASSERT_EQ(run({"evaluate", "--pred", (dir_ / "c" / "pred" / "identity").string(), "--gt",
                 (dir_ / "c" / "gt").string(), "--out", (dir_ / "r").string(), "--threads", "3"})
              .code,
            0);

  CorpusConfig cfg;
  cfg.images = 50;
  cfg.rosette = small_rosette();
  cfg.noise.merge_prob = 0.3;
  cfg.noise.drop_prob = 0.05;
  cfg.noise.boundary_noise = 1;
  cfg.transforms = {Transform::identity};
  cfg.seed = 9;
  std::vector<CorpusItem> items;
  for (const auto & item : generate_corpus(cfg)) {
    items.push_back({item.image_id, item.versions.at(Transform::identity), item.gt});
  }
  const EvalReport lib = evaluate_corpus(items);
  EXPECT_EQ(slurp(dir_ / "r.csv"), format_report_csv(lib));
  EXPECT_EQ(slurp(dir_ / "r.json"), format_report_json(lib));
}

TEST_F(Cli, SweepPerfectPredictions)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "3", "--noise", "0"})).code, 0);
  const Result r = run({"sweep", "--pred-dir", (dir_ / "c" / "pred").string(), "--gt", (dir_ / "c" / "gt").string(),
                        "--taus", "0.5,0.7,0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images\n"
            "0.5,1,0,0,8,3\n"
            "0.7,1,0,0,8,3\n"
            "0.9,1,0,0,8,3\n");
  EXPECT_EQ(run({"sweep", "--pred-dir", (dir_ / "c" / "pred").string(), "--gt", (dir_ / "c" / "gt").string(),
                 "--taus", "0.7,0.5"})
              .code,
            2);
}

TEST_F(Cli, SweepShapeAndTtaDominance)
{
  ASSERT_EQ(run(gen_args(dir_ / "c", {"--images", "30", "--merge-prob", "0.35", "--drop-prob", "0.05",
                                      "--boundary-noise", "1", "--seed", "12"}))
              .code,
            0);
  const std::vector<std::string> base{"sweep", "--pred-dir", (dir_ / "c" / "pred").string(), "--gt",
                                      (dir_ / "c" / "gt").string()};
  auto plain_args = base;
  plain_args.insert(plain_args.end(), {"--out", (dir_ / "plain.csv").string()});
  auto tta_args = base;
  tta_args.insert(tta_args.end(), {"--tta", "--out", (dir_ / "tta.csv").string()});
  ASSERT_EQ(run(plain_args).code, 0);
  ASSERT_EQ(run(tta_args).code, 0);
  const SweepTable plain = parse_sweep_csv(slurp(dir_ / "plain.csv"));
  const SweepTable tta = parse_sweep_csv(slurp(dir_ / "tta.csv"));
  ASSERT_EQ(plain.size(), 5u);
  ASSERT_EQ(tta.size(), 5u);
  for (std::size_t k = 0; k < plain.size(); ++k) {
    if (k > 0) {
      EXPECT_LE(plain[k].mean_pred_count, plain[k - 1].mean_pred_count);
      EXPECT_LE(tta[k].mean_pred_count, tta[k - 1].mean_pred_count);
    }
    if (plain[k].tau >= 0.7) {
      EXPECT_GT(tta[k].mean_sbd, plain[k].mean_sbd) << plain[k].tau;
    }
  }

  const Result rep = run({"report", "--in", (dir_ / "plain.csv").string(), "--in", (dir_ / "tta.csv").string(),
                          "--label", "identity", "--label", "tta", "--plot-csv", (dir_ / "plot.csv").string()});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("### identity"), std::string::npos);
  EXPECT_NE(rep.out.find("### tta"), std::string::npos);
  EXPECT_NE(rep.out.find("| 0.7000 |"), std::string::npos);
  const std::string plot = slurp(dir_ / "plot.csv");
  EXPECT_EQ(plot.substr(0, plot.find('\n')), "series,tau,mean_sbd,mean_dic,mean_abs_dic,mean_pred_count,n_images");
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 11);
  EXPECT_EQ(run({"report", "--in", (dir_ / "missing.csv").string()}).code, 2);
  EXPECT_EQ(run({"report", "--in", (dir_ / "plain.csv").string(), "--label", "a", "--label", "b"}).code, 2);
}

}  // namespace
}  // namespace maskfuse
