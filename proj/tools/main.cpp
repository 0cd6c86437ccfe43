// Copyright 2026 The mdis Authors
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

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eval.hpp"
#include "mdis/em.hpp"
#include "mdis/errors.hpp"
#include "mdis/saliency.hpp"
#include "mdis/version.hpp"

namespace fs = std::filesystem;
using namespace mdis;

namespace {

struct SaliencyArgs {
  std::vector<std::string> inputs;
  std::string mode = "uhmt0";
  std::string out_dir;
  bool dump_wavelet = false;
  bool dump_labels = false;
  bool float_map = false;
  SaliencyOptions pipeline;
};

struct TrainArgs {
  std::string image;
  std::string kind = "scalar";
  std::string out;
  std::string init;
  int max_iter = 50;
  double tol = 1e-5;
  SaliencyOptions pipeline;
};

void add_pipeline_flags(CLI::App* cmd, SaliencyOptions* opts) {
  cmd->add_option("--depth", opts->depth, "Wavelet decomposition depth")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();
  cmd->add_option("--min-side", opts->min_side,
                  "Minimum padded side (power of two)")
      ->capture_default_str();
  cmd->add_option("--em-max-iter", opts->em_max_iter, "EM iteration cap")
      ->capture_default_str();
  cmd->add_option("--em-tol", opts->em_tol,
                  "EM relative log-likelihood stopping tolerance")
      ->capture_default_str();
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".ppm") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

int cmd_saliency(const SaliencyArgs& args) {
  auto mode = parse_mode(args.mode);
  if (!mode) {
    std::cerr << "unknown mode '" << args.mode
              << "' (expected [utv]hmt[0-6])\n";
    return 2;
  }
  std::vector<fs::path> files = expand_inputs(args.inputs);
  if (files.empty()) {
    std::cerr << "no input images\n";
    return 2;
  }
  if (!args.out_dir.empty()) fs::create_directories(args.out_dir);

  for (const fs::path& file : files) {
    RawImage img = load_image(file.string());
    auto t0 = std::chrono::steady_clock::now();
    SaliencyResult res = compute_saliency_detailed(img, *mode, args.pipeline);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    fs::path dir = args.out_dir.empty() ? file.parent_path()
                                        : fs::path(args.out_dir);
    std::string stem = file.stem().string() + "." + res.map.mode;
    write_png16((dir / (stem + ".png")).string(), res.map.values);
    if (args.float_map) {
      dump_map_float((dir / (stem + ".map.bin")).string(), res.map.values);
    }
    if (args.dump_wavelet) {
      dump_pyramid((dir / (file.stem().string() + ".wav.bin")).string(),
                   res.pyramid);
    }
    if (args.dump_labels) {
      if (res.pseudo.has_value()) {
        write_pgm((dir / (stem + ".labels1.pgm")).string(),
                  res.pseudo->labels);
      } else {
        for (size_t j = 1; j <= res.stages.cascade.labels.size(); ++j) {
          write_pgm((dir / (stem + ".labels" + std::to_string(j) + ".pgm"))
                        .string(),
                    res.stages.cascade.labels[j - 1]);
        }
      }
    }
    std::cout << file.string() << " " << res.map.mode << " " << secs << " s\n";
  }
  return 0;
}

// Scalar training pools the three band forests into one tied model so the
// result fits the flat model-file schema.
ScalarForest pooled_band_forest(const WaveletPyramid& pyr, double scale) {
  ScalarForest pooled;
  for (Band b : kBands) {
    ScalarForest f = forest_from_band(pyr, b, scale);
    int offset = static_cast<int>(pooled.nodes.size());
    for (const auto& node : f.nodes) {
      pooled.add_node(node.level,
                      node.parent < 0 ? -1 : node.parent + offset, node.value);
    }
  }
  return pooled;
}

int cmd_train(const TrainArgs& args) {
  RawImage img = load_image(args.image);
  auto [lum, window] = pad_to_dyadic(to_luminance(img), args.pipeline.min_side);
  WaveletPyramid pyr = dwt2_haar(lum, args.pipeline.depth);
  EmOptions em{args.max_iter, args.tol};

  EmInfo info;
  HmtModel model;
  if (args.kind == "scalar") {
    ScalarForest forest = pooled_band_forest(pyr, args.pipeline.coeff_scale);
    ScalarHmtParams params;
    if (args.init.empty()) {
      params = default_scalar_init(forest);
    } else {
      params = std::get<ScalarHmtParams>(load_model(args.init));
    }
    info = em_train(forest, &params, em);
    model = params;
  } else if (args.kind == "vector") {
    VectorForest forest = forest_from_pyramid(pyr, args.pipeline.coeff_scale);
    VectorHmtParams params;
    if (args.init.empty()) {
      params = default_vector_init(forest);
    } else {
      params = std::get<VectorHmtParams>(load_model(args.init));
    }
    info = em_train(forest, &params, em);
    model = params;
  } else {
    std::cerr << "unknown model kind '" << args.kind
              << "' (expected scalar or vector)\n";
    return 2;
  }

  if (info.degenerate) {
    std::cerr << "warning: degenerate input (all-zero coefficients), "
                 "variances pinned at the floor\n";
  }
  save_model(args.out, model);
  std::cout << "final log-likelihood " << info.final_loglik << " after "
            << info.iterations << " iterations\n";
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-scale wavelet-HMT saliency"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file (key=value, flags override)");

  SaliencyArgs sal;
  CLI::App* sal_cmd =
      app.add_subcommand("saliency", "Compute saliency maps for images");
  sal_cmd->add_option("inputs", sal.inputs, "Image files or directories")
      ->required();
  sal_cmd->add_option("--mode", sal.mode, "Mode, e.g. uhmt0, thmt3, vhmt6")
      ->capture_default_str();
  sal_cmd->add_option("-o,--out-dir", sal.out_dir,
                      "Output directory (default: next to each input)");
  sal_cmd->add_flag("--dump-wavelet", sal.dump_wavelet,
                    "Also write <stem>.wav.bin coefficient dumps");
  sal_cmd->add_flag("--dump-labels", sal.dump_labels,
                    "Also write per-scale label fields as PGM");
  sal_cmd->add_flag("--float-map", sal.float_map,
                    "Also write <stem>.<mode>.map.bin float maps");
  add_pipeline_flags(sal_cmd, &sal.pipeline);

  TrainArgs train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train an HMT model on one image");
  train_cmd->add_option("image", train.image, "Training image")->required();
  train_cmd->add_option("--kind", train.kind, "scalar or vector")
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--init", train.init,
                        "Saved model file to initialize from");
  train_cmd->add_option("--max-iter", train.max_iter, "EM iteration cap")
      ->capture_default_str();
  train_cmd->add_option("--tol", train.tol, "EM stopping tolerance")
      ->capture_default_str();
  add_pipeline_flags(train_cmd, &train.pipeline);

  tools::EvalConfig eval_cfg;
  std::string modes_arg = "uhmt0";
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Evaluate saliency modes against eye fixations");
  eval_cmd->add_option("--images", eval_cfg.images_dir, "Image directory")
      ->required();
  eval_cmd->add_option("--fixations", eval_cfg.fixations_csv,
                       "Fixation CSV (image,subject,x,y)")
      ->required();
  eval_cmd->add_option("--out", eval_cfg.out_dir, "Output directory")
      ->required();
  eval_cmd->add_option("--modes", modes_arg, "Comma-separated mode list")
      ->capture_default_str();
  eval_cmd->add_option("--jobs", eval_cfg.jobs,
                       "Worker threads (default: logical cores)");
  eval_cmd->add_option("--blur", eval_cfg.blur_sigma,
                       "Fixation density blur sigma in pixels")
      ->capture_default_str();
  add_pipeline_flags(eval_cmd, &eval_cfg.pipeline);

  CLI::App* version_cmd = app.add_subcommand("version", "Print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // Anything but help is a usage error.
    return e.get_name() == "CallForHelp" ? code : 2;
  }

  try {
    if (version_cmd->parsed()) {
      std::cout << "mdis " << kVersionString << "\n";
      return 0;
    }
    if (sal_cmd->parsed()) return cmd_saliency(sal);
    if (train_cmd->parsed()) return cmd_train(train);
    if (eval_cmd->parsed()) {
      eval_cfg.modes.clear();
      std::string token;
      for (char ch : modes_arg + ",") {
        if (ch == ',') {
          if (!token.empty()) eval_cfg.modes.push_back(token);
          token.clear();
        } else {
          token.push_back(ch);
        }
      }
      return tools::run_eval(eval_cfg);
    }
  } catch (const mdis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
