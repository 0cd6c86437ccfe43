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

#include "eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "mdis/errors.hpp"
#include "mdis/internal/fmt.hpp"
#include "mdis/metrics.hpp"
#include "svg.hpp"

namespace mdis::tools {

namespace fs = std::filesystem;
using internal::fmt_double;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ModeResult {
  double lcc = std::nan("");
  double nss = std::nan("");
  double auc = std::nan("");
  double time_s = std::nan("");
  bool skipped = false;
  RocCurve roc;
  bool has_isroc = false;
  IsrocResult is;
};

struct ImageResult {
  std::string stem;
  std::vector<ModeResult> per_mode;
  std::string warning;
};

// Family = everything the scale selectors of one model kind share.
struct FamilyData {
  PipelineModel model;
  SaliencyStages stages;
  double seconds = 0.0;
};

ImageResult eval_one_image(const fs::path& path,
                           const std::map<std::string, FixationSet>& fixations,
                           const std::vector<ModeConfig>& modes,
                           const EvalConfig& cfg) {
  ImageResult out;
  out.stem = path.stem().string();
  out.per_mode.resize(modes.size());

  RawImage raw = load_image(path.string());  // io excluded from timing

  auto fx_it = fixations.find(out.stem);
  if (fx_it == fixations.end()) {
    out.warning = "no fixations for image '" + out.stem + "', skipped";
    for (auto& m : out.per_mode) m.skipped = true;
    return out;
  }
  const FixationSet& fx = fx_it->second;

  Clock::time_point t0 = Clock::now();
  auto [lum, window] = pad_to_dyadic(to_luminance(raw), cfg.pipeline.min_side);
  WaveletPyramid pyr = dwt2_haar(lum, cfg.pipeline.depth);
  double transform_seconds = seconds_since(t0);

  Matrix density = density_from_fixations(fx, raw.width, raw.height,
                                          cfg.blur_sigma);

  std::map<ModeConfig::Model, FamilyData> families;
  for (size_t mi = 0; mi < modes.size(); ++mi) {
    const ModeConfig& mode = modes[mi];
    auto fam = families.find(mode.model);
    if (fam == families.end()) {
      FamilyData fd;
      Clock::time_point f0 = Clock::now();
      fd.model = fit_model(pyr, mode.model, cfg.pipeline);
      fd.stages = run_stages(pyr, fd.model, cfg.pipeline);
      fd.seconds = transform_seconds + seconds_since(f0);
      fam = families.emplace(mode.model, std::move(fd)).first;
    }

    Clock::time_point m0 = Clock::now();
    Matrix full;
    if (mode.scale == 6) {
      full = saliency_at_scale(
          pseudo_dis(pyr, fam->second.model, cfg.pipeline).mi_grid, 1);
    } else {
      full = select_map(fam->second.stages, mode.scale, pyr.depth());
    }
    Matrix map = crop_map(normalize01(full), window);

    ModeResult& mr = out.per_mode[mi];
    mr.time_s = fam->second.seconds + seconds_since(m0);
    mr.lcc = lcc(map, density).value;
    mr.nss = nss(map, fx).value;
    mr.roc = roc(map, fx);
    mr.auc = auc(mr.roc);
    if (fx.by_subject.size() >= 2) {
      mr.is = isroc(map, fx, cfg.blur_sigma);
      mr.has_isroc = true;
    }
  }
  return out;
}

}  // namespace

int run_eval(const EvalConfig& cfg) {
  auto fixations = load_fixations_csv(cfg.fixations_csv);

  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(cfg.images_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".ppm") images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) {
    std::cerr << "eval: no images in " << cfg.images_dir << "\n";
    return 1;
  }

  std::vector<ModeConfig> modes;
  for (const std::string& name : cfg.modes) {
    auto cfg_mode = parse_mode(name);
    if (!cfg_mode) {
      std::cerr << "eval: unknown mode '" << name << "'\n";
      return 2;
    }
    modes.push_back(*cfg_mode);
  }

  fs::create_directories(cfg.out_dir);

  // Images are independent; a small worker pool picks them off in order and
  // writes into per-index slots so the merge is deterministic.
  std::vector<ImageResult> results(images.size());
  std::vector<std::string> errors(images.size());
  std::atomic<size_t> next{0};
  int jobs = cfg.jobs > 0
                 ? cfg.jobs
                 : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<int>(jobs, static_cast<int>(images.size()));
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < images.size();
         i = next.fetch_add(1)) {
      try {
        results[i] = eval_one_image(images[i], fixations, modes, cfg);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        results[i].stem = images[i].stem().string();
        results[i].per_mode.assign(modes.size(), ModeResult{});
        for (auto& m : results[i].per_mode) m.skipped = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < images.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "eval: " << images[i] << ": " << errors[i] << "\n";
    } else if (!results[i].warning.empty()) {
      std::cerr << "eval: warning: " << results[i].warning << "\n";
    }
  }

  // metrics.csv, rows sorted by image name, modes in the requested order.
  fs::path metrics_path = fs::path(cfg.out_dir) / "metrics.csv";
  {
    std::ofstream out(metrics_path);
    if (!out) throw Error("cannot open for writing: " + metrics_path.string());
    out << "image,mode,lcc,nss,auc,time_s\n";
    for (const ImageResult& r : results) {
      for (size_t mi = 0; mi < modes.size(); ++mi) {
        const ModeResult& m = r.per_mode[mi];
        out << r.stem << "," << cfg.modes[mi] << "," << fmt_double(m.lcc) << ","
            << fmt_double(m.nss) << "," << fmt_double(m.auc) << ","
            << fmt_double(m.time_s) << "\n";
      }
    }
  }

  // summary.csv: per-mode means over the rows that were actually evaluated.
  fs::path summary_path = fs::path(cfg.out_dir) / "summary.csv";
  {
    std::ofstream out(summary_path);
    out << "mode,lcc,nss,auc,time_s\n";
    for (size_t mi = 0; mi < modes.size(); ++mi) {
      double sl = 0, sn = 0, sa = 0, st = 0;
      int n = 0;
      for (const ImageResult& r : results) {
        const ModeResult& m = r.per_mode[mi];
        if (m.skipped) continue;
        sl += m.lcc;
        sn += m.nss;
        sa += m.auc;
        st += m.time_s;
        ++n;
      }
      if (n == 0) {
        out << cfg.modes[mi] << ",nan,nan,nan,nan\n";
        continue;
      }
      out << cfg.modes[mi] << "," << fmt_double(sl / n) << ","
          << fmt_double(sn / n) << "," << fmt_double(sa / n) << ","
          << fmt_double(st / n) << "\n";
    }
  }

  // Per-mode plots: the vertically averaged ROC and the inter-subject
  // scatter. Curves share the fixed threshold grid, so averaging per vertex
  // is well defined.
  for (size_t mi = 0; mi < modes.size(); ++mi) {
    UnitPlot rocp;
    rocp.title = "ROC " + cfg.modes[mi];
    rocp.x_label = "false positive rate";
    rocp.y_label = "true positive rate";
    size_t n_curves = 0;
    for (const ImageResult& r : results) {
      const ModeResult& m = r.per_mode[mi];
      if (m.skipped || m.roc.points.empty()) continue;
      if (rocp.line.empty()) {
        rocp.line.assign(m.roc.points.begin(), m.roc.points.end());
      } else {
        for (size_t k = 0; k < rocp.line.size(); ++k) {
          rocp.line[k].first += m.roc.points[k].first;
          rocp.line[k].second += m.roc.points[k].second;
        }
      }
      ++n_curves;
    }
    for (auto& [x, y] : rocp.line) {
      x /= std::max<size_t>(n_curves, 1);
      y /= std::max<size_t>(n_curves, 1);
    }
    write_unit_plot_svg(
        (fs::path(cfg.out_dir) / ("roc_" + cfg.modes[mi] + ".svg")).string(),
        rocp);

    UnitPlot isp;
    isp.title = "ISROC " + cfg.modes[mi];
    isp.x_label = "inter-subject AUC";
    isp.y_label = "model AUC";
    for (const ImageResult& r : results) {
      const ModeResult& m = r.per_mode[mi];
      if (!m.has_isroc) continue;
      isp.points.emplace_back(m.is.inter_subject_auc, m.is.model_auc);
    }
    isp.line = isp.points;
    std::sort(isp.line.begin(), isp.line.end());
    write_unit_plot_svg(
        (fs::path(cfg.out_dir) / ("isroc_" + cfg.modes[mi] + ".svg")).string(),
        isp);
  }

  for (const ImageResult& r : results) {
    for (size_t mi = 0; mi < modes.size(); ++mi) {
      const ModeResult& m = r.per_mode[mi];
      if (m.skipped) continue;
      std::cout << r.stem << " " << cfg.modes[mi] << " time " << m.time_s
                << " s auc " << m.auc << "\n";
    }
  }
  std::cout << "wrote " << metrics_path.string() << "\n";
  return 0;
}

}  // namespace mdis::tools
