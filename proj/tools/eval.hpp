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

#ifndef MDIS_TOOLS_EVAL_HPP
#define MDIS_TOOLS_EVAL_HPP

#include <string>
#include <vector>

#include "mdis/saliency.hpp"

namespace mdis::tools {

struct EvalConfig {
  std::string images_dir;
  std::string fixations_csv;
  std::string out_dir;
  std::vector<std::string> modes;
  int jobs = 0;  // 0 = logical cores
  double blur_sigma = 8.0;
  SaliencyOptions pipeline;
};

// Batch evaluation: metrics.csv + summary.csv + roc_<mode>.svg +
// isroc_<mode>.svg under out_dir. Returns the process exit status.
int run_eval(const EvalConfig& cfg);

}  // namespace mdis::tools

#endif  // MDIS_TOOLS_EVAL_HPP
