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

#ifndef MDIS_TOOLS_MINICORPUS_HPP
#define MDIS_TOOLS_MINICORPUS_HPP

#include <string>

namespace mdis::tools {

// Writes the bundled five-image smoke-test corpus: synthetic scenes with
// textured regions on smooth backgrounds plus a fixations.csv whose
// synthetic subjects look mostly at the textured regions. Deterministic
// given the seed. Returns the fixation CSV path.
std::string write_minicorpus(const std::string& out_dir, unsigned seed = 7);

}  // namespace mdis::tools

#endif  // MDIS_TOOLS_MINICORPUS_HPP
