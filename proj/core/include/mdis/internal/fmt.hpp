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

#ifndef MDIS_INTERNAL_FMT_HPP
#define MDIS_INTERNAL_FMT_HPP

#include <charconv>
#include <stdexcept>
#include <string>

namespace mdis::internal {

// Shortest decimal that round-trips the double exactly.
inline std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("float format failure");
  return std::string(buf, end);
}

}  // namespace mdis::internal

#endif  // MDIS_INTERNAL_FMT_HPP
