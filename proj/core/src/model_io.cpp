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

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "mdis/errors.hpp"
#include "mdis/hmt.hpp"
#include "mdis/internal/fmt.hpp"

namespace mdis {

namespace {

using internal::fmt_double;

using KvMap = std::map<std::string, std::string>;

double kv_double(const KvMap& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw CorruptDataError("model file: missing key " + key);
  const std::string& s = it->second;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CorruptDataError("model file: bad value for " + key);
  }
  return v;
}

void write_common(std::ostream& out, int levels,
                  const std::vector<Transition>& transition,
                  const std::array<double, 2>& root) {
  out << "levels=" << levels << "\n";
  for (int j = 1; j <= levels; ++j) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out << "A." << j << "." << r << c << "="
            << fmt_double(transition[j - 1][2 * r + c]) << "\n";
      }
    }
  }
  out << "p1.S=" << fmt_double(root[0]) << "\n";
  out << "p1.L=" << fmt_double(root[1]) << "\n";
}

void read_common(const KvMap& kv, int levels,
                 std::vector<Transition>* transition,
                 std::array<double, 2>* root) {
  transition->resize(levels);
  for (int j = 1; j <= levels; ++j) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        std::ostringstream key;
        key << "A." << j << "." << r << c;
        (*transition)[j - 1][2 * r + c] = kv_double(kv, key.str());
      }
    }
  }
  (*root)[0] = kv_double(kv, "p1.S");
  (*root)[1] = kv_double(kv, "p1.L");
}

std::string cov_key(const char* name, int j, int r, int c) {
  std::ostringstream key;
  key << name << "." << j << "." << r << c;
  return key.str();
}

}  // namespace

void save_model(const std::string& path, const HmtModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (const auto* s = std::get_if<ScalarHmtParams>(&model)) {
    s->validate();
    write_common(out, s->levels, s->transition, s->root);
    for (int j = 1; j <= s->levels; ++j) {
      out << "sigma2_S." << j << "=" << fmt_double(s->sigma2_S[j - 1]) << "\n";
      out << "sigma2_L." << j << "=" << fmt_double(s->sigma2_L[j - 1]) << "\n";
    }
  } else {
    const auto& v = std::get<VectorHmtParams>(model);
    v.validate();
    write_common(out, v.levels, v.transition, v.root);
    for (int j = 1; j <= v.levels; ++j) {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          out << cov_key("C_S", j, r, c) << "="
              << fmt_double(v.cov_S[j - 1].at(r, c)) << "\n";
          out << cov_key("C_L", j, r, c) << "="
              << fmt_double(v.cov_L[j - 1].at(r, c)) << "\n";
        }
      }
    }
  }
  if (!out) throw Error("write failed: " + path);
}

HmtModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  KvMap kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CorruptDataError("model file: expected key=value, got '" + line + "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  int levels = static_cast<int>(std::lround(kv_double(kv, "levels")));
  if (levels < 1 || levels > 32) throw CorruptDataError("model file: bad levels");

  bool vector_kind = kv.count("C_S.1.00") > 0;
  if (vector_kind) {
    VectorHmtParams v;
    v.levels = levels;
    read_common(kv, levels, &v.transition, &v.root);
    v.cov_S.resize(levels);
    v.cov_L.resize(levels);
    for (int j = 1; j <= levels; ++j) {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          v.cov_S[j - 1].at(r, c) = kv_double(kv, cov_key("C_S", j, r, c));
          v.cov_L[j - 1].at(r, c) = kv_double(kv, cov_key("C_L", j, r, c));
        }
      }
    }
    v.validate();
    return v;
  }

  ScalarHmtParams s;
  s.levels = levels;
  read_common(kv, levels, &s.transition, &s.root);
  s.sigma2_S.resize(levels);
  s.sigma2_L.resize(levels);
  for (int j = 1; j <= levels; ++j) {
    s.sigma2_S[j - 1] = kv_double(kv, "sigma2_S." + std::to_string(j));
    s.sigma2_L[j - 1] = kv_double(kv, "sigma2_L." + std::to_string(j));
  }
  s.validate();
  return s;
}

}  // namespace mdis
