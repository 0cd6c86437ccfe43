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

#ifndef MDIS_ERRORS_HPP
#define MDIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mdis {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File does not exist or cannot be opened for reading.
class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path) {}
};

// The file exists but is not one of the formats we read.
class UnsupportedFormatError : public Error {
 public:
  explicit UnsupportedFormatError(const std::string& what) : Error(what) {}
};

// The file claims a supported format but its contents are broken.
class CorruptDataError : public Error {
 public:
  explicit CorruptDataError(const std::string& what) : Error(what) {}
};

}  // namespace mdis

#endif  // MDIS_ERRORS_HPP
