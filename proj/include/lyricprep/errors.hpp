// Copyright 2026 The lyricprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lyricprep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured-lyrics text that does not match the line grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        detail_(what) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(Join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string Join(const std::vector<std::string>& v) {
    std::string out = "invalid annotation";
    for (const auto& s : v) out += "; " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

// JSON document missing a field or carrying a field of the wrong type.
// `field` is a path such as "segments[0].label"; `line` is 1-based for
// JSON-lines input and 0 otherwise.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what, std::size_t line = 0)
      : Error((line ? "line " + std::to_string(line) + ": " : std::string()) +
              field + ": " + what),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(std::string label)
      : Error("unknown label \"" + label + "\""), label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingGold : public Error {
 public:
  explicit MissingGold(std::vector<std::string> song_ids)
      : Error(Describe(song_ids)), song_ids_(std::move(song_ids)) {}
  const std::vector<std::string>& song_ids() const { return song_ids_; }

 private:
  static std::string Describe(const std::vector<std::string>& ids) {
    std::string out = "no gold annotation for:";
    for (const auto& id : ids) out += " " + id;
    return out;
  }
  std::vector<std::string> song_ids_;
};

}  // namespace lyricprep
