// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text interchange: score files (one float per line) and the two-column
// CSV exports for profiles and trade-off curves.

#ifndef DPAUDIT_IO_HPP_
#define DPAUDIT_IO_HPP_

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpaudit/error.hpp"
#include "dpaudit/profile.hpp"

namespace dpaudit {

// Canonical 12-significant-digit rendering used by every export.
inline std::string FormatNumber(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x);
  return buffer;
}

namespace internal {

inline std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Strict finite-double parse; the whole token must be consumed.
inline bool ParseDouble(const std::string& token, double& out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return errno == 0 && end == token.c_str() + token.size() && std::isfinite(out);
}

}  // namespace internal

inline std::vector<double> ParseScores(std::istream& in,
                                       const std::string& source = "input") {
  std::vector<double> scores;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string token = internal::Trim(line);
    if (token.empty() || token.front() == '#') continue;
    double value = 0.0;
    if (!internal::ParseDouble(token, value)) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": not a finite number: \"" + token + "\"");
    }
    scores.push_back(value);
  }
  return scores;
}

inline std::vector<double> ReadScores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return ParseScores(in, path);
}

inline void WriteScores(const std::string& path, std::span<const double> scores) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (double s : scores) out << FormatNumber(s) << '\n';
  if (!out) throw DataError("write failed for " + path);
}

// Two-column CSV with a fixed header line.
inline std::string FormatCsv(const std::string& header,
                             std::span<const double> first,
                             std::span<const double> second) {
  std::string out = header + "\n";
  for (std::size_t i = 0; i < first.size(); ++i) {
    out += FormatNumber(first[i]);
    out += ',';
    out += FormatNumber(second[i]);
    out += '\n';
  }
  return out;
}

inline std::pair<std::vector<double>, std::vector<double>> ParseCsv(
    std::istream& in, const std::string& expected_header,
    const std::string& source = "input") {
  std::vector<double> first;
  std::vector<double> second;
  std::string line;
  std::size_t line_number = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string row = internal::Trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (!seen_header) {
      if (row != expected_header) {
        throw DataError(source + ": expected header \"" + expected_header + "\"");
      }
      seen_header = true;
      continue;
    }
    const auto comma = row.find(',');
    double a = 0.0;
    double b = 0.0;
    if (comma == std::string::npos ||
        !internal::ParseDouble(internal::Trim(row.substr(0, comma)), a) ||
        !internal::ParseDouble(internal::Trim(row.substr(comma + 1)), b)) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": malformed row \"" + row + "\"");
    }
    first.push_back(a);
    second.push_back(b);
  }
  return {std::move(first), std::move(second)};
}

inline std::string ProfileToCsv(const PrivacyProfile& profile) {
  if (!profile.is_tabulated()) {
    throw DomainError("ProfileToCsv: tabulate the profile first");
  }
  return FormatCsv("epsilon,delta", profile.eps_grid(), profile.delta_values());
}

inline PrivacyProfile ProfileFromCsv(std::istream& in,
                                     const std::string& source = "input") {
  auto [eps, delta] = ParseCsv(in, "epsilon,delta", source);
  if (eps.empty()) throw DataError(source + ": profile has no rows");
  return PrivacyProfile::Tabulated(std::move(eps), std::move(delta));
}

inline void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace dpaudit

#endif  // DPAUDIT_IO_HPP_
