// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embshift/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "embshift/errors.hpp"

namespace embshift::io {

namespace {

auto row_key(const ReportRow& r) {
  return std::make_tuple(r.dataset, r.embedder, std::string(to_string(r.kind)),
                         r.value, r.metric);
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_report_csv(const ShiftReport& report, const std::string& path) {
  std::vector<ReportRow> rows = report.rows;
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a,
                                         const ReportRow& b) {
    return row_key(a) < row_key(b);
  });

  std::ostringstream out;
  out << "dataset,embedder,kind,value,metric,score\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.embedder << ',' << to_string(r.kind) << ','
        << format_real(r.value) << ',' << r.metric << ','
        << format_real(r.score) << '\n';
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  const std::string s = out.str();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw IoFailure("short write to '" + path + "'");
}

void write_failures_csv(const ShiftReport& report, const std::string& path) {
  std::vector<FailureRow> rows = report.failures;
  std::sort(rows.begin(), rows.end(), [](const FailureRow& a,
                                         const FailureRow& b) {
    return std::make_tuple(std::string(to_string(a.kind)), a.value, a.message) <
           std::make_tuple(std::string(to_string(b.kind)), b.value, b.message);
  });

  std::ostringstream out;
  out << "kind,value,message\n";
  for (const auto& r : rows) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << to_string(r.kind) << ',' << format_real(r.value) << ',' << msg
        << '\n';
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  const std::string s = out.str();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw IoFailure("short write to '" + path + "'");
}

ShiftReport read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CorruptFile("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "dataset,embedder,kind,value,metric,score") {
    throw CorruptFile("'" + path + "': unexpected header '" + line + "'");
  }

  ShiftReport report;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream ss(line);
    std::string f[6];
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ss, f[i], ',')) {
        throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                          ": expected 6 fields");
      }
    }
    std::string extra;
    if (std::getline(ss, extra, ',')) {
      throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                        ": too many fields");
    }
    ReportRow row;
    row.dataset = f[0];
    row.embedder = f[1];
    row.kind = perturbation_kind_from_string(f[2]);
    try {
      row.value = std::stod(f[3]);
      row.score = std::stod(f[5]);
    } catch (const std::exception&) {
      throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                        ": bad number");
    }
    row.metric = f[4];
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace embshift::io
