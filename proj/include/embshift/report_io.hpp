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

#ifndef EMBSHIFT_REPORT_IO_HPP_
#define EMBSHIFT_REPORT_IO_HPP_

#include <string>

#include "embshift/types.hpp"

namespace embshift::io {

// Formats a real with 9 significant digits (printf %.9g); the one number
// format used in every CSV this toolkit emits.
std::string format_real(double v);

// Writes `dataset,embedder,kind,value,metric,score` with rows sorted by
// (dataset, embedder, kind name, value, metric). Output bytes are a pure
// function of the report contents.
void write_report_csv(const ShiftReport& report, const std::string& path);

// Writes `kind,value,message` rows for the failure log, sorted the same way.
void write_failures_csv(const ShiftReport& report, const std::string& path);

// Parses a file produced by write_report_csv. Failure rows are not part of
// the report CSV, so the result has an empty failure list.
ShiftReport read_report_csv(const std::string& path);

}  // namespace embshift::io

#endif  // EMBSHIFT_REPORT_IO_HPP_
