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

#ifndef EMBSHIFT_MANIFEST_IO_HPP_
#define EMBSHIFT_MANIFEST_IO_HPP_

#include <string>

#include "embshift/types.hpp"

namespace embshift::io {

// Manifest JSON schema (unknown keys are rejected):
// {
//   "name": "us8k-mini",
//   "label_mode": "none" | "single" | "multi",
//   "classes": ["dog", "siren"],              // required unless "none"
//   "clips": [
//     {"id": "c1", "path": "audio/c1.wav", "label": 0, "fold": 2},   // single
//     {"id": "c2", "path": "audio/c2.wav", "labels": [1, 0]}         // multi
//   ]
// }
// "path" may be omitted for ingest-only datasets; "fold" is optional.
DatasetManifest read_manifest(const std::string& path);

void write_manifest(const DatasetManifest& manifest, const std::string& path);

}  // namespace embshift::io

#endif  // EMBSHIFT_MANIFEST_IO_HPP_
