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

#ifndef EMBSHIFT_EMBEDDING_IO_HPP_
#define EMBSHIFT_EMBEDDING_IO_HPP_

#include <string>

#include "embshift/types.hpp"

namespace embshift::io {

// EMB1 binary layout: magic "EMB1", then n and d as unsigned 32-bit
// little-endian, then n*d float32 little-endian values in row-major order.
// Clip ids live in a JSON sidecar holding an array of n strings.

// Throws BadMagic, LengthMismatch (payload size vs n*d), SidecarMismatch
// (sidecar id count vs n).
EmbeddingSet read_embeddings(const std::string& path,
                             const std::string& sidecar_path);

// Writes the EMB1 file and its JSON id sidecar. Values are rounded to
// float32.
void write_embeddings(const EmbeddingSet& set, const std::string& path,
                      const std::string& sidecar_path);

// Sidecar naming convention used by the CLI: "<path>.json".
std::string default_sidecar_path(const std::string& emb_path);

// Convenience converter for externally computed embeddings. Each line is
// `id,v0,v1,...,v{d-1}`; no header.
EmbeddingSet read_embeddings_csv(const std::string& path);

}  // namespace embshift::io

#endif  // EMBSHIFT_EMBEDDING_IO_HPP_
