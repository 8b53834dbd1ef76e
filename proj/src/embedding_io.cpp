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

#include "embshift/embedding_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "embshift/errors.hpp"

namespace embshift::io {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

EmbeddingSet read_embeddings(const std::string& path,
                             const std::string& sidecar_path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw BadMagic("'" + path + "' is not an EMB1 file");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t n = read_u32le(p + 4);
  const std::uint32_t d = read_u32le(p + 8);
  const std::size_t expected =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(d) * 4;
  if (bytes.size() - 12 != expected) {
    throw LengthMismatch("'" + path + "': payload is " +
                         std::to_string(bytes.size() - 12) + " bytes, header " +
                         "implies " + std::to_string(expected));
  }

  EmbeddingSet set;
  set.vectors.resize(n, d);
  const unsigned char* payload = p + 12;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      const std::uint32_t bits = read_u32le(payload + 4 * (i * d + j));
      float f;
      std::memcpy(&f, &bits, sizeof(f));
      set.vectors(i, j) = static_cast<double>(f);
    }
  }

  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_file(sidecar_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptFile("sidecar '" + sidecar_path + "': " + e.what());
  }
  if (!sidecar.is_array()) {
    throw CorruptFile("sidecar '" + sidecar_path + "' must be a JSON array");
  }
  if (sidecar.size() != n) {
    throw SidecarMismatch("sidecar '" + sidecar_path + "' has " +
                          std::to_string(sidecar.size()) + " ids for n=" +
                          std::to_string(n));
  }
  set.clip_ids.reserve(n);
  for (const auto& id : sidecar) {
    if (!id.is_string()) {
      throw CorruptFile("sidecar '" + sidecar_path + "': non-string id");
    }
    set.clip_ids.push_back(id.get<std::string>());
  }
  set.validate();
  return set;
}

void write_embeddings(const EmbeddingSet& set, const std::string& path,
                      const std::string& sidecar_path) {
  set.validate();
  const auto n = static_cast<std::uint32_t>(set.size());
  const auto d = static_cast<std::uint32_t>(set.dim());

  std::string out;
  out.reserve(12 + static_cast<std::size_t>(n) * d * 4);
  out.append(kMagic, 4);
  for (std::uint32_t v : {n, d}) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      const float f = static_cast<float>(set.vectors(i, j));
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof(bits));
      out.push_back(static_cast<char>(bits & 0xff));
      out.push_back(static_cast<char>((bits >> 8) & 0xff));
      out.push_back(static_cast<char>((bits >> 16) & 0xff));
      out.push_back(static_cast<char>((bits >> 24) & 0xff));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoFailure("short write to '" + path + "'");

  nlohmann::json ids = nlohmann::json::array();
  for (const auto& id : set.clip_ids) ids.push_back(id);
  std::ofstream s(sidecar_path, std::ios::binary | std::ios::trunc);
  if (!s) throw IoFailure("cannot open '" + sidecar_path + "' for writing");
  s << ids.dump() << "\n";
  if (!s) throw IoFailure("short write to '" + sidecar_path + "'");
}

std::string default_sidecar_path(const std::string& emb_path) {
  return emb_path + ".json";
}

EmbeddingSet read_embeddings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");

  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream ss(line);
    std::string field;
    if (!std::getline(ss, field, ',')) {
      throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                        ": missing id");
    }
    ids.push_back(field);
    std::vector<double> row;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                          ": bad number '" + field + "'");
      }
    }
    if (row.empty()) {
      throw CorruptFile("'" + path + "' line " + std::to_string(lineno) +
                        ": no values");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw LengthMismatch("'" + path + "' line " + std::to_string(lineno) +
                           ": expected " + std::to_string(rows.front().size()) +
                           " values, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CorruptFile("'" + path + "' has no rows");

  EmbeddingSet set;
  set.clip_ids = std::move(ids);
  set.vectors.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      set.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  set.validate();
  return set;
}

}  // namespace embshift::io
