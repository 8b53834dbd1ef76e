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

#include "embshift/manifest_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "embshift/errors.hpp"

namespace embshift::io {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CorruptFile("'" + path + "': " + e.what());
  }
}

}  // namespace

DatasetManifest read_manifest(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object()) throw CorruptFile("'" + path + "' must be a JSON object");
  reject_unknown_keys(j, {"name", "label_mode", "classes", "clips"}, path);

  DatasetManifest m;
  m.name = j.value("name", std::string("dataset"));

  const std::string mode = j.value("label_mode", std::string("none"));
  if (mode == "none") {
    m.label_mode = LabelMode::None;
  } else if (mode == "single") {
    m.label_mode = LabelMode::SingleLabel;
  } else if (mode == "multi") {
    m.label_mode = LabelMode::MultiLabel;
  } else {
    throw ConfigError(path + ": label_mode must be none|single|multi");
  }

  if (j.contains("classes")) {
    for (const auto& c : j.at("classes")) {
      m.classes.push_back(c.get<std::string>());
    }
  }
  if (m.label_mode != LabelMode::None && m.classes.empty()) {
    throw ConfigError(path + ": labelled manifests need a classes list");
  }

  if (!j.contains("clips") || !j.at("clips").is_array()) {
    throw ConfigError(path + ": missing clips array");
  }
  for (const auto& c : j.at("clips")) {
    reject_unknown_keys(c, {"id", "path", "label", "labels", "fold"}, path);
    ManifestClip clip;
    clip.id = c.at("id").get<std::string>();
    clip.audio_path = c.value("path", std::string());
    if (c.contains("fold")) m.folds[clip.id] = c.at("fold").get<int>();
    if (m.label_mode == LabelMode::SingleLabel) {
      if (!c.contains("label")) {
        throw ConfigError(path + ": clip '" + clip.id + "' has no label");
      }
      m.single_labels[clip.id] = c.at("label").get<int>();
    } else if (m.label_mode == LabelMode::MultiLabel) {
      if (!c.contains("labels")) {
        throw ConfigError(path + ": clip '" + clip.id + "' has no labels");
      }
      std::vector<std::uint8_t> vec;
      for (const auto& v : c.at("labels")) {
        const int b = v.get<int>();
        if (b != 0 && b != 1) {
          throw ConfigError(path + ": labels must be 0 or 1");
        }
        vec.push_back(static_cast<std::uint8_t>(b));
      }
      m.multi_labels[clip.id] = std::move(vec);
    }
    m.clips.push_back(std::move(clip));
  }

  m.validate();
  return m;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  manifest.validate();
  json j;
  j["name"] = manifest.name;
  j["label_mode"] = to_string(manifest.label_mode);
  if (!manifest.classes.empty()) j["classes"] = manifest.classes;
  json clips = json::array();
  for (const auto& clip : manifest.clips) {
    json c;
    c["id"] = clip.id;
    if (!clip.audio_path.empty()) c["path"] = clip.audio_path;
    if (manifest.label_mode == LabelMode::SingleLabel) {
      c["label"] = manifest.single_labels.at(clip.id);
    } else if (manifest.label_mode == LabelMode::MultiLabel) {
      c["labels"] = manifest.multi_labels.at(clip.id);
    }
    auto fold = manifest.folds.find(clip.id);
    if (fold != manifest.folds.end()) c["fold"] = fold->second;
    clips.push_back(std::move(c));
  }
  j["clips"] = std::move(clips);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoFailure("short write to '" + path + "'");
}

}  // namespace embshift::io
