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

#include "lyricprep/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "lyricprep/errors.hpp"

extern char** environ;

namespace lyricprep {

std::string_view to_string(PipelineMode mode) {
  return mode == PipelineMode::kDualHead ? "dual_head" : "with_reference_lyrics";
}

namespace {

const std::set<std::string> kStages = {kOpSeparate, kOpStructure, kOpTranscribe, kOpAlign};

template <typename T>
T Scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": invalid value \"" + node.Scalar() + "\"");
  }
}

void CheckKeys(const YAML::Node& map, const std::string& path, const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError((path.empty() ? "config" : path) + ": expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw ConfigError("unknown config key " + (path.empty() ? key : path + "." + key));
    }
  }
}

std::vector<std::string> StringList(const YAML::Node& node, const std::string& path) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    std::istringstream in(node.Scalar());
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  }
  if (!node.IsSequence()) throw ConfigError(path + ": expected a list");
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(Scalar<std::string>(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

EndpointSpec Endpoint(const YAML::Node& node, const std::string& path) {
  if (node.IsScalar()) {
    try {
      return EndpointSpec::parse(node.Scalar());
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  CheckKeys(node, path, {"type", "command", "url", "seed", "variant", "fail_songs", "sleep_s"});
  EndpointSpec spec;
  const std::string type = node["type"] ? Scalar<std::string>(node["type"], path + ".type") : "mock";
  if (type == "mock") {
    spec.kind = EndpointSpec::Kind::kMock;
    if (node["seed"]) spec.mock.seed = Scalar<std::uint64_t>(node["seed"], path + ".seed");
    if (node["variant"]) spec.mock.variant = Scalar<std::string>(node["variant"], path + ".variant");
    if (node["fail_songs"]) spec.mock.fail_songs = StringList(node["fail_songs"], path + ".fail_songs");
    if (node["sleep_s"]) spec.mock.sleep_s = Scalar<double>(node["sleep_s"], path + ".sleep_s");
  } else if (type == "subprocess") {
    if (!node["command"]) throw ConfigError(path + ".command: required for subprocess backends");
    spec.kind = EndpointSpec::Kind::kSubprocess;
    spec.command = StringList(node["command"], path + ".command");
  } else if (type == "http") {
    if (!node["url"]) throw ConfigError(path + ".url: required for http backends");
    spec.kind = EndpointSpec::Kind::kHttp;
    spec.url = Scalar<std::string>(node["url"], path + ".url");
  } else {
    throw ConfigError(path + ".type: expected mock, subprocess or http");
  }
  return spec;
}

void ApplyOverride(YAML::Node& root, const std::string& var, const std::string& value) {
  std::string rest = var.substr(kEnvPrefix.size());
  std::transform(rest.begin(), rest.end(), rest.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::vector<std::string> path;
  for (std::size_t pos = 0;;) {
    const std::size_t sep = rest.find("__", pos);
    path.push_back(rest.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos));
    if (sep == std::string::npos) break;
    pos = sep + 2;
  }
  if (std::any_of(path.begin(), path.end(), [](const std::string& p) { return p.empty(); })) {
    throw ConfigError("malformed override variable " + var);
  }

  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception&) {
    parsed = YAML::Node(value);
  }
  if (!parsed.IsDefined() || parsed.IsNull()) parsed = YAML::Node(value);

  YAML::Node cur;
  cur.reset(root);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    YAML::Node next = cur[path[i]];
    if (!next.IsDefined() || next.IsNull()) {
      cur[path[i]] = YAML::Node(YAML::NodeType::Map);
      next = cur[path[i]];
    }
    if (!next.IsMap()) throw ConfigError("override " + var + ": " + path[i] + " is not a mapping");
    cur.reset(next);
  }
  cur[path.back()] = parsed;
}

}  // namespace

PipelineConfig load_config(std::string_view yaml_text, const std::map<std::string, std::string>& env) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& [name, value] : env) {
    if (name.rfind(kEnvPrefix, 0) == 0) ApplyOverride(root, name, value);
  }

  CheckKeys(root, "", {"mode", "worker_count", "output_dir", "language_hint", "backends",
                       "label_mapping", "calibration", "werfix", "der"});
  PipelineConfig cfg;

  if (root["mode"]) {
    const auto mode = Scalar<std::string>(root["mode"], "mode");
    if (mode == "with_reference_lyrics") {
      cfg.mode = PipelineMode::kWithReferenceLyrics;
    } else if (mode == "dual_head") {
      cfg.mode = PipelineMode::kDualHead;
    } else {
      throw ConfigError("mode: expected with_reference_lyrics or dual_head");
    }
  }
  if (root["worker_count"]) cfg.worker_count = Scalar<int>(root["worker_count"], "worker_count");
  if (root["output_dir"]) cfg.output_dir = Scalar<std::string>(root["output_dir"], "output_dir");
  if (root["language_hint"]) {
    auto hint = hint_from_string(Scalar<std::string>(root["language_hint"], "language_hint"));
    if (!hint) throw ConfigError("language_hint: expected auto, cjk, latin, zh or en");
    cfg.language_hint = *hint;
  }

  if (const YAML::Node b = root["backends"]) {
    CheckKeys(b, "backends", {"separate", "structure", "transcribe", "align", "timeout_s"});
    if (b["timeout_s"]) cfg.backend_timeout_s = Scalar<double>(b["timeout_s"], "backends.timeout_s");
    for (const std::string& stage : kStages) {
      const YAML::Node n = b[stage];
      if (!n) continue;
      const std::string path = "backends." + stage;
      if (n.IsSequence()) {
        for (std::size_t i = 0; i < n.size(); ++i) {
          cfg.backends[stage].push_back(Endpoint(n[i], path + "[" + std::to_string(i) + "]"));
        }
      } else {
        cfg.backends[stage].push_back(Endpoint(n, path));
      }
    }
  }

  if (const YAML::Node m = root["label_mapping"]) {
    if (!m.IsMap()) throw ConfigError("label_mapping: expected a mapping");
    cfg.label_mapping.entries.clear();
    for (const auto& kv : m) {
      const auto source = kv.first.as<std::string>();
      const auto target = Scalar<std::string>(kv.second, "label_mapping." + source);
      auto label = label_from_string(target);
      if (!label) throw ConfigError("label_mapping." + source + ": unknown label \"" + target + "\"");
      cfg.label_mapping.entries[source] = *label;
    }
  }

  if (const YAML::Node c = root["calibration"]) {
    CheckKeys(c, "calibration", {"min_vocal_coverage", "min_gap_s", "pad_s"});
    if (c["min_vocal_coverage"]) {
      cfg.calibration.min_vocal_coverage = Scalar<double>(c["min_vocal_coverage"], "calibration.min_vocal_coverage");
    }
    if (c["min_gap_s"]) cfg.calibration.min_gap_s = Scalar<double>(c["min_gap_s"], "calibration.min_gap_s");
    if (c["pad_s"]) cfg.calibration.pad_s = Scalar<double>(c["pad_s"], "calibration.pad_s");
  }

  if (const YAML::Node w = root["werfix"]) {
    CheckKeys(w, "werfix", {"reject_threshold", "accept_threshold", "filter_max_wer"});
    if (w["reject_threshold"]) cfg.reject_threshold = Scalar<double>(w["reject_threshold"], "werfix.reject_threshold");
    if (w["accept_threshold"]) cfg.accept_threshold = Scalar<double>(w["accept_threshold"], "werfix.accept_threshold");
    if (w["filter_max_wer"]) cfg.filter_max_wer = Scalar<double>(w["filter_max_wer"], "werfix.filter_max_wer");
  }

  if (const YAML::Node d = root["der"]) {
    CheckKeys(d, "der", {"collar_s", "score_silence"});
    if (d["collar_s"]) cfg.der.collar_s = Scalar<double>(d["collar_s"], "der.collar_s");
    if (d["score_silence"]) cfg.der.score_silence = Scalar<bool>(d["score_silence"], "der.score_silence");
  }

  validate_config(cfg);
  return cfg;
}

void validate_config(const PipelineConfig& cfg) {
  for (const std::string& stage : kStages) {
    auto it = cfg.backends.find(stage);
    if (it == cfg.backends.end() || it->second.empty()) {
      throw ConfigError("backends." + stage + ": no endpoint configured");
    }
    const std::size_t max = stage == kOpTranscribe ? 2 : 1;
    if (it->second.size() > max) {
      throw ConfigError("backends." + stage + ": at most " + std::to_string(max) + " endpoint(s)");
    }
  }
  if (cfg.mode == PipelineMode::kDualHead && cfg.backends.at(kOpTranscribe).size() != 2) {
    throw ConfigError("backends.transcribe: dual_head mode needs two heads");
  }
  if (cfg.worker_count < 1) throw ConfigError("worker_count: must be positive");
  if (!(cfg.backend_timeout_s > 0.0)) throw ConfigError("backends.timeout_s: must be positive");
  if (!(cfg.der.collar_s >= 0.0)) throw ConfigError("der.collar_s: must be non-negative");
  if (!(cfg.reject_threshold >= 0.0)) throw ConfigError("werfix.reject_threshold: must be non-negative");
  if (!(cfg.accept_threshold >= 0.0)) throw ConfigError("werfix.accept_threshold: must be non-negative");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  try {
    validate_params(cfg.calibration);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return load_config(text.str(), process_environment());
}

}  // namespace lyricprep
