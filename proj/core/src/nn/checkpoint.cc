// Copyright 2026 The SLID Authors
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

#include "slid/nn/checkpoint.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "slid/binary_io.h"
#include "slid/error.h"

namespace slid::nn {
namespace {

[[noreturn]] void Malformed(const std::filesystem::path& path,
                            const std::string& why) {
  throw Error(ErrorCode::kParse, path.string() + ": " + why);
}

std::string ExpectField(std::istream& in, const std::filesystem::path& path,
                        const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) Malformed(path, "missing '" + key + "' line");
  if (line.rfind(key + " ", 0) != 0) {
    Malformed(path, "expected '" + key + "', got '" + line.substr(0, 40) + "'");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

std::string Fingerprint(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const auto config = nlohmann::json::parse(ckpt.config_json);
  out << "SLID-CHECKPOINT " << kCheckpointVersion << '\n';
  out << "kind " << ckpt.kind << '\n';
  out << "fingerprint " << ckpt.fingerprint << '\n';
  out << "config " << config.dump() << '\n';
  out << "charset " << nlohmann::json(ckpt.charset).dump() << '\n';
  for (const auto& [name, t] : ckpt.tensors) {
    out << "tensor " << name << ' ' << t.rank();
    for (std::size_t d : t.shape()) out << ' ' << d;
    out << '\n';
  }
  out << "data\n";
  for (const auto& [name, t] : ckpt.tensors) {
    for (double v : t.values()) io::WriteF32(out, static_cast<float>(v));
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  Checkpoint ckpt;
  const std::string version = ExpectField(in, path, "SLID-CHECKPOINT");
  if (version != std::to_string(kCheckpointVersion)) {
    Malformed(path, "unsupported checkpoint version " + version);
  }
  ckpt.kind = ExpectField(in, path, "kind");
  ckpt.fingerprint = ExpectField(in, path, "fingerprint");
  try {
    ckpt.config_json = nlohmann::json::parse(ExpectField(in, path, "config")).dump();
    ckpt.charset = nlohmann::json::parse(ExpectField(in, path, "charset"))
                       .get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    Malformed(path, std::string("invalid header JSON: ") + e.what());
  }
  std::string line;
  while (std::getline(in, line) && line != "data") {
    std::istringstream fields(line);
    std::string tag, name;
    std::size_t rank = 0;
    if (!(fields >> tag >> name >> rank) || tag != "tensor") {
      Malformed(path, "bad tensor line '" + line + "'");
    }
    Shape shape(rank);
    for (std::size_t& d : shape) {
      if (!(fields >> d)) Malformed(path, "bad tensor dims in '" + line + "'");
    }
    ckpt.tensors.emplace_back(name, Tensor(shape));
  }
  if (line != "data") Malformed(path, "missing data section");
  for (auto& [name, t] : ckpt.tensors) {
    for (double& v : t.values()) v = io::ReadF32(in);
  }
  return ckpt;
}

std::vector<std::pair<std::string, Tensor>> ExportParameters(
    const ParameterList& params) {
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(params.size());
  for (const Parameter* p : params) out.emplace_back(p->name, p->value);
  return out;
}

void ImportParameters(const std::vector<std::pair<std::string, Tensor>>& tensors,
                      const ParameterList& params) {
  std::map<std::string, const Tensor*> by_name;
  for (const auto& [name, t] : tensors) by_name[name] = &t;
  for (Parameter* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "checkpoint has no tensor named " + p->name);
    }
    CheckShape(p->name, p->value.shape(), it->second->shape());
    p->value = *it->second;
  }
}

void RoundToFloat(const ParameterList& params) {
  for (Parameter* p : params) {
    for (double& v : p->value.values()) v = static_cast<float>(v);
  }
}

}  // namespace slid::nn
