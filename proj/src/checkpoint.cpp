// Copyright 2026 The TableReader Authors. All Rights Reserved.
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

#include "tablereader/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tablereader::training {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void f64s(const std::vector<double>& v) { bytes(v.data(), v.size() * sizeof(double)); }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& in, std::size_t end) : in_(in), end_(end) {}
  void bytes(void* p, std::size_t n) {
    if (pos_ + n > end_) throw FormatError("checkpoint truncated");
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  void f64s(std::vector<double>& v) { bytes(v.data(), v.size() * sizeof(double)); }
  bool done() const { return pos_ == end_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

json history_to_json(const std::vector<EpochRecord>& history) {
  json arr = json::array();
  for (const auto& r : history)
    arr.push_back({{"epoch", r.epoch},
                   {"phase", r.phase},
                   {"lr", r.lr},
                   {"train_loss", r.train_loss},
                   {"validation_loss", r.validation_loss}});
  return arr;
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& cp) {
  json header{{"spec", cp.spec.to_json()},
              {"config", cp.config.to_json()},
              {"epoch", cp.epoch},
              {"history", history_to_json(cp.history)},
              {"layers", json::array()}};
  for (const auto& l : cp.weights.layers)
    header["layers"].push_back({{"name", l.name}, {"size", l.values.size()}});
  const std::string text = header.dump();

  Writer w;
  w.bytes(kCheckpointMagic, 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text.data(), text.size());
  for (const auto& l : cp.weights.layers) w.f64s(l.values);
  for (const auto& l : cp.weights.layers) {
    if (l.velocity.size() == l.values.size()) w.f64s(l.velocity);
    else w.f64s(std::vector<double>(l.values.size(), 0.0));
  }
  w.u32(crc_of(w.data().data(), w.data().size()));
  return std::move(w.data());
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0)
    throw FormatError("not a checkpoint (bad magic bytes)");
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
  if (crc_of(bytes.data(), bytes.size() - 4) != stored_crc)
    throw FormatError("checkpoint checksum mismatch");

  Reader r(bytes, bytes.size() - 4);
  char magic[4];
  r.bytes(magic, 4);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  std::string text(r.u32(), '\0');
  r.bytes(text.data(), text.size());

  Checkpoint cp;
  try {
    const json header = json::parse(text);
    cp.spec = NetworkSpec::from_json(header.at("spec"));
    cp.config = TrainConfig::from_json(header.at("config"));
    cp.epoch = header.at("epoch").get<int>();
    for (const auto& h : header.at("history"))
      cp.history.push_back({h.at("epoch").get<int>(), h.at("phase").get<std::string>(),
                            h.at("lr").get<double>(), h.at("train_loss").get<double>(),
                            h.at("validation_loss").get<double>()});
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }

  // Array sizes follow from the descriptor alone.
  cp.weights = Network(cp.spec).initialize();
  for (auto& l : cp.weights.layers) r.f64s(l.values);
  for (auto& l : cp.weights.layers) r.f64s(l.velocity);
  if (!r.done()) throw FormatError("checkpoint has trailing bytes");
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(cp);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write on checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace tablereader::training
