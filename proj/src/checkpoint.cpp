// Copyright 2026 The LRD Authors. All rights reserved.
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

#include "lrd/model.hpp"

#include <cstring>
#include <map>

namespace lrd {

namespace {

constexpr char kMagic[4] = {'L', 'R', 'D', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kF32 = 0, kF64 = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& buf, const std::string& path) : buf_(buf), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  template <typename T>
  T scalar() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw Error(ErrorKind::Parse, path_ + ": truncated checkpoint");
  }
  const std::string& buf_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const ParamStore& params, const std::string& path) {
  std::string out(kMagic, 4);
  put_u32(out, kVersion);
  const auto views = const_cast<ParamStore&>(params).views();
  put_u32(out, static_cast<std::uint32_t>(views.size()));
  for (const auto& t : views) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.append(t.name);
    put_u32(out, static_cast<std::uint32_t>(t.rows));
    put_u32(out, static_cast<std::uint32_t>(t.cols));
    put_u32(out, kF64);
    out.append(reinterpret_cast<const char*>(t.data), static_cast<std::size_t>(t.size()) * sizeof(double));
  }
  write_file_atomic(path, out);
}

ParamStore load_checkpoint(const std::string& path) {
  const std::string buf = read_file(path);
  Reader in(buf, path);
  if (in.bytes(4) != std::string(kMagic, 4)) throw Error(ErrorKind::Parse, path + ": not an LRDC checkpoint");
  if (const auto v = in.u32(); v != kVersion) {
    throw Error(ErrorKind::Parse, path + ": unsupported checkpoint version " + std::to_string(v));
  }
  ParamStore p;
  std::map<std::string, std::function<Real*(Eigen::Index, Eigen::Index)>> slots;
  auto mat = [&](const char* name, Matrix& m) {
    slots[name] = [&m](Eigen::Index r, Eigen::Index c) { m.resize(r, c); return m.data(); };
  };
  auto vec = [&](const char* name, Vector& v) {
    slots[name] = [&v, name](Eigen::Index r, Eigen::Index c) {
      if (c != 1) throw Error(ErrorKind::Parse, std::string("checkpoint tensor ") + name + " must be a vector");
      v.resize(r);
      return v.data();
    };
  };
  mat("user", p.user);
  mat("item", p.item);
  vec("item_bias", p.item_bias);
  mat("relation", p.relation);
  mat("proj_weight", p.projection.weight);
  vec("proj_bias", p.projection.bias);
  mat("cls_weight", p.cls_weight);
  vec("cls_bias", p.cls_bias);
  mat("att_weight", p.att_weight);
  vec("att_vector", p.att_vector);

  const std::uint32_t count = in.u32();
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::string name = in.bytes(in.u32());
    const Eigen::Index rows = in.u32(), cols = in.u32();
    const std::uint32_t dtype = in.u32();
    auto it = slots.find(name);
    if (it == slots.end()) throw Error(ErrorKind::Parse, path + ": unknown tensor '" + name + "'");
    Real* dst = it->second(rows, cols);
    for (Eigen::Index i = 0; i < rows * cols; ++i) {
      if (dtype == kF64) {
        dst[i] = in.scalar<double>();
      } else if (dtype == kF32) {
        dst[i] = in.scalar<float>();
      } else {
        throw Error(ErrorKind::Parse, path + ": unknown dtype for '" + name + "'");
      }
    }
  }
  if (!in.done()) throw Error(ErrorKind::Parse, path + ": trailing bytes after tensors");
  if (p.item.rows() == 0 || p.relation.rows() == 0) throw Error(ErrorKind::Parse, path + ": missing tensors");
  if (!p.all_finite()) throw Error(ErrorKind::Numeric, path + ": non-finite parameter");
  return p;
}

}  // namespace lrd
