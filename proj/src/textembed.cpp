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

#include "lrd/textembed.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lrd {

Vector project(const Vector& raw, const Projection& p) {
  if (raw.size() != p.weight.rows() || p.bias.size() != p.weight.cols()) {
    throw Error(ErrorKind::Validation, "project: shape mismatch (input " + std::to_string(raw.size()) +
                                           ", weight " + std::to_string(p.weight.rows()) + "x" +
                                           std::to_string(p.weight.cols()) + ")");
  }
  return p.weight.transpose() * raw + p.bias;
}

namespace {

void check_finite(const Matrix& m, const std::string& path) {
  if (!m.allFinite()) throw Error(ErrorKind::Data, path + ": non-finite embedding value");
}

}  // namespace

EmbeddingTable load_embedding_text(const std::string& path, const IdMap* items) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  long long count = 0, dim = 0;
  if (!(in >> count >> dim) || count < 0 || dim < 1) {
    throw Error(ErrorKind::Parse, path + ": bad header, expected '<count> <d_L>'");
  }
  const Eigen::Index rows = items ? items->size() : static_cast<Eigen::Index>(count);
  EmbeddingTable table{Matrix::Zero(rows, dim)};
  std::vector<char> seen(static_cast<std::size_t>(rows), 0);
  std::string line;
  std::getline(in, line);
  long long read = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    Eigen::Index row = -1;
    if (items) {
      if (auto idx = items->find(key)) row = *idx;
    } else {
      try {
        std::size_t used = 0;
        row = std::stoll(key, &used);
        if (used != key.size()) row = -1;
      } catch (const std::exception&) {
        row = -1;
      }
      if (row >= rows) row = -1;
    }
    if (row < 0) throw Error(ErrorKind::Data, path + ": unknown item id '" + key + "'");
    for (long long k = 0; k < dim; ++k) {
      double v = 0;
      if (!(ss >> v)) {
        throw Error(ErrorKind::Data, path + ": item '" + key + "' has fewer than " +
                                         std::to_string(dim) + " values");
      }
      table.vectors(row, k) = v;
    }
    double extra = 0;
    if (ss >> extra) {
      throw Error(ErrorKind::Data, path + ": item '" + key + "' has more than " +
                                       std::to_string(dim) + " values");
    }
    seen[static_cast<std::size_t>(row)] = 1;
    ++read;
  }
  if (read != count) {
    throw Error(ErrorKind::Data, path + ": header declares " + std::to_string(count) + " rows, found " +
                                     std::to_string(read));
  }
  std::string missing;
  int shown = 0, absent = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    ++absent;
    if (shown++ < 10) missing += " " + (items ? items->name(static_cast<std::int32_t>(i)) : std::to_string(i));
  }
  if (absent > 0) {
    throw Error(ErrorKind::Data, path + ": " + std::to_string(absent) + " item(s) without a vector:" + missing);
  }
  check_finite(table.vectors, path);
  return table;
}

void save_embedding_text(const EmbeddingTable& table, const std::string& path, const IdMap* items) {
  std::ostringstream out;
  out.precision(17);
  out << table.size() << ' ' << table.dim() << '\n';
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    out << (items ? items->name(static_cast<std::int32_t>(i)) : std::to_string(i));
    for (Eigen::Index k = 0; k < table.dim(); ++k) out << ' ' << table.vectors(i, k);
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

namespace {

constexpr char kEmbeddingMagic[4] = {'L', 'R', 'D', 'E'};

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t read_u32(const std::string& buf, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[offset + i])) << (8 * i);
  return v;
}

}  // namespace

void save_embedding_binary(const EmbeddingTable& table, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "binary embedding I/O assumes little-endian");
  std::string out(kEmbeddingMagic, 4);
  append_u32(out, static_cast<std::uint32_t>(table.size()));
  append_u32(out, static_cast<std::uint32_t>(table.dim()));
  out.reserve(out.size() + static_cast<std::size_t>(table.vectors.size()) * sizeof(float));
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    for (Eigen::Index k = 0; k < table.dim(); ++k) {
      const float f = static_cast<float>(table.vectors(i, k));
      char bytes[sizeof(float)];
      std::memcpy(bytes, &f, sizeof(float));
      out.append(bytes, sizeof(float));
    }
  }
  write_file_atomic(path, out);
}

EmbeddingTable load_embedding_binary(const std::string& path) {
  const std::string buf = read_file(path);
  if (buf.size() < 12 || std::memcmp(buf.data(), kEmbeddingMagic, 4) != 0) {
    throw Error(ErrorKind::Parse, path + ": not an LRDE embedding file");
  }
  const std::uint32_t count = read_u32(buf, 4), dim = read_u32(buf, 8);
  const std::size_t expected = 12 + static_cast<std::size_t>(count) * dim * sizeof(float);
  if (buf.size() != expected) {
    throw Error(ErrorKind::Data, path + ": payload size " + std::to_string(buf.size()) +
                                     " does not match header (" + std::to_string(expected) + ")");
  }
  EmbeddingTable table{Matrix(count, dim)};
  const char* p = buf.data() + 12;
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::uint32_t k = 0; k < dim; ++k, p += sizeof(float)) {
      float f = 0;
      std::memcpy(&f, p, sizeof(float));
      table.vectors(i, k) = f;
    }
  }
  check_finite(table.vectors, path);
  return table;
}

EmbeddingTable load_embedding_file(const std::string& path, const IdMap* items) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kEmbeddingMagic, 4) == 0) {
    auto table = load_embedding_binary(path);
    if (items && table.size() != items->size()) {
      throw Error(ErrorKind::Data, path + ": " + std::to_string(table.size()) + " rows for " +
                                       std::to_string(items->size()) + " items");
    }
    return table;
  }
  return load_embedding_text(path, items);
}

HashTextEncoder::HashTextEncoder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 1) throw Error(ErrorKind::Validation, "text encoder dimension must be >= 1");
}

std::vector<std::string> HashTextEncoder::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

const Vector& HashTextEncoder::token_vector(const std::string& token) const {
  auto it = cache_.find(token);
  if (it != cache_.end()) return it->second;
  Rng rng(mix_seed(seed_, fnv1a(token)));
  std::normal_distribution<Real> normal(0.0, 1.0);
  Vector v(dim_);
  for (int k = 0; k < dim_; ++k) v[k] = normal(rng);
  return cache_.emplace(token, std::move(v)).first->second;
}

Vector HashTextEncoder::encode(std::string_view text) const {
  Vector sum = Vector::Zero(dim_);
  const auto tokens = tokenize(text);
  if (tokens.empty()) return sum;
  for (const auto& t : tokens) sum += token_vector(t);
  sum /= static_cast<Real>(tokens.size());
  const Real norm = sum.norm();
  if (norm > 0) sum /= norm;
  return sum;
}

EmbeddingTable HashTextEncoder::encode_all(const std::vector<std::string>& texts) const {
  EmbeddingTable table{Matrix(static_cast<Eigen::Index>(texts.size()), dim_)};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    table.vectors.row(static_cast<Eigen::Index>(i)) = encode(texts[i]).transpose();
  }
  return table;
}

}  // namespace lrd
