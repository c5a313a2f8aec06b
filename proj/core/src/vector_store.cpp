// Copyright 2026 The kbtriage Authors
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

#include <fmt/format.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kbtriage/error.hpp"
#include "kbtriage/retrieval.hpp"

namespace kbtriage {
namespace {

constexpr std::array<char, 4> kMagic{'K', 'B', 'V', 'S'};
// Guards against allocating from a corrupt length field.
constexpr std::uint32_t kMaxStringBytes = 64u << 20;

void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void put_string(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

void read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    fail(Errc::kMalformedRecord, "vector store truncated");
  }
}

std::uint8_t get_u8(std::istream& in) {
  char c = 0;
  read_exact(in, &c, 1);
  return static_cast<std::uint8_t>(c);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  read_exact(in, reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::string get_string(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  if (n > kMaxStringBytes) fail(Errc::kMalformedRecord, "vector store string too long");
  std::string s(n, '\0');
  read_exact(in, s.data(), n);
  return s;
}

}  // namespace

void write_vector_store(std::ostream& out, const KnowledgeBase& kb) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVectorStoreVersion);
  put_u32(out, static_cast<std::uint32_t>(kb.dim()));
  put_u32(out, static_cast<std::uint32_t>(kb.size()));
  put_string(out, kb.embedder_id());
  for (const auto& e : kb.entries()) {
    put_u8(out, e.key.source == Source::kBugzilla ? 0 : 1);
    put_u8(out, e.label == Label::kGenuineBug ? 0 : 1);
    put_string(out, e.key.id);
    put_string(out, e.text);
    for (float f : e.vector.values) put_f32(out, f);
  }
  if (!out) fail(Errc::kIo, "vector store write failed");
}

KnowledgeBase read_vector_store(std::istream& in) {
  std::array<char, 4> magic{};
  read_exact(in, magic.data(), magic.size());
  if (magic != kMagic) fail(Errc::kMalformedRecord, "not a vector store (bad magic)");
  const std::uint32_t version = get_u32(in);
  if (version != kVectorStoreVersion) {
    fail(Errc::kMalformedRecord, fmt::format("unsupported vector store version {}", version));
  }
  const std::uint32_t dim = get_u32(in);
  const std::uint32_t count = get_u32(in);
  std::string embedder_id = get_string(in);
  std::vector<KnowledgeBaseEntry> entries;
  entries.reserve(std::min<std::uint32_t>(count, 1u << 16));
  for (std::uint32_t i = 0; i < count; ++i) {
    KnowledgeBaseEntry e;
    const auto source = get_u8(in);
    const auto label = get_u8(in);
    if (source > 1 || label > 1) fail(Errc::kMalformedRecord, "bad entry tag");
    e.key.source = source == 0 ? Source::kBugzilla : Source::kSyzkaller;
    e.label = label == 0 ? Label::kGenuineBug : Label::kFalsePositive;
    e.key.id = get_string(in);
    e.text = get_string(in);
    e.vector.values.resize(dim);
    for (auto& f : e.vector.values) f = std::bit_cast<float>(get_u32(in));
    entries.push_back(std::move(e));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(Errc::kMalformedRecord, "trailing bytes after vector store");
  }
  return KnowledgeBase(dim, std::move(embedder_id), std::move(entries));
}

void save_vector_store(const std::filesystem::path& path, const KnowledgeBase& kb) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::kIo, "cannot write " + tmp.string());
    write_vector_store(out, kb);
  }
  std::filesystem::rename(tmp, path);
}

KnowledgeBase load_vector_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  return read_vector_store(in);
}

}  // namespace kbtriage
