// Copyright 2026 The cfrmat Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cfrmat/builtin_games.h"
#include "cfrmat/compiler.h"
#include "test_oracles.h"

namespace cfrmat {
namespace {

ContainerError::Kind ReadKind(const std::string& bytes) {
  try {
    ReadCompiledFromString(bytes);
  } catch (const ContainerError& e) {
    return e.kind();
  }
  FAIL("expected a ContainerError");
  return ContainerError::Kind::kIo;
}

TEST_CASE("container round trip is the identity on the corpus") {
  for (const auto& g : testing::Corpus()) {
    INFO(g.name);
    const CompiledGame cg = Compile(g.tree);
    const std::string bytes = WriteCompiledToString(cg);
    CHECK(ReadCompiledFromString(bytes) == cg);
    // Byte-deterministic, also across separate compiles.
    CHECK(WriteCompiledToString(Compile(g.tree)) == bytes);

    std::stringstream stream;
    CHECK(WriteCompiled(cg, stream) == bytes.size());
    CHECK(stream.str() == bytes);
    CHECK(ReadCompiled(stream) == cg);
  }
}

TEST_CASE("header fields") {
  const std::string bytes = WriteCompiledToString(Compile(KuhnPoker(2)));
  CHECK(bytes.substr(0, 4) == "CFRM");
  CHECK(static_cast<unsigned char>(bytes[4]) == kContainerVersion);
  CHECK(bytes[5] == 0);
  // First dims entry: |V| = 58 as little-endian i64.
  CHECK(static_cast<unsigned char>(bytes[6]) == 58);
  for (int i = 7; i < 14; ++i) CHECK(bytes[static_cast<size_t>(i)] == 0);
}

TEST_CASE("corrupt containers are rejected with the right error") {
  const std::string bytes = WriteCompiledToString(Compile(KuhnPoker(2)));

  CHECK(ReadKind("") == ContainerError::Kind::kBadMagic);
  CHECK(ReadKind("CFR") == ContainerError::Kind::kBadMagic);
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK(ReadKind(magic) == ContainerError::Kind::kBadMagic);

  std::string version = bytes;
  version[4] = 2;
  CHECK(ReadKind(version) == ContainerError::Kind::kVersionMismatch);

  // Every proper prefix past the magic is a truncation.
  for (size_t len = 4; len < bytes.size(); len += 7)
    CHECK(ReadKind(bytes.substr(0, len)) == ContainerError::Kind::kTruncated);
  CHECK(ReadKind(bytes.substr(0, bytes.size() - 1)) == ContainerError::Kind::kTruncated);

  // Flipping a payload byte breaks its checksum. The first section starts
  // after magic, version and dims (4 + 2 + 56 bytes), then "G" with its
  // 8-byte length and the 8-byte payload length.
  const size_t first_payload = 4 + 2 + 56 + 8 + 1 + 8;
  std::string flipped = bytes;
  flipped[first_payload + 3] ^= 0x40;
  CHECK(ReadKind(flipped) == ContainerError::Kind::kChecksum);

  std::string renamed = bytes;
  renamed[4 + 2 + 56 + 8] = 'Z';
  CHECK(ReadKind(renamed) == ContainerError::Kind::kMalformed);

  CHECK(ReadKind(bytes + "x") == ContainerError::Kind::kMalformed);

  std::string dims = bytes;
  dims[6] = 59;  // |V| no longer equals |T| + decisions
  CHECK(ReadKind(dims) == ContainerError::Kind::kMalformed);
}

}  // namespace
}  // namespace cfrmat
