/*
 * Copyright (c) 2026 The ORFEL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orfel {

using VertexId = uint32_t;

/// One weighted, timestamped user->product recommendation event.
/// On disk each record occupies exactly 17 bytes, little endian:
/// user (u32), product (u32), timestamp (u64), weight (u8).
struct Recommendation {
    VertexId user = 0;
    VertexId product = 0;
    uint64_t timestamp = 0;   // seconds since epoch
    uint8_t weight = 0;       // 1..255, semantically 1-5 star ratings

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

inline constexpr size_t kRecordBytes = 17;
inline constexpr char kShardMagic[4] = {'O', 'R', 'F', 'L'};
inline constexpr uint16_t kFormatVersion = 1;
inline constexpr uint64_t kDefaultBlockSize = 1u << 20;  // 1 MiB
inline constexpr uint64_t kMinBlockSize = 1024;

/// Which side of the weight threshold a lockstep lives on.
enum class Mode : uint8_t {
    Defamation,   // weights at or below kappa
    Promotion,    // weights at or above kappa
};

inline const char* mode_name(Mode m) {
    return m == Mode::Defamation ? "defamation" : "promotion";
}

Mode parse_mode(const std::string& s);

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit streaming hash, used for dataset content ids.
class Fnv1a64 {
public:
    void update(const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ull;
        }
    }
    uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace orfel
