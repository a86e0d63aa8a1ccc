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

#include "orfel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <string_view>
#include <unordered_map>

namespace orfel {

namespace {

// Splits out the field with the given index; returns false when the line has
// too few fields.
bool field_at(std::string_view line, char sep, uint32_t index, std::string_view& out) {
    size_t begin = 0;
    for (uint32_t i = 0; i <= index; ++i) {
        size_t end = line.find(sep, begin);
        if (i == index) {
            out = line.substr(begin, end == std::string_view::npos ? std::string_view::npos
                                                                   : end - begin);
            return true;
        }
        if (end == std::string_view::npos) return false;
        begin = end + 1;
    }
    return false;
}

// Unsigned seconds; fractional part (sub-second precision) is truncated.
bool parse_timestamp(std::string_view s, uint64_t& out) {
    if (s.empty()) return false;
    size_t dot = s.find('.');
    std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
    if (whole.empty()) return false;
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), out);
    if (ec != std::errc() || p != whole.data() + whole.size()) return false;
    if (dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        if (frac.empty() ||
            !std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return false;
    }
    return true;
}

bool parse_rating(std::string_view s, uint8_t& out) {
    if (s.empty()) return false;
    uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return false;
    if (v < 1 || v > 255) return false;
    out = static_cast<uint8_t>(v);
    return true;
}

}  // namespace

EdgeBuffer ingest(std::istream& in, const IngestOptions& opts) {
    if (in.fail()) throw IoError("ingest: input stream is not readable");

    EdgeBuffer buf;
    std::unordered_map<std::string, uint32_t> user_map;
    std::unordered_map<std::string, uint32_t> product_map;

    auto intern = [](std::unordered_map<std::string, uint32_t>& map,
                     std::vector<std::string>& ids, std::string_view key) {
        auto it = map.find(std::string(key));
        if (it != map.end()) return it->second;
        auto ordinal = static_cast<uint32_t>(ids.size());
        ids.emplace_back(key);
        map.emplace(ids.back(), ordinal);
        return ordinal;
    };

    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && opts.skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        ++buf.total_lines;

        std::string_view lv = line;
        std::string_view fu, fp, ft, fr;
        uint64_t ts = 0;
        uint8_t rating = 0;
        bool ok = field_at(lv, opts.separator, opts.columns[0], fu) &&
                  field_at(lv, opts.separator, opts.columns[1], fp) &&
                  field_at(lv, opts.separator, opts.columns[2], ft) &&
                  field_at(lv, opts.separator, opts.columns[3], fr) && !fu.empty() &&
                  !fp.empty() && parse_timestamp(ft, ts) && parse_rating(fr, rating);
        if (!ok) {
            ++buf.rejected_lines;
            continue;
        }
        Recommendation r;
        r.user = intern(user_map, buf.user_ids, fu);
        r.product = intern(product_map, buf.product_ids, fp);
        r.timestamp = ts;
        r.weight = rating;
        buf.edges.push_back(r);
    }
    if (in.bad()) throw IoError("ingest: read failure");

    if (buf.total_lines == 0) buf.empty_input = true;
    if (buf.total_lines > 0 &&
        static_cast<double>(buf.rejected_lines) >
            opts.max_rejected_fraction * static_cast<double>(buf.total_lines)) {
        throw FormatError("ingest: " + std::to_string(buf.rejected_lines) + " of " +
                          std::to_string(buf.total_lines) + " lines rejected");
    }

    // Duplicate (user, product) pairs are retained; count them via a sorted
    // key pass so huge inputs do not need a hash set of all pairs.
    if (!buf.edges.empty()) {
        std::vector<uint64_t> keys;
        keys.reserve(buf.edges.size());
        for (const auto& e : buf.edges)
            keys.push_back((static_cast<uint64_t>(e.user) << 32) | e.product);
        std::sort(keys.begin(), keys.end());
        for (size_t i = 1; i < keys.size(); ++i)
            if (keys[i] == keys[i - 1]) ++buf.duplicate_edges;
    }
    return buf;
}

Mode parse_mode(const std::string& s) {
    if (s == "defamation") return Mode::Defamation;
    if (s == "promotion") return Mode::Promotion;
    throw ConfigError("unknown mode '" + s + "' (expected defamation or promotion)");
}

std::string Fnv1a64::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace orfel
