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

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "orfel/ingest.hpp"

using namespace orfel;

TEST_CASE("ingest renumbers a tiny csv densely") {
    std::istringstream in("u1,p1,100,5\nu2,p1,110,5\nu1,p2,100,1\n");
    EdgeBuffer buf = ingest(in);
    CHECK(buf.num_users() == 2);
    CHECK(buf.num_products() == 2);
    CHECK(buf.edges.size() == 3);
    CHECK(buf.user_ids == std::vector<std::string>{"u1", "u2"});
    CHECK(buf.product_ids == std::vector<std::string>{"p1", "p2"});
    CHECK(buf.edges[0] == Recommendation{0, 0, 100, 5});
    CHECK(buf.edges[1] == Recommendation{1, 0, 110, 5});
    CHECK(buf.edges[2] == Recommendation{0, 1, 100, 1});
    CHECK(buf.rejected_lines == 0);
    CHECK(buf.duplicate_edges == 0);
}

TEST_CASE("ingest of an empty stream yields zero edges with a warning flag") {
    std::istringstream in("");
    EdgeBuffer buf = ingest(in);
    CHECK(buf.edges.empty());
    CHECK(buf.empty_input);
}

TEST_CASE("duplicate pairs are kept as distinct records and counted") {
    std::istringstream in("u1,p1,100,5\nu1,p1,100,5\n");
    EdgeBuffer buf = ingest(in);
    CHECK(buf.edges.size() == 2);
    CHECK(buf.duplicate_edges == 1);
}

TEST_CASE("duplicate count matches set semantics on a mixed fixture") {
    // Re-reviews at different times still count as duplicates of the pair.
    std::string text =
        "a,x,1,3\n"
        "a,x,2,4\n"
        "b,x,3,5\n"
        "a,y,4,1\n"
        "b,x,5,2\n"
        "a,x,6,1\n";
    std::istringstream in(text);
    EdgeBuffer buf = ingest(in);
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (const auto& e : buf.edges) pairs.emplace(e.user, e.product);
    CHECK(buf.edges.size() == 6);
    CHECK(buf.duplicate_edges == buf.edges.size() - pairs.size());
    CHECK(buf.duplicate_edges == 3);
}

TEST_CASE("bad ratings and malformed lines are rejected per line") {
    std::istringstream in(
        "u1,p1,100,5\n"
        "u2,p1,100,0\n"       // rating below 1
        "u3,p1,100,300\n"     // rating above 255
        "u4,p1,nonsense,5\n"  // bad timestamp
        "u5,p1,100\n"         // missing field
        "u6,p2,100,4\n");
    IngestOptions opts;
    opts.max_rejected_fraction = 0.9;
    EdgeBuffer buf = ingest(in, opts);
    CHECK(buf.edges.size() == 2);
    CHECK(buf.rejected_lines == 4);
}

TEST_CASE("more than 10 percent rejected lines is a hard failure") {
    std::string text = "u1,p1,100,5\nu2,p1,bad,5\n";  // 50% rejected
    std::istringstream in(text);
    CHECK_THROWS_AS(ingest(in), FormatError);
}

TEST_CASE("sub-second timestamps are truncated, negatives rejected") {
    std::istringstream in(
        "u1,p1,100.75,5\n"
        "u2,p1,-5,5\n"
        "u3,p1,200,5\n");
    IngestOptions opts;
    opts.max_rejected_fraction = 0.5;
    EdgeBuffer buf = ingest(in, opts);
    CHECK(buf.edges.size() == 2);
    CHECK(buf.edges[0].timestamp == 100);
    CHECK(buf.rejected_lines == 1);
}

TEST_CASE("header skip, custom separator and column mapping") {
    std::istringstream in(
        "rating\tuser\ttime\titem\n"
        "5\tu1\t100\tp1\n"
        "4\tu2\t110\tp1\n");
    IngestOptions opts;
    opts.separator = '\t';
    opts.skip_header = true;
    opts.columns = {1, 3, 2, 0};
    EdgeBuffer buf = ingest(in, opts);
    REQUIRE(buf.edges.size() == 2);
    CHECK(buf.user_ids[0] == "u1");
    CHECK(buf.product_ids[0] == "p1");
    CHECK(buf.edges[0].weight == 5);
    CHECK(buf.edges[1].timestamp == 110);
}

TEST_CASE("unreadable stream raises an io error") {
    std::ifstream in("/nonexistent/edges.txt");
    CHECK_THROWS_AS(ingest(in), IoError);
}

TEST_CASE("crlf line endings are tolerated") {
    std::istringstream in("u1,p1,100,5\r\nu2,p1,110,4\r\n");
    EdgeBuffer buf = ingest(in);
    CHECK(buf.edges.size() == 2);
    CHECK(buf.edges[1].weight == 4);
}
