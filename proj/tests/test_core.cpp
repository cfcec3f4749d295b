// Copyright 2025 The CrisisLens Authors
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

#include <catch2/catch_amalgamated.hpp>

#include "crisislens/core.hpp"
#include "crisislens/csv.hpp"
#include "crisislens/rng.hpp"

#include <sstream>

using namespace crisislens;

TEST_CASE("date parse and serial") {
    auto d = parse_date("2024-07-19");
    REQUIRE(d);
    CHECK(d->y == 2024);
    CHECK(d->m == 7);
    CHECK(d->d == 19);
    CHECK(Date::from_serial(d->serial()) == *d);
    CHECK(Date{2024, 7, 20}.serial() - d->serial() == 1);
    CHECK(Date{2024, 8, 1}.serial() - Date{2024, 7, 31}.serial() == 1);
    // 2024 is a leap year
    CHECK(Date{2024, 3, 1}.serial() - Date{2024, 2, 29}.serial() == 1);

    CHECK_FALSE(parse_date("2024-13-01"));
    CHECK_FALSE(parse_date("2024-02-30"));
    CHECK_FALSE(parse_date("2024/07/19"));
    CHECK_FALSE(parse_date("24-07-19"));
}

TEST_CASE("timestamp parse") {
    auto t1 = parse_timestamp("2024-07-19");
    REQUIRE(t1);
    CHECK_FALSE(t1->has_time);
    CHECK(t1->to_string() == "2024-07-19");

    auto t2 = parse_timestamp("2024-07-19T23:59:00");
    REQUIRE(t2);
    CHECK(t2->has_time);
    CHECK(t2->to_string() == "2024-07-19T23:59:00");

    // zone suffixes convert to UTC+6 wall time
    auto t3 = parse_timestamp("2024-07-19T22:30:00Z");
    REQUIRE(t3);
    CHECK(t3->date == Date{2024, 7, 20});
    CHECK(t3->hour == 4);
    CHECK(t3->minute == 30);

    auto t4 = parse_timestamp("2024-07-19T10:00:00+06:00");
    REQUIRE(t4);
    CHECK(t4->date == Date{2024, 7, 19});
    CHECK(t4->hour == 10);

    CHECK_FALSE(parse_timestamp("2024-07-19T25:00:00"));
    CHECK_FALSE(parse_timestamp("not a date"));
    CHECK_FALSE(parse_timestamp(""));
}

TEST_CASE("rng determinism and shuffle") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng r(7);
    std::vector<int> v{1, 2, 3, 4, 5, 6};
    auto v2 = v;
    Rng r2(7);
    r.shuffle(v);
    r2.shuffle(v2);
    CHECK(v == v2);

    double u = Rng(1).uniform_real();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("csv quoted fields") {
    std::istringstream in(
        "id,text,extra\n"
        "1,\"hello, world\",x\n"
        "2,\"line\nbreak\",\"quote\"\"inside\"\n"
        "3,plain,\n");
    CsvReader reader(in);
    std::vector<std::string> f;
    std::size_t line;
    REQUIRE(reader.next(f, line));
    CHECK(f == std::vector<std::string>{"id", "text", "extra"});
    REQUIRE(reader.next(f, line));
    CHECK(line == 2);
    CHECK(f[1] == "hello, world");
    REQUIRE(reader.next(f, line));
    CHECK(f[1] == "line\nbreak");
    CHECK(f[2] == "quote\"inside");
    REQUIRE(reader.next(f, line));
    CHECK(f[1] == "plain");
    CHECK(f[2] == "");
    CHECK_FALSE(reader.next(f, line));
}

TEST_CASE("csv writer round trip") {
    std::vector<std::string> row{"a,b", "c\"d", "plain", "nl\nend"};
    std::ostringstream out;
    write_csv_row(out, row);
    std::istringstream in(out.str());
    CsvReader reader(in);
    std::vector<std::string> back;
    std::size_t line;
    REQUIRE(reader.next(back, line));
    CHECK(back == row);
}
