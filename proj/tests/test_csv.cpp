#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"
#include "tempdir.hpp"

using namespace banglish;

TEST_CASE("parse splits header and rows") {
    auto t = csv::parse("a,b,c\n1,2,3\n4,5,6\n", "t");
    CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"1", "2", "3"});
    CHECK(t.rows[1] == csv::Row{"4", "5", "6"});
}

TEST_CASE("header-only input yields zero rows") {
    auto t = csv::parse("a,b\n", "t");
    CHECK(t.header.size() == 2);
    CHECK(t.rows.empty());
}

TEST_CASE("missing final newline still ends the last record") {
    auto t = csv::parse("a,b\n1,2", "t");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == csv::Row{"1", "2"});
}

TEST_CASE("CRLF and bare CR line endings") {
    auto t = csv::parse("a,b\r\n1,2\r3,4\r\n", "t");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"1", "2"});
    CHECK(t.rows[1] == csv::Row{"3", "4"});
}

TEST_CASE("quoted fields: commas, doubled quotes, embedded newlines") {
    auto t = csv::parse("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n\"line1\nline2\",z\n", "t");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"x,y", "he said \"hi\""});
    CHECK(t.rows[1] == csv::Row{"line1\nline2", "z"});
}

TEST_CASE("empty fields survive") {
    auto t = csv::parse("a,b,c\n,,\nx,,y\n", "t");
    CHECK(t.rows[0] == csv::Row{"", "", ""});
    CHECK(t.rows[1] == csv::Row{"x", "", "y"});
}

TEST_CASE("UTF-8 bytes pass through untouched") {
    std::string bengali = "সাব্বির";
    auto t = csv::parse("name\n" + bengali + "\n", "t");
    CHECK(t.rows[0][0] == bengali);
}

TEST_CASE("parse errors carry the origin") {
    CHECK_THROWS_AS(csv::parse("a,b\n\"open", "t"), DataError);
    CHECK_THROWS_AS(csv::parse("a,b\nx\"y,z\n", "t"), DataError);
    CHECK_THROWS_AS(csv::parse("", "t"), DataError);
    CHECK_THROWS_WITH_AS(csv::parse("", "somewhere.csv"), "somewhere.csv: missing header row",
                         DataError);
}

TEST_CASE("column lookup and ragged-row cell access") {
    auto t = csv::parse("id,name\n7\n", "t");
    REQUIRE(t.column("name").has_value());
    CHECK(*t.column("name") == 1);
    CHECK_FALSE(t.column("missing").has_value());
    CHECK(t.cell(0, 0) == "7");
    CHECK(t.cell(0, 1) == ""); // row shorter than header
}

TEST_CASE("escape_field quotes only when needed") {
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape_field("two\nlines") == "\"two\nlines\"");
    CHECK(csv::escape_field("") == "");
}

TEST_CASE("to_string round-trips through parse") {
    csv::Table t;
    t.header = {"a", "b"};
    t.rows = {{"x,1", "he said \"hi\""}, {"line1\nline2", ""}};
    auto back = csv::parse(csv::to_string(t), "t");
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("read_file: missing file is InputError, bad content is DataError") {
    test::TempDir dir;
    CHECK_THROWS_AS(csv::read_file(dir.file("absent.csv")), InputError);
    auto p = dir.write("bad.csv", "a\n\"unclosed");
    CHECK_THROWS_AS(csv::read_file(p), DataError);
    auto q = dir.write("ok.csv", "a,b\n1,2\n");
    auto t = csv::read_file(q);
    CHECK(t.rows.size() == 1);
}
