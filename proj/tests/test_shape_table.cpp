#include "penc/shape_table.hpp"

#include <set>

#include "golden_table1.hpp"
#include "testutil.hpp"

using namespace penc;

TEST_CASE("golden: full 9x10 table matches the reference values") {
    ShapeTable t = build_table(9, 10);
    REQUIRE(t.cells.size() == 45);

    std::size_t populated = 0;
    for (const auto& g : golden::table1) {
        INFO("cell a=" << g.a << " b=" << g.b);
        const auto& cell = t.cell(g.a, g.b);
        REQUIRE(cell.has_value());
        CHECK(cell->m == g.m);
        CHECK(cell->n == g.n);
        CHECK(cell->I == g.I);
        CHECK(cell->J == Int(g.J));
        ++populated;
    }
    CHECK(populated == 39);

    for (const auto& [key, cell] : t.cells) {
        INFO("cell a=" << key.first << " b=" << key.second);
        CHECK(cell.has_value() != golden::table1_no_ring.contains(key));
    }
}

TEST_CASE("every populated cell satisfies the ring conditions") {
    ShapeTable t = build_table(9, 10);
    for (const auto& [key, cell] : t.cells) {
        if (!cell)
            continue;
        auto [a, b] = key;
        CHECK(Int(cell->m - 1) * a % b == 0);
        CHECK((checked_pow(a, *cell->n) - a) % b == 0);
    }
}

TEST_CASE("specific cells") {
    ShapeTable t = build_table(9, 10);
    auto& c37 = t.cell(3, 7);
    REQUIRE(c37.has_value());
    CHECK(c37->m == 8);
    CHECK(c37->n == 7);
    CHECK(c37->I == 3);
    CHECK(c37->J == Int(312));
    CHECK_FALSE(t.cell(6, 8).has_value());

    ShapeTable small = build_table(1, 2);
    auto& c12 = small.cell(1, 2);
    REQUIRE(c12.has_value());
    CHECK(c12->m == 3);
    CHECK(c12->n == 2);
}

TEST_CASE("range preconditions") {
    CHECK_THROWS_AS(build_table(0, 10), ParameterError);
    CHECK_THROWS_AS(build_table(1, 1), ParameterError);
    CHECK_THROWS_AS(build_table(9, 10).cell(9, 11), ParameterError);
}

TEST_CASE("text render carries the cells in a grid") {
    std::string text = render_table(build_table(9, 10), TableFormat::text);
    CHECK(text.find("m=7 n=3 I=5 J=20") != std::string::npos);  // (5,6)
    CHECK(text.find("m=5 n=3 I=3 J=6") != std::string::npos);   // (3,4)
    CHECK(text.find("m=8 n=7 I=5 J=11160") != std::string::npos);
}

TEST_CASE("csv render is stable and machine readable") {
    std::string csv = render_table(build_table(1, 2), TableFormat::csv);
    CHECK(csv == "a,b,m,n,I,J\n1,2,3,2,1,0\n");

    std::string wide = render_table(build_table(9, 10), TableFormat::csv);
    CHECK(wide.find("\n2,4,,,,\n") != std::string::npos); // no-ring row
    CHECK(wide.find("\n5,7,8,7,5,11160\n") != std::string::npos);
    // one header plus one row per cell
    CHECK(std::count(wide.begin(), wide.end(), '\n') == 46);
}

TEST_CASE("coincidence: four classes share the (6,5) shape") {
    ShapeTable t = build_table(8, 10);
    for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{2, 5},
                        {3, 5},
                        {2, 10},
                        {8, 10}}) {
        const auto& cell = t.cell(a, b);
        REQUIRE(cell.has_value());
        CHECK(cell->m == 6);
        CHECK(cell->n == 5);
    }
}
