#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "chainlab/errors.hpp"
#include "chainlab/table.hpp"

using namespace chainlab;
namespace fs = std::filesystem;

TEST_SUITE("table") {

TEST_CASE("doubles round-trip through 17 significant digits") {
    for (double v : {0.1, -1.0 / 3, 1e-300, 6.02214076e23, 0.0, 5e-324}) {
        CHECK(std::strtod(table::format_double(v).c_str(), nullptr) == v);
    }
    CHECK(table::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(table::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(table::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv layout") {
    table::CsvTable t{{"t", "value"}, {}};
    t.add({1.0, 0.25});
    t.add({2.0, -1e-20});
    const auto text = t.to_string();
    CHECK(text == "t,value\n1,0.25\n2,-9.9999999999999995e-21\n");
    CHECK(text.find('\r') == std::string::npos);
    const auto back = table::parse_csv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK_THROWS(t.add({1.0}));
}

TEST_CASE("window json round trip") {
    LatticeWindow w(-3, {0.5, -1.0, 0.1, 2.0});
    const auto j = table::window_to_json(w);
    CHECK(j.at("offset") == -3);
    const auto back = table::window_from_json(j);
    CHECK(back.offset() == -3);
    CHECK(back.values() == w.values());
    CHECK(back.fill() == Fill::zero);

    auto bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(table::window_from_json(bad), DomainError);
    CHECK_THROWS_AS(table::window_from_json(nlohmann::json{{"offset", 0}, {"values", nlohmann::json::array()}}),
                    DomainError);
    CHECK_THROWS_AS(table::window_from_json(nlohmann::json{{"offset", 0}, {"values", {1.0}}, {"fill", "junk"}}),
                    DomainError);
}

TEST_CASE("window csv round trip") {
    LatticeWindow w(7, {1.0, 0.0, -0.125});
    const auto text = table::window_to_csv(w);
    CHECK(text == "site,value\n7,1\n8,0\n9,-0.125\n");
    const auto back = table::window_from_csv(text);
    CHECK(back.offset() == 7);
    CHECK(back.values() == w.values());
    CHECK_THROWS_AS(table::window_from_csv("site,value\n1,2\n3,4\n"), DomainError);
    CHECK_THROWS_AS(table::window_from_csv("k,v\n1,2\n"), DomainError);
}

TEST_CASE("atomic writes and extension dispatch") {
    const auto dir = fs::temp_directory_path() / "chainlab_table_test";
    fs::remove_all(dir);
    LatticeWindow w(-1, {0.5, 1.0, 0.5});
    table::save_window(dir / "sub" / "w.json", w);
    table::save_window(dir / "w.csv", w);
    CHECK(!fs::exists(dir / "sub" / "w.json.tmp"));
    CHECK(table::load_window(dir / "sub" / "w.json").values() == w.values());
    CHECK(table::load_window(dir / "w.csv").offset() == -1);
    CHECK_THROWS_AS(table::save_window(dir / "w.txt", w), DomainError);
    CHECK_THROWS_AS(table::read_file(dir / "missing.json"), DomainError);
    fs::remove_all(dir);
}

}
