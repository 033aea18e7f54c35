#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "momentsense/csv.hpp"

using namespace momentsense;

TEST_CASE("csv numbers carry at least 10 significant digits and survive round trips") {
    CHECK(csv_number(0.0) == "0");
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_number(-2.5631031310892012).substr(0, 8) == "-2.56310");
    for (double v : {0.1, -12.75, 3.8569374692714504, 1e-300, 6.02214076e23}) {
        double back = 0.0;
        std::istringstream in(csv_number(v));
        in >> back;
        REQUIRE(in);
        CHECK(back == doctest::Approx(v).epsilon(1e-11));
    }
}

TEST_CASE("writer layout: comments, header, rows") {
    CsvWriter writer;
    writer.comment("tool 1.0.0");
    writer.comment_block("alpha = 1\nbeta = two\n");
    writer.header({"x", "y"});
    writer.row({"1", "2.5"});
    writer.row({"-3", ""});
    CHECK(writer.str() ==
          "# tool 1.0.0\n"
          "# alpha = 1\n"
          "# beta = two\n"
          "x,y\n"
          "1,2.5\n"
          "-3,\n");
}

TEST_CASE("atomic file write leaves no partial outputs") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "momentsense_csv_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    CsvWriter writer;
    writer.comment("probe");
    writer.header({"a"});
    writer.row({"1"});

    const std::filesystem::path ok_path = dir / "out.csv";
    writer.write(ok_path.string());
    std::ifstream in(ok_path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == writer.str());

    const std::filesystem::path bad_path = dir / "missing_subdir" / "out.csv";
    CHECK_THROWS_AS(writer.write(bad_path.string()), std::runtime_error);
    CHECK_FALSE(std::filesystem::exists(bad_path));

    // No stray temporary files either way.
    std::size_t entries = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 1);

    std::filesystem::remove_all(dir);
}
