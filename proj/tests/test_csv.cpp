#include <charconv>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "speccode/csv.hpp"
#include "speccode/errors.hpp"

using namespace speccode;

TEST_CASE("doubles round trip through 17 significant digits") {
    for (double v : {0.1, 1.0 / 3.0, 2.0, -1e-300, 6.02214076e23, 0.0}) {
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV rows") {
    std::ostringstream out;
    CsvWriter csv(out, {"a", "b"});
    csv.row(std::vector<double>{1.5, 2.0});
    csv.row(std::vector<std::string>{"(1,0)", "say \"hi\""});
    CHECK(out.str() == "a,b\n1.5,2\n\"(1,0)\",\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(csv.row(std::vector<double>{1.0}), DomainError);
}
