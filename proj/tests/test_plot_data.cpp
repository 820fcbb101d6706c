#include <doctest.h>

#include "report.hpp"
#include "selfsim/plot_data.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

using namespace selfsim;

TEST_CASE("CSV round trip is bit-exact") {
    PlotTable t;
    t.comments = {"test table", "columns: r, w, w_r"};
    t.columns = {"r", "w", "w_r"};
    t.rows = {{1.0 / 3, 0.1, -2e-300},
              {std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 2.0), 1e308},
              {M_PI, -0.0, 123456789.123456789}};
    std::stringstream ss;
    write_csv(ss, t);
    const auto back = read_csv(ss);
    CHECK(back.comments == t.comments);
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        CHECK(std::memcmp(back.rows[i].data(), t.rows[i].data(), 3 * sizeof(double)) == 0);
}

TEST_CASE("malformed CSV is rejected") {
    std::stringstream a("r,w\n1,2,3\n");
    CHECK_THROWS(read_csv(a));
    std::stringstream b("r,w\n1,x\n");
    CHECK_THROWS(read_csv(b));
    std::stringstream c("# only a comment\n");
    CHECK_THROWS(read_csv(c));
}

TEST_CASE("profile and curve tables") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const auto shot = shoot_from_origin(m, 2.0);
    const auto t = profile_table(m, shot, 0, 2, 11);
    CHECK(t.columns == std::vector<std::string>{"r", "w", "w_r"});
    REQUIRE(t.rows.size() == 11);
    CHECK(t.rows[0][1] == 2.0);
    CHECK(t.rows[10][0] == 2.0);
    CurveTable c;
    c.points = {{1, 2, 3, 0, 0}, {4, 5, 6, 0, 0}};
    const auto ct = curve_table(c);
    CHECK(ct.columns == std::vector<std::string>{"param", "zeta", "slope"});
    CHECK(ct.rows[1] == std::vector<double>{4, 5, 6});
}

TEST_CASE("report JSON uses 17 significant digits and a stable hash") {
    using selfsim::cli::json;
    CHECK(selfsim::cli::dump_json(json(0.1)) == "0.10000000000000001");
    CHECK(selfsim::cli::dump_json(json(std::nan(""))) == "null");
    CHECK(selfsim::cli::dump_json(json{{"a", 1}, {"b", "x"}}) == R"({"a":1,"b":"x"})");

    auto make = [](double v) {
        selfsim::cli::RunReport r("demo");
        r.inputs()["N"] = 3;
        r.results()["value"] = v;
        r.check("positive", v > 0);
        return r;
    };
    const auto a = make(1.5), b = make(1.5), c = make(-1.5);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.all_passed());
    CHECK_FALSE(c.all_passed());
    CHECK(a.document(1.0)["determinism_hash"] == a.hash());
    CHECK(selfsim::cli::dump_json(a.document(1.0)["results"]) == selfsim::cli::dump_json(a.document(2.0)["results"]));
}
