#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "smax/config.hpp"
#include "smax/report.hpp"

using namespace smax;

TEST_CASE("key=value parsing with comments", "[config]") {
    std::istringstream ss(
        "# experiment\n"
        "a = 2\n"
        "s = 0.2   # smoothness\n"
        "\n"
        "gamma = 2.0\n");
    const auto cfg = KeyValueConfig::parse(ss);
    ConfigReader rd(cfg);
    CHECK(rd.require_double("a") == 2.0);
    CHECK(rd.require_double("s") == 0.2);
    CHECK(rd.get_double("gamma", 1.0) == 2.0);
    CHECK(rd.get_double("missing", 7.5) == 7.5);
    rd.finish();
}

TEST_CASE("unknown keys are hard errors", "[config]") {
    std::istringstream ss("a = 2\ntpyo = 3\n");
    const auto cfg = KeyValueConfig::parse(ss);
    ConfigReader rd(cfg);
    CHECK(rd.require_double("a") == 2.0);
    CHECK_THROWS_AS(rd.finish(), ConfigError);
}

TEST_CASE("malformed config lines", "[config]") {
    std::istringstream no_eq("a 2\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(no_eq), ConfigError);
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(dup), ConfigError);
    std::istringstream empty_val("a =\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(empty_val), ConfigError);

    std::istringstream bad_num("a = two\n");
    const auto cfg = KeyValueConfig::parse(bad_num);
    ConfigReader rd(cfg);
    CHECK_THROWS_AS(rd.require_double("a"), ConfigError);
}

TEST_CASE("list and integer readers", "[config]") {
    std::istringstream ss("levels = 12,24,36\nn = 4096\n");
    const auto cfg = KeyValueConfig::parse(ss);
    ConfigReader rd(cfg);
    const auto lv = rd.get_double_list("levels", {});
    REQUIRE(lv.size() == 3);
    CHECK(lv[2] == 36.0);
    CHECK(rd.get_int("n", 0) == 4096);
    rd.finish();
}

TEST_CASE("scalar checks carry tolerance and pass flags", "[report]") {
    auto ok = ScalarResult::in_range("x", 0.5, 0.0, 1.0);
    CHECK(ok.pass);
    auto bad = ScalarResult::at_most("y", 2.0, 1.0);
    CHECK_FALSE(bad.pass);
    auto lo = ScalarResult::at_least("z", 2.0, 1.0);
    CHECK(lo.pass);

    ExperimentReport rep;
    rep.kind = "demo";
    rep.add(ok);
    CHECK(rep.all_pass());
    rep.add(bad);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("CSV and text rendering are deterministic", "[report]") {
    ExperimentReport rep;
    rep.kind = "scaling";
    rep.echo("a", "2");
    rep.add(ScalarResult::in_range("fitted_slope", 0.301, 0.25, 0.41));
    rep.columns = {"lambda", "ratio", "log_lambda", "log_ratio",
                   "fitted_slope"};
    rep.rows.push_back({64.0, 3.25, 4.158883083359672, 1.17865499634, 0.301});
    rep.wall_seconds = 1.23;  // must not appear in the output

    const auto csv1 = render_csv(rep);
    rep.wall_seconds = 9.99;
    const auto csv2 = render_csv(rep);
    CHECK(csv1 == csv2);
    CHECK(csv1.find("lambda,ratio,log_lambda,log_ratio,fitted_slope\n") == 0);
    CHECK(csv1.find("9.99") == std::string::npos);
    CHECK(csv1.find("1.23") == std::string::npos);

    const auto txt = render_text(rep);
    CHECK(txt.find("fitted_slope = 0.301") != std::string::npos);
    CHECK(txt.find("pass: true") != std::string::npos);
}

TEST_CASE("header-only CSV for an empty tabular section", "[report]") {
    ExperimentReport rep;
    rep.kind = "demo";
    rep.columns = {"x", "value", "argmax_n"};
    CHECK(render_csv(rep) == "x,value,argmax_n\n");
}

TEST_CASE("emit_report writes atomically and re-emits identical bytes",
          "[report]") {
    ExperimentReport rep;
    rep.kind = "demo";
    rep.columns = {"k", "v"};
    for (int i = 0; i < 40; ++i)
        rep.rows.push_back({static_cast<double>(i), 1.0 / (i + 1)});

    const auto dir = std::filesystem::temp_directory_path() / "smax_report_t";
    std::filesystem::remove_all(dir);
    const auto w1 = emit_report(rep, dir.string(), ReportFormat::csv);
    REQUIRE(w1.size() == 1);
    std::ifstream f1(w1[0], std::ios::binary);
    std::stringstream b1;
    b1 << f1.rdbuf();

    const auto w2 = emit_report(rep, dir.string(), ReportFormat::csv);
    std::ifstream f2(w2[0], std::ios::binary);
    std::stringstream b2;
    b2 << f2.rdbuf();
    CHECK(b1.str() == b2.str());

    // no stray temp files once emission is done
    for (const auto& e : std::filesystem::directory_iterator(dir))
        CHECK(e.path().extension() != ".tmp");
    std::filesystem::remove_all(dir);
}
