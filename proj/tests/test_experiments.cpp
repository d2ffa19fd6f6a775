#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mgrit_lfa/csv.hpp"
#include "mgrit_lfa/experiments.hpp"

using namespace mgrit_lfa;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mgrit_lfa_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_fig3(CoarseKind coarse = CoarseKind::Rediscretize) {
    auto c = ExperimentConfig::defaults(ExperimentKind::LfaSweep);
    c.omega_points = 64;
    c.theta_points = 32;
    c.coarse = coarse;
    return c;
}

}  // namespace

TEST_CASE("key-value parsing") {
    const auto kv = parse_key_values("# comment\n p = 1, 3 \n\nm=4 # trailing\ncfl = 0.8\n");
    CHECK(kv.at("p") == "1, 3");
    CHECK(kv.at("m") == "4");
    CHECK(kv.size() == 3);
    CHECK_THROWS_AS(parse_key_values("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("p = 1\np = 3\n"), ConfigError);
}

TEST_CASE("config construction and validation") {
    const auto c = ExperimentConfig::from_key_values({{"p", "1,3"}, {"m", "2"}, {"coarse", "modified"}},
                                                     ExperimentKind::CgcProbe);
    CHECK(c.experiment == ExperimentKind::CgcProbe);
    CHECK(c.p == std::vector<int>{1, 3});
    CHECK(c.coarse == CoarseKind::Modified);
    CHECK(ExperimentConfig::from_key_values({{"experiment", "oracle-check"}}, ExperimentKind::LfaSweep).experiment ==
          ExperimentKind::OracleCheck);

    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"bogus", "1"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"p", "2"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"m", "1"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"nu", "x"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"cfl", "-0.5"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"coarse", "magic"}}, ExperimentKind::LfaSweep), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_key_values({{"experiment", "nope"}}, ExperimentKind::LfaSweep),
                    ConfigError);

    const auto echo = c.echo();
    CHECK(echo.front().first == "experiment");
    CHECK(echo.front().second == "cgc-probe");
    bool saw_cfl = false;
    for (const auto& [k, v] : echo)
        if (k == "p") CHECK(v == "1,3");
        else if (k == "cfl") saw_cfl = true;
    CHECK(saw_cfl);
}

TEST_CASE("csv round-trip keeps every bit") {
    const fs::path dir = scratch("csv");
    const std::vector<double> values{0.1, 1.0 / 3.0, 2.0 * kPi / 1024, 1e-300, -7.25e17};
    {
        CsvWriter w(dir / "t.csv", {"x", "k", "name", "flag"}, {{"note", "round trip"}}, false);
        for (std::size_t i = 0; i < values.size(); ++i)
            w.row({values[i], static_cast<std::int64_t>(i), std::string("r") + std::to_string(i), i % 2 == 0});
        CHECK_THROWS(w.row({1.0}));
    }
    const auto t = read_csv(dir / "t.csv");
    CHECK(t.columns == std::vector<std::string>{"x", "k", "name", "flag"});
    REQUIRE(t.rows.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(t.number(i, "x") == values[i]);
    CHECK(t.rows[2][3] == "1");
    CHECK(format_cell(0.1) == "0.10000000000000001");
    bool has_note = false;
    for (const auto& [k, v] : t.metadata) has_note |= (k == "note" && v == "round trip");
    CHECK(has_note);
    CHECK(slurp(dir / "t.csv").find("generated") == std::string::npos);
}

TEST_CASE("space-time sweep outputs") {
    const fs::path dir = scratch("fig3");
    auto cfg = small_fig3();
    cfg.omega_points = 1024;
    cfg.theta_points = 8;
    const auto r = run_fig3(cfg, {dir, 2, false});
    REQUIRE(r.files.size() == 4);
    CHECK(r.cells.size() == r.omegas.size() * r.thetas.size());

    // Smallest nonzero spatial frequency: the coarse defect is tiny while the
    // characteristic rho approaches the lower bound.
    std::size_t i_min = 0;
    for (std::size_t i = 0; i < r.omegas.size(); ++i)
        if (r.omegas[i] > 0.0 && (r.omegas[i_min] <= 0.0 || r.omegas[i] < r.omegas[i_min])) i_min = i;
    for (std::size_t j = 0; j < r.thetas.size(); ++j) CHECK(r.cell(i_min, j).defect < 1e-6);
    for (const auto& s : r.sections)
        if (s.section == "characteristic" && s.omega == r.omegas[i_min]) CHECK(s.value == doctest::Approx(3.0).epsilon(0.05));

    const auto rho = read_csv(dir / "fig3_rho.csv");
    CHECK(rho.rows.size() == r.cells.size());
    const auto defect = read_csv(dir / "fig3_defect.csv");
    CHECK(defect.columns == std::vector<std::string>{"omega", "theta", "value"});
    bool has_quantity = false, has_version = false;
    for (const auto& [k, v] : defect.metadata) {
        has_quantity |= k == "quantity";
        has_version |= k == "code_version";
    }
    CHECK(has_quantity);
    CHECK(has_version);
    const auto sections = read_csv(dir / "fig3_sections.csv");
    CHECK(sections.rows.size() == 2 * r.omegas.size() + 3);
}

TEST_CASE("ideal coarse operator gives zero rho everywhere") {
    const auto r = run_fig3(small_fig3(CoarseKind::Ideal), {{}, 1, false});
    for (const auto& c : r.cells) CHECK(c.rho < 1e-13);
}

TEST_CASE("sweep results are independent of the thread count") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run_fig3(small_fig3(), {a, 1, false});
    run_fig3(small_fig3(), {b, 3, false});
    for (const auto& name : {"fig3_rho.csv", "fig3_sections.csv"}) CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("worst-case curve grid and rows") {
    const auto grid = fig4_eps_grid(4, 101);
    CHECK(grid.front() > 0.5);
    CHECK(grid.back() < 1.0);
    for (double e : grid) CHECK(in_admissible_set(4, e, 1e-7));
    CHECK(std::abs(grid[1] - grid[0] - 0.005) < 1e-12);

    auto c = ExperimentConfig::defaults(ExperimentKind::LowerBoundCurve);
    c.p = {3};
    c.m = {4};
    c.eps_points = 11;
    c.omega_points = 64;
    const auto r = run_fig4(c, {{}, 2, false});
    REQUIRE(!r.rows.empty());
    const Fig4Row* at08 = nullptr;
    for (const auto& row : r.rows) {
        CHECK(row.p == 3);
        CHECK(row.m == 4);
        CHECK(row.rho_check == doctest::Approx(rho_check_lower_bound(3, 4, row.eps)).epsilon(1e-12));
        CHECK(row.slack == c.slack);
        CHECK(row.endpoint == doctest::Approx(1.0 - 2.0 / 12.0));
        if (std::abs(row.eps - 0.8) < 1e-12) at08 = &row;
    }
    REQUIRE(at08 != nullptr);
    CHECK(at08->rho_check == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(at08->lfa_rho >= 3.0 - 0.05);
}

TEST_CASE("automatic CFL choice") {
    const auto cfls = choose_measured_cfls(1, 2, 1, 64, 3, 0.7);
    CHECK(cfls.size() == 3);
    for (double c : cfls) {
        CHECK(c > 0.5);
        CHECK(c < 1.0);
        CHECK(in_admissible_set(2, c, 1e-9));
    }
    CHECK(std::is_sorted(cfls.begin(), cfls.end()));
}

TEST_CASE("measured row for a rapidly converging case") {
    auto c = ExperimentConfig::defaults(ExperimentKind::MeasuredVsLfa);
    c.n_x = 32;
    c.n_t = 1024;
    const double cfl = choose_measured_cfls(1, 2, 1, c.n_x, 1, 0.5).at(0);
    const auto row = run_measured_row(1, 2, 1, cfl, CoarseKind::Rediscretize, c, 5);
    CHECK(row.lfa_rho < 0.95);
    CHECK(row.seed == 5);
    if (row.measured_rho != kMeasuredSentinel) CHECK(row.abs_diff == doctest::Approx(std::abs(row.measured_rho - row.lfa_rho)));
    CHECK(!row.status.empty());
}

TEST_CASE("probe rows and dyadic frequencies") {
    const auto w = dyadic_omegas(4, 6);
    CHECK(w == std::vector<double>{1.0 / 16, 1.0 / 32, 1.0 / 64});
    const auto row = cgc_probe_row(1, 2, 0.6, CoarseKind::Rediscretize, false, dyadic_omegas(4, 10));
    CHECK(row.within_tolerance());
    CHECK(row.expected == 2.0);
    const auto ch = cgc_probe_row(3, 4, 0.8, CoarseKind::Rediscretize, true, dyadic_omegas(4, 10));
    CHECK(ch.within_tolerance());
    CHECK(ch.expected == 0.0);
}

TEST_CASE("oracle check rejects oversized problems") {
    auto c = ExperimentConfig::defaults(ExperimentKind::OracleCheck);
    c.n_x = 64;
    CHECK_THROWS_AS(run_oracle_check(c, {{}, 1, false}), ConfigError);
}

TEST_CASE("wrap into the low-frequency interval") {
    CHECK(wrap_low(0.0, 4) == 0.0);
    CHECK(wrap_low(kPi / 4, 4) == doctest::Approx(-kPi / 4));
    CHECK(wrap_low(kPi / 2 + 0.1, 4) == doctest::Approx(0.1));
    CHECK(wrap_low(-kPi / 4 - 0.1, 4) == doctest::Approx(kPi / 4 - 0.1));
}
