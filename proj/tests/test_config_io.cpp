#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dnls/commands.hpp"
#include "dnls/config.hpp"
#include "dnls/errors.hpp"
#include "dnls/table.hpp"

using namespace dnls;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dnls_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig tiny_config(const fs::path& out) {
  RunConfig c;
  c.n = 256;
  c.length = 64.0;
  c.t_final = 6.0;
  c.epsilons = {0.1};
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty text gives the defaults") {
    const auto c = parse_config("");
    CHECK(c == RunConfig{});
    CHECK(c.n == 4096);
    CHECK(c.length == 256.0);
    CHECK(c.dt == 0.01);
    CHECK(c.t_final == 400.0);
    CHECK(c.snapshot_ratio == doctest::Approx(std::pow(2.0, 0.25)));
    CHECK(parse_config("# only a comment\n\n   \n") == RunConfig{});
  }

  TEST_CASE("values and comments") {
    const auto c = parse_config(
        "grid.n = 512   # small\n"
        "grid.length = 64\n"
        "data.u2.profile = zero\n"
        "epsilon = 0.05, 0.1 ,0.2\n"
        "outputs.tables = sweep, orderfit\n");
    CHECK(c.n == 512);
    CHECK(c.length == 64.0);
    CHECK(c.u2.kind == ProfileSpec::Kind::zero);
    CHECK(c.epsilons == std::vector<double>{0.05, 0.1, 0.2});
    CHECK(c.wants("sweep"));
    CHECK_FALSE(c.wants("fields"));
  }

  TEST_CASE("errors carry line numbers") {
    CHECK(error_line("grid.n = 1000") == 1);
    CHECK(error_line("\n\ngrid.bogus = 1") == 3);
    CHECK(error_line("grid.n = 512\ngrid.n = 1024") == 2);
    CHECK(error_line("time.dt = 0.0x1") == 1);
    CHECK(error_line("\ndata.u1.width = -2") == 2);
    CHECK(error_line("epsilon = 0.1, -0.1") == 1);
    CHECK(error_line("just some words") == 1);
    CHECK(error_line("data.u1.profile = square") == 1);
    CHECK(error_line("outputs.tables = plots") == 1);
    CHECK(error_line("time.t_final = nan") == 1);
    // Schedule cross-check: growth start below 40 base steps.
    CHECK(error_line("time.dt = 0.1\n\ntime.dt_growth_start = 1\n") == 3);
    try {
      parse_config("grid.n = 1000");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("not a power of two") != std::string::npos);
    }
  }

  TEST_CASE("serialize round trip") {
    auto custom = parse_config("grid.n = 2048\nepsilon = 0.3, 0.1\ntime.extra_snapshots = 3.5, 7\n");
    custom.u1.amplitude_im = 0.1 + 0.2;  // not exactly representable in short decimal
    for (const auto& c : {RunConfig{}, custom, scenario_config(Scenario::A), scenario_config(Scenario::B),
                          scenario_config(Scenario::decoupled), scenario_config(Scenario::generic)}) {
      CHECK(parse_config(serialize_config(c)) == c);
    }
  }

  TEST_CASE("bundled configs match the built-in scenarios") {
    const fs::path dir = DNLS_SOURCE_DIR "/configs";
    CHECK(load_config((dir / "scenario_b.cfg").string()) == scenario_config(Scenario::B));
    CHECK(load_config((dir / "scenario_a.cfg").string()) == scenario_config(Scenario::A));
    CHECK(load_config((dir / "symmetric.cfg").string()) == scenario_config(Scenario::symmetric));
    CHECK(load_config((dir / "decoupled.cfg").string()) == scenario_config(Scenario::decoupled));
    CHECK(load_config((dir / "default.cfg").string()) == scenario_config(Scenario::generic));
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/missing.cfg"), IoError);
  }

  TEST_CASE("scenario names") {
    CHECK(parse_scenario("A") == Scenario::A);
    CHECK(parse_scenario("B") == Scenario::B);
    CHECK(parse_scenario("symmetric") == Scenario::symmetric);
    CHECK_THROWS_AS(parse_scenario("C"), InvalidArgument);
    CHECK(std::string(to_string(Scenario::B)) == "B");
  }
}

TEST_SUITE("tables") {
  TEST_CASE("random doubles round trip bitwise") {
    const auto dir = scratch_dir("roundtrip");
    std::mt19937_64 rng(12345);
    std::vector<std::vector<double>> rows;
    while (rows.size() < 200) {
      std::vector<double> row;
      while (row.size() < 4) {
        const double v = std::bit_cast<double>(rng());
        if (std::isfinite(v)) row.push_back(v);
      }
      rows.push_back(row);
    }
    rows.push_back({0.0, -0.0, 5e-324, 1.7976931348623157e308});
    const auto path = (dir / "t.tsv").string();
    write_table(path, {"a", "b", "c", "d"}, rows);
    const auto back = read_table(path);
    CHECK(back.header == std::vector<std::string>{"a", "b", "c", "d"});
    REQUIRE(back.rows.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::bit_cast<std::uint64_t>(back.rows[i][j]) == std::bit_cast<std::uint64_t>(rows[i][j]));
      }
    }
  }

  TEST_CASE("empty table is a header line") {
    const auto dir = scratch_dir("empty");
    const auto path = dir / "e.tsv";
    write_table(path.string(), {"xi", "m"}, {});
    CHECK(slurp(path) == "# xi\tm\n");
    CHECK(read_table(path.string()).rows.empty());
  }

  TEST_CASE("table errors") {
    const auto dir = scratch_dir("errors");
    CHECK_THROWS_AS(write_table((dir / "x.tsv").string(), {"a", "b"}, {{1.0}}), InvalidArgument);
    CHECK_THROWS_AS(write_table((dir / "no/such/dir/x.tsv").string(), {"a"}, {}), IoError);
    CHECK_THROWS_AS(read_table((dir / "absent.tsv").string()), IoError);
    std::ofstream(dir / "bad.tsv") << "# a\tb\n1\tfoo\n";
    try {
      read_table((dir / "bad.tsv").string());
      FAIL("expected an error");
    } catch (const IoError& e) {
      const std::string what = e.what();
      CHECK(what.find("bad.tsv") != std::string::npos);
      CHECK(what.find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("mprofile and classification schemas") {
    const auto dir = scratch_dir("mprofile");
    const auto c = tiny_config(dir);
    command_mprofile(c);
    const auto m = read_table((dir / "mprofile.tsv").string());
    CHECK(m.header == std::vector<std::string>{"xi", "m_endpoint", "m_integral", "tail_estimate"});
    CHECK(m.rows.size() == c.n);
    const auto cl = read_table((dir / "classification.tsv").string());
    CHECK(cl.header == std::vector<std::string>{"xi", "m", "tag"});
    for (const auto& row : cl.rows) CHECK((row[2] == 0.0 || row[2] == 1.0 || row[2] == 2.0));
    CHECK(fs::exists(dir / "mprofile_summary.tsv"));
  }

  TEST_CASE("evolve tables") {
    const auto dir = scratch_dir("evolve");
    auto c = tiny_config(dir);
    c.epsilons = {0.1, 0.2};
    std::vector<std::string> lines;
    command_evolve(c, [&](std::string_view l) { lines.emplace_back(l); });
    CHECK(output_path(c, "trajectory", 0.1) == (dir / "trajectory_eps0.1.tsv").string());
    const auto traj = read_table((dir / "trajectory_eps0.2.tsv").string());
    CHECK(traj.header.front() == "t");
    CHECK(traj.rows.back()[0] == doctest::Approx(6.0));
    const auto fields = read_table((dir / "fields_eps0.1.tsv").string());
    CHECK(fields.rows.size() == c.n);
    CHECK(read_table((dir / "observers_eps0.1.tsv").string()).rows.size() == 601);
    CHECK(lines.size() == 8);
  }

  TEST_CASE("sweep tables") {
    const auto dir = scratch_dir("sweep");
    auto c = tiny_config(dir);
    c.epsilons = {0.05, 0.1, 0.15, 0.2};
    command_sweep(c, 2);
    CHECK(read_table((dir / "sweep.tsv").string()).rows.size() == 4);
    const auto fit = slurp(dir / "orderfit.tsv");
    CHECK(fit.rfind("# quantity\tslope\tlog_intercept\tresidual\n", 0) == 0);
    CHECK(fit.find("theorem_defect\t") != std::string::npos);
  }
}
