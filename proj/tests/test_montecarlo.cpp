#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pmtol/csv.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/montecarlo.hpp"
#include "pmtol/units.hpp"

using namespace pmtol;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = PMTOL_TEST_DATA_DIR;

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.process = "type0_pdc";
  cfg.provider = "surrogate:tiln";
  cfg.data_dir = kDataDir;
  cfg.w0_m = from_um(7);
  cfg.lengths_m = {from_mm(20)};
  cfg.delta_ws_m = {0.0};
  cfg.gammas = {1.0};
  cfg.realizations = 4;
  cfg.master_seed = 42;
  cfg.scan_points = 201;
  cfg.metrics = {"max_efficiency"};
  return cfg;
}

struct CellSetup {
  std::shared_ptr<DispersionProvider> provider;
  Process process;
};

CellSetup setup_process(const ExperimentConfig& cfg) {
  CellSetup s;
  s.provider = make_provider(cfg.provider, cfg.data_dir);
  const auto preset = find_preset(cfg.process, cfg.data_dir);
  s.process = preset.process;
  s.process.poling = Poling::with_period(qpm_period(*s.provider, s.process, cfg.w0_m));
  return s;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("happy path with lists and comments") {
    const auto cfg = parse_config(
        "# experiment\n"
        "process = type0_pdc\n"
        "provider = surrogate:tiln\n"
        "w0_um = 7\n"
        "L_mm = 10, 20\n"
        "delta_w_um = 0.0, 0.1\n"
        "gamma = 0, 1\n"
        "realizations = 8\n"
        "master_seed = 99\n"
        "metrics = max_efficiency, squeezing_db\n"
        "eta_ideal = 0.49\n");
    CHECK(cfg.lengths_m.size() == 2);
    CHECK(cfg.delta_ws_m.size() == 2);
    CHECK(cfg.gammas.size() == 2);
    CHECK(cfg.realizations == 8);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.metrics.size() == 2);
  }
  SUBCASE("unknown keys are listed") {
    try {
      parse_config("process = type0_pdc\nL_mm = 10\nbogus_key = 3\nalso_bad = x\n");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == errc::bad_config);
      CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
      CHECK(std::string(e.what()).find("also_bad") != std::string::npos);
    }
  }
  SUBCASE("missing required keys") {
    CHECK_THROWS_AS(parse_config("L_mm = 10\n"), Error);
    CHECK_THROWS_AS(parse_config("process = type0_pdc\n"), Error);
  }
  SUBCASE("unknown metric rejected") {
    CHECK_THROWS_AS(parse_config("process = type0_pdc\nL_mm = 10\nmetrics = nope\n"), Error);
  }
  SUBCASE("grids are canonicalized") {
    const auto a = parse_config("process = type0_pdc\nL_mm = 30, 10, 20\n");
    const auto b = parse_config("process = type0_pdc\nL_mm = 10, 20, 30\n");
    CHECK(a.lengths_m == b.lengths_m);
  }
}

TEST_CASE("run_cell basics") {
  auto cfg = base_config();
  const auto s = setup_process(cfg);

  SUBCASE("zero width error: identical realizations, unit efficiency") {
    const CellKey key{from_mm(20), 0.0, 1.0, cfg.w0_m};
    const auto res = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key);
    const auto& stats = res.metrics.at("max_efficiency");
    CHECK(stats.per_seed.size() == 4);
    CHECK(stats.max - stats.min == 0.0);
    CHECK(stats.mean == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("single realization collapses the aggregates") {
    cfg.realizations = 1;
    const CellKey key{from_mm(20), from_um(0.3), 1.0, cfg.w0_m};
    const auto res = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key);
    const auto& stats = res.metrics.at("max_efficiency");
    CHECK(stats.mean == stats.min);
    CHECK(stats.mean == stats.max);
    CHECK(res.seeds[0] == cfg.master_seed);
  }
  SUBCASE("seed splitting is master XOR r") {
    const CellKey key{from_mm(20), from_um(0.1), 1.0, cfg.w0_m};
    const auto res = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key);
    for (std::size_t r = 0; r < res.seeds.size(); ++r)
      CHECK(res.seeds[r] == (cfg.master_seed ^ r));
  }
  SUBCASE("width window violation fails the cell") {
    const CellKey key{from_mm(20), from_um(5), 1.0, cfg.w0_m};
    CHECK_THROWS_AS(run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key), Error);
  }
  SUBCASE("threaded and serial cells agree bit for bit") {
    const CellKey key{from_mm(20), from_um(0.3), 1.0, cfg.w0_m};
    cfg.realizations = 8;
    const auto serial = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key, 1);
    const auto par = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, key, 8);
    CHECK(serial.metrics.at("max_efficiency").per_seed ==
          par.metrics.at("max_efficiency").per_seed);
    CHECK(serial.metrics.at("max_efficiency").mean == par.metrics.at("max_efficiency").mean);
  }
}

TEST_CASE("pink noise hurts more than white noise") {
  auto cfg = base_config();
  cfg.realizations = 10;
  const auto s = setup_process(cfg);
  const CellKey white{from_mm(20), from_um(0.5), 0.0, cfg.w0_m};
  const CellKey pink{from_mm(20), from_um(0.5), 1.0, cfg.w0_m};
  const auto r0 = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, white, 4);
  const auto r1 = run_cell(*s.provider, s.process, ScanMode::degenerate, cfg, pink, 4);
  CHECK(r0.metrics.at("max_efficiency").mean > r1.metrics.at("max_efficiency").mean);
}

TEST_CASE("experiment driver") {
  const fs::path tmp = fs::temp_directory_path() / "pmtol_mc_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  auto cfg = base_config();
  cfg.lengths_m = {from_mm(10), from_mm(20)};
  cfg.delta_ws_m = {0.0, from_um(0.2)};
  cfg.realizations = 3;
  cfg.scan_points = 101;
  cfg.metrics = {"max_efficiency", "squeezing_db"};

  SUBCASE("single cell experiment equals run_cell") {
    auto one = cfg;
    one.lengths_m = {from_mm(20)};
    one.delta_ws_m = {from_um(0.2)};
    const auto ds = run_experiment(one, 2);
    REQUIRE(ds.cells.size() == 1);
    const auto s = setup_process(one);
    const auto direct = run_cell(*s.provider, s.process, ScanMode::degenerate, one,
                                 ds.cells[0].key, 1);
    CHECK(ds.cells[0].metrics.at("max_efficiency").per_seed ==
          direct.metrics.at("max_efficiency").per_seed);
  }
  SUBCASE("serial and concurrent runs write identical bytes") {
    const auto ds1 = run_experiment(cfg, 1);
    const auto ds8 = run_experiment(cfg, 8);
    write_dataset((tmp / "serial").string(), ds1);
    write_dataset((tmp / "parallel").string(), ds8);
    for (const char* f : {"metric_max_efficiency.csv", "metric_squeezing_db.csv"}) {
      CHECK(slurp(tmp / "serial" / f) == slurp(tmp / "parallel" / f));
    }
  }
  SUBCASE("cells come back in canonical order regardless of declaration") {
    auto permuted = cfg;
    permuted.lengths_m = {from_mm(20), from_mm(10)};
    permuted.delta_ws_m = {from_um(0.2), 0.0};
    // parse_config would canonicalize; run_experiment sorts the keys too.
    const auto ds_a = run_experiment(cfg, 2);
    const auto ds_b = run_experiment(permuted, 2);
    write_dataset((tmp / "a").string(), ds_a);
    write_dataset((tmp / "b").string(), ds_b);
    CHECK(slurp(tmp / "a" / "metric_max_efficiency.csv") ==
          slurp(tmp / "b" / "metric_max_efficiency.csv"));
  }
  SUBCASE("failed cells are reported and the rest emitted") {
    auto bad = cfg;
    bad.delta_ws_m = {0.0, from_um(50)};  // second value exceeds the window
    const auto ds = run_experiment(bad, 2);
    CHECK(ds.failures.size() == 2);  // one per length
    CHECK(ds.cells.size() == 2);
    write_dataset((tmp / "partial").string(), ds);
    const auto manifest = slurp(tmp / "partial" / "manifest.json");
    CHECK(manifest.find("failed_cells") != std::string::npos);
    CHECK(manifest.find("WidthWindowExceeded") != std::string::npos);
  }
  SUBCASE("dataset CSV carries per-seed and aggregate rows") {
    const auto ds = run_experiment(cfg, 2);
    write_dataset((tmp / "fmt").string(), ds);
    const auto text = slurp(tmp / "fmt" / "metric_max_efficiency.csv");
    CHECK(text.rfind("L_mm,delta_w_um,gamma,seed,metric_name,value,mean,min,max\n", 0) == 0);
    CHECK(text.find(",agg,max_efficiency,,") != std::string::npos);
    CHECK(text.find("42,max_efficiency,") != std::string::npos);  // master seed row
  }
}
