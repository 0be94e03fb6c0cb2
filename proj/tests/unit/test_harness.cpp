#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "fdl/harness/config.hpp"
#include "fdl/harness/emit.hpp"
#include "fdl/harness/experiments.hpp"
#include "fdl/harness/report.hpp"

using namespace fdl::harness;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fdl-harness-test-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("shortest round-trip decimal") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1e-300) == "1e-300");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(-INFINITY) == "-inf");
  for (double x : {1.0 / 3.0, std::numbers::pi, 4.0 / (3.0 * std::numbers::pi), 1e17 + 2.0}) {
    CHECK(std::stod(format_real(x)) == x);
  }
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("CSV emission") {
  CsvTable table({"name", "value"});
  table.row().cell("plain").cell(1.5);
  table.row().cell("with,comma").cell(2L);
  table.row().cell("say \"hi\"").cell(true);
  CHECK(table.str() == "name,value\nplain,1.5\n\"with,comma\",2\n\"say \"\"hi\"\"\",true\n");
  CsvTable ragged({"a", "b"});
  ragged.row().cell(1L);
  CHECK_THROWS((void)ragged.str());
}

TEST_CASE("config round trip is byte-identical") {
  const ExperimentConfig config = parse_arguments("slab-2d", {"s=0.5", "j2=0,5,17", "trunc_radius=200"});
  const std::string once = serialize(config);
  const ExperimentConfig back = parse_config_text(once);
  CHECK(back == config);
  CHECK(serialize(back) == once);

  ExperimentConfig seeded = config;
  seeded.seed = 18446744073709551615ULL;
  seeded.output_dir = "out/dir";
  CHECK(serialize(parse_config_text(serialize(seeded))) == serialize(seeded));
  CHECK(parse_config_text(serialize(seeded)) == seeded);
}

TEST_CASE("key=value documents and merging") {
  const ExperimentConfig file = parse_config_text("# sweep\nexperiment = apply\ns=0.25\nh = 0.5\nseed=9\n");
  CHECK(file.experiment == "apply");
  CHECK(file.params.at("s") == "0.25");
  CHECK(file.params.at("h") == "0.5");
  CHECK(file.seed == 9u);
  const ExperimentConfig merged = merge(file, parse_arguments("apply", {"s=0.75"}));
  CHECK(merged.params.at("s") == "0.75");
  CHECK(merged.params.at("h") == "0.5");
  CHECK(merged.seed == 9u);
  CHECK_THROWS_AS(parse_arguments("apply", {"novalue"}), validation_error);
  CHECK_THROWS_AS(parse_config_text("{\"nested\": {\"a\": 1}}"), validation_error);
}

TEST_CASE("validation names every offending field") {
  try {
    validate(parse_arguments("kernel-dump", {"s=1.5", "h=-1", "bogus=3"}));
    FAIL("expected a validation error");
  } catch (const validation_error& e) {
    const auto fields = e.fields();
    CHECK(std::find(fields.begin(), fields.end(), "s") != fields.end());
    CHECK(std::find(fields.begin(), fields.end(), "h") != fields.end());
    CHECK(std::find(fields.begin(), fields.end(), "bogus") != fields.end());
  }
  CHECK_THROWS_AS(validate(parse_arguments("no-such-experiment", {})), validation_error);
  CHECK_THROWS_AS(validate(parse_arguments("carleman-commutator", {"h=0.1", "tau=6"})), validation_error);
  CHECK_THROWS_AS(validate(parse_arguments("ucp-lattice", {"X=0,1"})), validation_error);
  CHECK_THROWS_AS(validate(parse_arguments("kernel-dump", {"s=abc"})), validation_error);
  CHECK_NOTHROW(validate(parse_arguments("ucp-lattice", {"s=0.5", "h=1", "X=0"})));
}

TEST_CASE("every experiment validates with its defaults") {
  for (const auto& name : experiment_names()) CHECK_NOTHROW(validate(parse_arguments(name, {})));
  CHECK(experiment_names().size() == 12);
}

TEST_CASE("kernel-dump writes 21 rows with the closed-form value") {
  const auto dir = scratch_dir("kernel-dump");
  ExperimentConfig config = parse_arguments("kernel-dump", {"s=0.5", "h=1", "d=1", "radius=10"});
  config.output_dir = dir;
  const ExperimentReport report = run(config);
  CHECK(report.passed());
  const auto rows = lines(slurp(dir / "kernel.csv"));
  REQUIRE(rows.size() == 22);
  CHECK(rows.front() == "m,value");
  const auto comma = rows[12].find(',');
  CHECK(rows[12].substr(0, comma) == "1");
  CHECK(std::abs(std::stod(rows[12].substr(comma + 1)) - 4.0 / (3.0 * std::numbers::pi)) <= 1e-15);
}

TEST_CASE("manifest lists every artifact with its hash") {
  const auto dir = scratch_dir("manifest");
  ExperimentConfig config = parse_arguments("ucp-lattice", {"s=0.5", "h=1", "X=0"});
  config.output_dir = dir;
  const ExperimentReport report = run(config);
  CHECK(report.passed());
  for (const Check& check : report.checks) {
    if (check.name.rfind("residual", 0) == 0) CHECK(check.measured <= 1e-12);
  }
  const auto manifest = lines(slurp(dir / "manifest.txt"));
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().filename() != "manifest.txt") ++files;
  }
  CHECK(manifest.size() == files);
  for (const std::string& line : manifest) {
    std::istringstream in(line);
    std::string hash;
    std::size_t bytes = 0;
    std::string file;
    in >> hash >> bytes >> file;
    const std::string content = slurp(dir / file);
    CHECK(hash == fnv1a_hex(content));
    CHECK(bytes == content.size());
  }
}

TEST_CASE("runs are deterministic apart from timing") {
  const ExperimentConfig config = parse_arguments("transference", {"N=4", "trials=3"});
  const auto a = to_json(run(config), false).dump();
  const auto b = to_json(run(config), false).dump();
  CHECK(a == b);
  ExperimentConfig reseeded = config;
  reseeded.seed = 99;
  CHECK(to_json(run(reseeded), false).dump() != a);
}

TEST_CASE("module errors surface with context") {
  const ExperimentReport report = run(parse_arguments("slab-2d", {"tol=0.001"}));
  REQUIRE(report.error.has_value());
  CHECK(report.error->rfind("slab-2d: ", 0) == 0);
  CHECK(report.error->find("truncation tail") != std::string::npos);
  CHECK_FALSE(report.passed());
}

TEST_CASE("failing checks carry measured value and threshold") {
  ExperimentReport report;
  report.expect_at_most("small", 2.0, 1.0);
  REQUIRE(report.checks.size() == 1);
  CHECK_FALSE(report.checks.front().passed);
  const std::string text = summary(report);
  CHECK(text.find("FAIL small") != std::string::npos);
  CHECK(text.find('2') != std::string::npos);
  CHECK(text.find('1') != std::string::npos);
}

TEST_CASE("self test passes, is deterministic and catches a corrupted kernel constant") {
  const ExperimentReport clean = self_test();
  CHECK(clean.passed());
  CHECK(clean.wall_time < 30.0);
  CHECK(to_json(clean, false).dump() == to_json(self_test(), false).dump());

  SelfTestOptions corrupted;
  corrupted.kernel_constant_scale = 1.0 + 1e-6;
  const ExperimentReport bad = self_test(corrupted);
  CHECK_FALSE(bad.passed());
  for (const Check& check : bad.checks) {
    const bool kernel_check = check.name.find("kernel closed form") != std::string::npos;
    CHECK(check.passed != kernel_check);
  }
}

}  // TEST_SUITE
