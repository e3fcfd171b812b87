// End-to-end tests of the command-line tool: the full synthetic pipeline,
// determinism of persisted artefacts, tolerance of corrupt inputs, and the
// exit-code contract (0 success, 2 input problems, 1 internal errors).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

#ifndef RINGPLS_CLI_PATH
#error "RINGPLS_CLI_PATH must point at the built command-line binary"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd =
        std::string(RINGPLS_CLI_PATH) + " " + args + " >>/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

/// One shared fixture directory, generated once; tests that mutate state
/// work on copies or separate output directories.
class CliPipeline : public ::testing::Test {
  protected:
    static fs::path dir() {
        static const fs::path d =
            fs::temp_directory_path() / "ringpls_cli_fixture";
        return d;
    }
    static std::string cfg() { return (dir() / "config.json").string(); }

    static void SetUpTestSuite() {
        fs::remove_all(dir());
        ASSERT_EQ(run("synth --out " + dir().string() +
                      " --days 4 --stations 3 --frame 161 --seed 5"),
                  0);
    }
    static void TearDownTestSuite() { fs::remove_all(dir()); }
};

}  // namespace

TEST_F(CliPipeline, Step1IngestMaps) {
    ASSERT_EQ(run("ingest-maps --config " + cfg()), 0);
    EXPECT_TRUE(fs::exists(dir() / "out" / "intensity.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "intensity_totals.csv"));
    // 3 stations x 6 days x 24 hours, one totals line each plus header.
    EXPECT_EQ(line_count(dir() / "out" / "intensity_totals.csv"), 1u + 3u * 6u * 24u);
}

TEST_F(CliPipeline, Step2IngestPollution) {
    ASSERT_EQ(run("ingest-pollution --config " + cfg()), 0);
    EXPECT_TRUE(fs::exists(dir() / "out" / "pollution_clean.csv"));
    EXPECT_EQ(line_count(dir() / "out" / "completeness.csv"), 4u);  // header + 3
}

TEST_F(CliPipeline, Step3BuildDataset) {
    ASSERT_EQ(run("build-dataset --config " + cfg()), 0);
    EXPECT_TRUE(fs::exists(dir() / "out" / "dataset.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "dataset_provenance.json"));
    EXPECT_GT(line_count(dir() / "out" / "dataset.csv"), 50u);
}

TEST_F(CliPipeline, Step4Train) {
    ASSERT_EQ(run("train --config " + cfg()), 0);
    EXPECT_TRUE(fs::exists(dir() / "out" / "model.json"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "cv_report.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "cv_folds.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "train_summary.json"));
}

TEST_F(CliPipeline, Step5Validate) {
    ASSERT_EQ(run("validate --config " + cfg()), 0);
    EXPECT_TRUE(fs::exists(dir() / "out" / "predictions.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "validation_metrics.json"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "ranges.csv"));
    EXPECT_TRUE(fs::exists(dir() / "out" / "residuals.csv"));
    EXPECT_EQ(line_count(dir() / "out" / "ranges.csv"), 61u);  // header + 60
}

TEST_F(CliPipeline, Step6Similarity) {
    ASSERT_EQ(run("similarity --config " + cfg()), 0);
    EXPECT_EQ(line_count(dir() / "out" / "similarity.csv"), 3u);  // header + 2
    EXPECT_TRUE(fs::exists(dir() / "out" / "similarity_breakdown.csv"));
}

TEST_F(CliPipeline, Step7Report) {
    ASSERT_EQ(run("report --config " + cfg()), 0);
    for (const char* name :
         {"profiles.csv", "correlations_totals.csv", "correlations_totals_long.csv",
          "correlations_full.csv", "correlations_full_long.csv", "exceedances.csv",
          "vip.csv", "vip_long.csv", "components.csv"}) {
        EXPECT_TRUE(fs::exists(dir() / "out" / name)) << name;
    }
    EXPECT_EQ(line_count(dir() / "out" / "vip.csv"), 61u);
    // 4 intensity totals + 9 pollutants: 13x13 matrix plus header.
    EXPECT_EQ(line_count(dir() / "out" / "correlations_totals.csv"), 14u);
}

TEST_F(CliPipeline, Step8RerunsAreByteIdentical) {
    const std::string model_before = slurp(dir() / "out" / "model.json");
    const std::string dataset_before = slurp(dir() / "out" / "dataset.csv");
    ASSERT_FALSE(model_before.empty());

    ASSERT_EQ(run("build-dataset --config " + cfg()), 0);
    ASSERT_EQ(run("train --config " + cfg()), 0);

    EXPECT_EQ(slurp(dir() / "out" / "dataset.csv"), dataset_before);
    EXPECT_EQ(slurp(dir() / "out" / "model.json"), model_before);
}

TEST_F(CliPipeline, Step9SeedOverrideChangesTheSplit) {
    const std::string model_before = slurp(dir() / "out" / "model.json");
    // --out rebases every artefact path, so the alternate directory needs
    // its own dataset; the file itself is seed-independent, copy it over.
    const fs::path alt = dir() / "out_seed";
    fs::create_directories(alt);
    fs::copy_file(dir() / "out" / "dataset.csv", alt / "dataset.csv",
                  fs::copy_options::overwrite_existing);
    ASSERT_EQ(run("train --config " + cfg() + " --seed 99 --out " + alt.string()), 0);
    EXPECT_NE(slurp(alt / "model.json"), model_before);
}

TEST_F(CliPipeline, Step10OverridesAndModes) {
    const fs::path alt = dir() / "out_modes";
    fs::create_directories(alt);
    fs::copy_file(dir() / "out" / "dataset.csv", alt / "dataset.csv",
                  fs::copy_options::overwrite_existing);
    ASSERT_EQ(run("train --config " + cfg() + " --split chronological --out " +
                  alt.string()),
              0);
    EXPECT_TRUE(fs::exists(alt / "model.json"));
    ASSERT_EQ(run("train --config " + cfg() +
                  " --paper-faithful-standardisation --out " + alt.string()),
              0);
    const fs::path no_model = dir() / "out_no_model";
    ASSERT_EQ(run("similarity --config " + cfg() + " --chi2-standardised --out " +
                  no_model.string()),
              2)
        << "similarity without a model in --out must fail with an input error";
}

TEST_F(CliPipeline, CorruptMapIsSkippedButAllCorruptFails) {
    // One garbage file among good ones: ingested with a warning, exit 0.
    const fs::path bad = dir() / "maps" / "ST01_2024-03-04T99.png";
    std::ofstream(bad, std::ios::binary) << "not a png";
    EXPECT_EQ(run("ingest-maps --config " + cfg()), 0);
    fs::remove(bad);

    // A directory holding only garbage must fail loudly.
    const fs::path lonely = dir() / "only_bad";
    fs::create_directories(lonely / "maps");
    std::ofstream(lonely / "maps" / "ST01_2024-03-04T08.png") << "junk";
    std::ofstream(lonely / "config.json") << [&] {
        std::ostringstream ss;
        ss << R"({"stations": {"ST01": {"centre_x": 80, "centre_y": 80, )"
           << R"("outer_radius_px": 76}}, "training_stations": ["ST01"],)"
           << R"( "paths": {"maps_dir": "maps", "out_dir": "out"}})";
        return ss.str();
    }();
    EXPECT_EQ(run("ingest-maps --config " + (lonely / "config.json").string()), 2);
}

TEST_F(CliPipeline, ExitCodeContract) {
    EXPECT_EQ(run("train --config /nonexistent/config.json"), 2);
    EXPECT_EQ(run("definitely-not-a-command"), 2);
    EXPECT_EQ(run("train"), 2);  // missing required --config
    EXPECT_EQ(run("--help"), 0);

    // Empty maps directory: an input error, not a crash.
    const fs::path empty = dir() / "empty_maps";
    fs::create_directories(empty / "maps");
    std::ofstream(empty / "config.json")
        << R"({"stations": {"ST01": {"centre_x": 80, "centre_y": 80, )"
        << R"("outer_radius_px": 76}}, "training_stations": ["ST01"],)"
        << R"( "paths": {"maps_dir": "maps", "out_dir": "out"}})";
    EXPECT_EQ(run("ingest-maps --config " + (empty / "config.json").string()), 2);

    // validate before any model exists in a fresh out dir.
    EXPECT_EQ(run("validate --config " + cfg() + " --out " +
                  (dir() / "fresh_out").string()),
              2);
}
