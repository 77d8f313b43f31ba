// End-to-end checks of the installed command line, run as subprocesses.
// AIRFORGE_CLI_DIR points at the directory holding the `airforge` binary.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "support/test_util.hpp"

using test::TempDir;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string &args) {
    TempDir scratch;
    std::string capture = scratch.file("out.txt");
    // Run with the binary's directory as cwd so argv[0] (and therefore the
    // help text) is stable.
    std::string cmd = "cd " AIRFORGE_CLI_DIR " && ./airforge " + args + " > '" + capture +
                      "' 2>&1";
    int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = status == -1 ? -1 : WEXITSTATUS(status);
    result.output = test::read_text_file(capture);
    return result;
}

std::string write_tiny_config(const TempDir &dir, uint64_t seed = 5, int64_t target = 1) {
    std::string path = dir.file("config.json");
    test::write_text_file(path, R"json({
      "seed": )json" + std::to_string(seed) +
                                    R"json(,
      "textures": {"count": 1},
      "models": [{"id": "quad", "type": "uav", "arms": 4, "seed": 1}],
      "environments": [{"id": "sky", "type": "sky", "condition": "clear_day",
                        "sun_elevation": 45, "width": 64, "seed": 1}],
      "target_images": )json" +
                                    std::to_string(target) + R"json(,
      "ranges": {"objects_per_image": [1, 1]},
      "render": {"width": 32, "height": 32, "spp": 2, "max_depth": 2}
    })json");
    return path;
}

std::string hash_dir(const fs::path &root) {
    // Order-stable digest of every file's bytes.
    std::vector<std::string> entries;
    for (const auto &entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            entries.push_back(fs::relative(entry.path(), root).string() + "\x01" +
                              test::read_text_file(entry.path().string()));
    std::sort(entries.begin(), entries.end());
    std::string all;
    for (const std::string &e : entries) all += e + "\x02";
    return std::to_string(std::hash<std::string>{}(all)) + "/" + std::to_string(entries.size());
}

}  // namespace

TEST_CASE("--help output matches the golden file") {
    CliResult result = run_cli("--help");
    CHECK(result.exit_code == 0);
    std::string golden = test::read_text_file(std::string(AIRFORGE_TEST_DATA) + "/cli_help.txt");
    REQUIRE(!golden.empty());
    CHECK(result.output == golden);
}

TEST_CASE("generate: minimal one-image run exits cleanly") {
    TempDir dir;
    std::string config = write_tiny_config(dir);
    CliResult result = run_cli("generate -c '" + config + "' -o '" + dir.file("ds") + "' -j 1");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("plan: 1 models x 1 environments x 1 textures") != std::string::npos);
    CHECK(result.output.find("rendered 1") != std::string::npos);
    CHECK(fs::exists(dir.path / "ds" / "images" / "000000.png"));
}

TEST_CASE("generate: --seed makes runs reproducible") {
    TempDir dir;
    std::string config = write_tiny_config(dir, 1, 2);
    REQUIRE(run_cli("generate -c '" + config + "' -o '" + dir.file("a") + "' --seed 42")
                .exit_code == 0);
    REQUIRE(run_cli("generate -c '" + config + "' -o '" + dir.file("b") + "' --seed 42")
                .exit_code == 0);
    REQUIRE(run_cli("generate -c '" + config + "' -o '" + dir.file("c") + "' --seed 43")
                .exit_code == 0);
    CHECK(hash_dir(dir.path / "a") == hash_dir(dir.path / "b"));
    CHECK(hash_dir(dir.path / "a") != hash_dir(dir.path / "c"));
}

TEST_CASE("generate: a missing config names the path and fails") {
    CliResult result = run_cli("generate -c /nonexistent/cfg.json -o /tmp/never");
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("/nonexistent/cfg.json") != std::string::npos);
}

TEST_CASE("validate: clean pass is exit 0, violations exit 1") {
    TempDir dir;
    std::string config = write_tiny_config(dir, 2, 2);
    REQUIRE(run_cli("generate -c '" + config + "' -o '" + dir.file("ds") + "'").exit_code == 0);
    CHECK(run_cli("validate '" + dir.file("ds") + "'").exit_code == 0);
    fs::remove(dir.path / "ds" / "labels" / "000001.txt");
    CliResult result = run_cli("validate '" + dir.file("ds") + "'");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("000001.txt") != std::string::npos);
}

TEST_CASE("eval: perfect, empty and unknown-image detections") {
    TempDir dir;
    test::write_text_file(dir.file("gt.json"), R"({
      "images": [{"id": 0, "file_name": "x.png", "width": 100, "height": 100}],
      "annotations": [{"id": 1, "image_id": 0, "category_id": 1,
                       "bbox": [10, 10, 20, 20], "area": 400, "iscrowd": 0}],
      "categories": [{"id": 1, "name": "uav"}]
    })");

    test::write_text_file(dir.file("perfect.txt"), "0 0 0.9 10 10 30 30\n");
    CliResult perfect = run_cli("eval --gt '" + dir.file("gt.json") + "' --detections '" +
                                dir.file("perfect.txt") + "' --report '" +
                                dir.file("r1.json") + "'");
    CHECK(perfect.exit_code == 0);
    CHECK(perfect.output.find("mAP@0.50 1.000") != std::string::npos);

    test::write_text_file(dir.file("empty.txt"), "");
    CliResult empty = run_cli("eval --gt '" + dir.file("gt.json") + "' --detections '" +
                              dir.file("empty.txt") + "' --report '" + dir.file("r2.json") + "'");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output.find("mAP@0.50 0.000") != std::string::npos);
    CHECK(empty.output.find("FN 1") != std::string::npos);

    test::write_text_file(dir.file("unknown.txt"), "7 0 0.9 10 10 30 30\n");
    CliResult unknown = run_cli("eval --gt '" + dir.file("gt.json") + "' --detections '" +
                                dir.file("unknown.txt") + "' --report '" + dir.file("r3.json") +
                                "'");
    CHECK(unknown.exit_code == 0);
    CHECK(unknown.output.find("warning") != std::string::npos);
    CHECK(unknown.output.find("FP 1") != std::string::npos);
}

TEST_CASE("anchors: fixpoint echo, default k, and k over distinct boxes") {
    TempDir labels;
    for (int i = 0; i < 4; ++i)
        test::write_text_file(labels.file("im" + std::to_string(i) + ".txt"),
                              "0 0.5 0.5 0.200000 0.100000\n");
    CliResult one = run_cli("anchors --labels '" + labels.str() + "' -k 1");
    CHECK(one.exit_code == 0);
    CHECK(one.output.find("0.200000,0.100000") != std::string::npos);

    TempDir many;
    std::string lines;
    for (int i = 1; i <= 20; ++i)
        lines += "0 0.5 0.5 0." + std::string(i < 10 ? "0" : "") + std::to_string(i) + " 0." +
                 std::string(i < 10 ? "0" : "") + std::to_string(i) + "\n";
    test::write_text_file(many.file("all.txt"), lines);
    CliResult nine = run_cli("anchors --labels '" + many.file("all.txt") + "'");
    CHECK(nine.exit_code == 0);
    int anchor_lines = 0;
    for (size_t pos = 0; (pos = nine.output.find(" @ 608)", pos)) != std::string::npos; ++pos)
        ++anchor_lines;
    CHECK(anchor_lines == 9);

    CliResult too_many = run_cli("anchors --labels '" + labels.str() + "' -k 10");
    CHECK(too_many.exit_code != 0);
}

TEST_CASE("perturb: identity strength, brightening, missing input") {
    TempDir dir;
    std::string config = write_tiny_config(dir, 3, 1);
    REQUIRE(run_cli("generate -c '" + config + "' -o '" + dir.file("ds") + "'").exit_code == 0);
    std::string image = (dir.path / "ds" / "images" / "000000.png").string();

    CliResult identity = run_cli("perturb --input '" + image + "' --mode underexposed "
                                 "--strength 1.0");
    CHECK(identity.exit_code == 0);
    std::string sibling = (dir.path / "ds" / "images" / "000000.underexposed.png").string();
    CHECK(test::read_text_file(sibling) == test::read_text_file(image));

    CliResult missing = run_cli("perturb --input /nonexistent/dir --mode overexposed");
    CHECK(missing.exit_code != 0);
}

TEST_CASE("assets writes the pack and honors --output") {
    TempDir dir;
    CliResult result = run_cli("assets -o '" + dir.file("pack") + "'");
    CHECK(result.exit_code == 0);
    int objs = 0, hdrs = 0;
    for (const auto &e : fs::directory_iterator(dir.path / "pack" / "models")) ++objs, (void)e;
    for (const auto &e : fs::directory_iterator(dir.path / "pack" / "envs")) ++hdrs, (void)e;
    CHECK(objs == 10);
    CHECK(hdrs == 10);
}
