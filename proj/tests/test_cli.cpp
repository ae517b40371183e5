#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "uniqd/snapshot.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the uniqd binary, from argv[1]

int run_cli(const std::string& args)
{
    const int rc = std::system((g_cli + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

fs::path sandbox()
{
    const fs::path dir = fs::temp_directory_path() / "uniqd_test_cli";
    fs::create_directories(dir);
    return dir;
}

void write_desk_config(const fs::path& path, const std::string& variant)
{
    std::ofstream out(path);
    out << R"({
  "variant": ")" << variant << R"(",
  "n_iterations": 30,
  "batch_size": 8,
  "container": {"target": 50},
  "encoder": {"kind": "pca"},
  "seed": 3
})";
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("run subcommand")
{
    const fs::path dir = sandbox();
    const fs::path cfg = dir / "config.json";
    write_desk_config(cfg, "HC-Nav");

    SUBCASE("missing config exits 1")
    {
        CHECK(run_cli("run --config " + (dir / "nope.json").string()) == 1);
    }

    SUBCASE("bad config key exits 1")
    {
        std::ofstream(dir / "bad.json") << R"({"iterations": 5})";
        CHECK(run_cli("run --config " + (dir / "bad.json").string()) == 1);
    }

    SUBCASE("desk run emits artifacts and reruns are byte-identical")
    {
        const fs::path out1 = dir / "out1";
        CHECK(run_cli("run --config " + cfg.string() + " --variant HC-Nav --seed 3 --out-dir " +
                      out1.string()) == 0);
        CHECK(fs::exists(out1 / "snapshot.csv"));
        CHECK(fs::exists(out1 / "manifest.json"));
        CHECK(fs::exists(out1 / "coverage_nav.csv"));

        const fs::path out2 = dir / "out2";
        CHECK(run_cli("run --config " + cfg.string() + " --variant HC-Nav --seed 3 --out-dir " +
                      out2.string()) == 0);
        CHECK(slurp(out1 / "snapshot.csv") == slurp(out2 / "snapshot.csv"));
    }

    fs::remove_all(dir);
}

TEST_CASE("eval subcommand")
{
    const fs::path dir = sandbox();
    const fs::path cfg = dir / "config.json";
    write_desk_config(cfg, "MeS");
    const fs::path out = dir / "run_out";
    REQUIRE(run_cli("run --config " + cfg.string() + " --out-dir " + out.string()) == 0);
    const fs::path snap = out / "snapshot.csv";

    SUBCASE("all three tasks produce three csv files")
    {
        const fs::path eval_dir = dir / "eval_out";
        CHECK(run_cli("eval " + snap.string() + " --task nav --task forw --task turn --out-dir " +
                      eval_dir.string() + " --plot") == 0);
        CHECK(fs::exists(eval_dir / "coverage_nav.csv"));
        CHECK(fs::exists(eval_dir / "coverage_forw.csv"));
        CHECK(fs::exists(eval_dir / "coverage_turn.csv"));
        CHECK(fs::exists(eval_dir / "scatter_nav.svg"));
    }

    SUBCASE("corrupted snapshot exits 1")
    {
        const fs::path bad = dir / "bad_snapshot.csv";
        std::ofstream bf(bad);
        bf << slurp(snap);
        bf << "this,is,not,a,valid,row\n";
        bf.close();
        CHECK(run_cli("eval " + bad.string() + " --task nav") == 1);
    }

    SUBCASE("single-entry snapshot has max coverage 1")
    {
        const auto rows = uniqd::read_snapshot(snap);
        REQUIRE(!rows.empty());
        const fs::path single = dir / "single.csv";
        uniqd::write_snapshot(single, {rows[0]});
        const fs::path eval_dir = dir / "eval_single";
        CHECK(run_cli("eval " + single.string() + " --task nav --out-dir " + eval_dir.string()) == 0);
        const std::string csv = slurp(eval_dir / "coverage_nav.csv");
        CHECK(csv.find("-inf,1,") != std::string::npos);
    }

    fs::remove_all(dir);
}

TEST_CASE("compare subcommand")
{
    const fs::path dir = sandbox();
    const fs::path cfg = dir / "config.json";
    write_desk_config(cfg, "HC-Forw");
    const fs::path out1 = dir / "cmp1";
    const fs::path out2 = dir / "cmp2";
    REQUIRE(run_cli("run --config " + cfg.string() + " --seed 1 --out-dir " + out1.string()) == 0);
    REQUIRE(run_cli("run --config " + cfg.string() + " --seed 2 --out-dir " + out2.string()) == 0);

    SUBCASE("two manifests merge into raw rows plus summary")
    {
        CHECK(run_cli("compare " + (out1 / "manifest.json").string() + " " +
                      (out2 / "manifest.json").string() + " --task forw") == 0);
    }

    SUBCASE("fewer than two manifests exits 1")
    {
        CHECK(run_cli("compare " + (out1 / "manifest.json").string() + " --task forw") == 1);
    }

    SUBCASE("unknown task exits 1")
    {
        CHECK(run_cli("compare " + (out1 / "manifest.json").string() + " " +
                      (out2 / "manifest.json").string() + " --task sideways") == 1);
    }

    fs::remove_all(dir);
}

int main(int argc, char** argv)
{
    doctest::Context context;
    int arg_end = argc;
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        arg_end = argc - 1;
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest options] <path-to-uniqd-binary>\n");
        return 1;
    }
    context.applyCommandLine(arg_end, argv);
    return context.run();
}
