#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(TWI_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        r.output.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("compute") {
    auto r = run_cli("compute --surface p2 --d 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "240\n");

    CHECK(run_cli("compute --surface p2 --d 1").output == "1\n");
    CHECK(run_cli("compute --spec p2:d=3").output == "8\n");

    auto json = run_cli("compute --surface p2 --d 5 --format json");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"value\":\"18264\"") != std::string::npos);
    CHECK(json.output.find("\"polygon\":\"P:5,0,5,0,5,0\"") != std::string::npos);
    CHECK(json.output.find("\"sigma\":5") != std::string::npos);

    auto bad = run_cli("compute --surface p2k --k 1 --d 2 --d1 2");
    CHECK(bad.exit_code != 0);
    CHECK(bad.output.find("d-d1 = 0 violates ampleness") != std::string::npos);
}

TEST_CASE("compute output is byte identical across runs") {
    auto a = run_cli("compute --surface p1xp1 --d1 2 --d2 3 --format json");
    auto b = run_cli("compute --surface p1xp1 --d1 2 --d2 3 --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("relative") {
    auto irr = run_cli("relative --polygon 3,0,3,0,3,0 --alpha 0 --beta 3 --genus 0 "
                       "--irreducible");
    CHECK(irr.exit_code == 0);
    CHECK(irr.output == "8\n");

    auto multi = run_cli("relative --polygon 2,0,2,0,2,0 --alpha 0 --beta 2 --genus -1");
    CHECK(multi.exit_code == 0);
    CHECK(multi.output == "3\n");

    auto vertex = run_cli("relative --polygon \"(0,0);(3,0);(0,3)\" --alpha 0 --beta 3 "
                          "--genus 0 --irreducible");
    CHECK(vertex.output == "8\n");

    auto unbalanced =
        run_cli("relative --polygon 2,0,2,0,2,0 --alpha 2 --beta 1 --genus 0");
    CHECK(unbalanced.exit_code != 0);
    CHECK(unbalanced.output.find("unbalanced") != std::string::npos);

    auto badpoly = run_cli("relative --polygon 2,0,2,1,1,0 --alpha 0 --beta 2 --genus 0");
    CHECK(badpoly.exit_code != 0);
    CHECK(badpoly.output.find("not a closed circuit") != std::string::npos);
}

TEST_CASE("table") {
    auto p2 = run_cli("table --surface p2 --max-d 6 --format csv");
    CHECK(p2.exit_code == 0);
    CHECK(p2.output == "divisor,value\n"
                       "p2:d=1,1\np2:d=2,1\np2:d=3,8\np2:d=4,240\n"
                       "p2:d=5,18264\np2:d=6,2845440\n");

    auto empty = run_cli("table --surface p2 --max-d 0 --format csv");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output == "divisor,value\n");

    auto grid = run_cli("table --surface p1xp1 --max 3 --format csv");
    CHECK(grid.exit_code == 0);
    CHECK(grid.output.find("p1xp1:2,3,48") != std::string::npos);
    CHECK(grid.output.find("p1xp1:3,2,48") != std::string::npos);
    CHECK(grid.output.find("p1xp1:3,3,1086") != std::string::npos);

    auto threaded = run_cli("table --surface p1xp1 --max 3 --format csv --threads 4");
    CHECK(threaded.output == grid.output);
}

TEST_CASE("verify suites") {
    auto chc2 = run_cli("verify --suite chc2");
    CHECK(chc2.exit_code == 0);
    CHECK(chc2.output.find("PASS") != std::string::npos);

    auto expid = run_cli("verify --suite expid --box 2x2 --nmax 6");
    CHECK(expid.exit_code == 0);
    CHECK(expid.output.find("0 mismatches") != std::string::npos);

    auto unknown = run_cli("verify --suite nonsense");
    CHECK(unknown.exit_code != 0);
}

TEST_CASE("genfunc-check") {
    auto text = run_cli("genfunc-check --shape p2 --box 2x2 --nmax 6");
    CHECK(text.exit_code == 0);
    CHECK(text.output == "checked 8 keys, 0 mismatches\n");

    auto json = run_cli("genfunc-check --shape p1xp1 --box 2x2 --nmax 6 --format json");
    CHECK(json.exit_code == 0);
    CHECK(json.output == "{\"checked\":21,\"mismatches\":[]}\n");

    auto hex = run_cli("genfunc-check --shape p2_3 --box 2x2 --nmax 6");
    CHECK(hex.exit_code != 0);
    CHECK(hex.output.find("p2 or p1xp1") != std::string::npos);
}

TEST_CASE("cache round trip and failure modes") {
    auto path = temp_file("twi-cli-cache.jsonl");
    std::filesystem::remove(path);

    auto rt = run_cli("cache --file " + path.string() + " --surface p2 --d 5");
    CHECK(rt.exit_code == 0);
    CHECK(rt.output.find("18264") != std::string::npos);
    CHECK(rt.output.find("warm hits") != std::string::npos);

    // cross-check an intact cache
    auto ok = run_cli("verify --suite chc2 --cache " + path.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("cache-crosscheck") != std::string::npos);

    // corrupt one stored value: the cross-check must notice
    {
        std::ifstream is(path);
        std::string text((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());
        auto pos = text.find("\"18264\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 7, "\"18265\"");
        std::ofstream os(path);
        os << text;
    }
    auto bad = run_cli("verify --suite chc2 --cache " + path.string());
    CHECK(bad.exit_code != 0);
    CHECK(bad.output.find("cache value disagrees with recomputation") != std::string::npos);

    // version and header diagnostics
    {
        std::ofstream os(path);
        os << "{\"format\":\"twi-cache\",\"version\":2}\n";
    }
    auto ver = run_cli("verify --suite chc2 --cache " + path.string());
    CHECK(ver.exit_code != 0);
    CHECK(ver.output.find("unsupported cache version") != std::string::npos);

    {
        std::ofstream os(path);
    }
    auto empty = run_cli("verify --suite chc2 --cache " + path.string());
    CHECK(empty.exit_code != 0);
    CHECK(empty.output.find("missing header") != std::string::npos);

    std::filesystem::remove(path);
}

TEST_CASE("TWI_CACHE environment variable overrides --cache") {
    auto env_path = temp_file("twi-env-cache.jsonl");
    auto flag_path = temp_file("twi-flag-cache.jsonl");
    std::filesystem::remove(env_path);
    std::filesystem::remove(flag_path);

    auto r = run_cli("compute --surface p2 --d 3 --cache " + flag_path.string(),
                     "TWI_CACHE=" + env_path.string());
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(env_path));
    CHECK_FALSE(std::filesystem::exists(flag_path));

    std::filesystem::remove(env_path);
}
