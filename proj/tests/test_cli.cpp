#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

std::string tmp_dir() {
    static std::string dir = [] {
        auto d = std::filesystem::temp_directory_path() / "pmod_cli_tests";
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    std::string path = tmp_dir() + "/" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// run the CLI with the given arguments, capturing both streams
RunResult run(const std::string& args) {
    std::string out_path = tmp_dir() + "/stdout.txt";
    std::string err_path = tmp_dir() + "/stderr.txt";
    std::string cmd = std::string(PMOD_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

json envelope(const RunResult& res) {
    json j = json::parse(res.out);
    REQUIRE(j.contains("version"));
    REQUIRE(j.contains("config"));
    REQUIRE(j.contains("report"));
    REQUIRE(j.contains("seconds"));
    return j;
}

const char* kPath3 = "a b 1\nb c 1\n";

} // namespace

TEST_CASE("family flag defaults to connecting a and b") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("solve --graph " + g + " --p 2");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["config"]["family"] == "connect:a,b");
    CHECK(j["report"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solve on the three-vertex path") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("solve --graph " + g + " --family connect:a,c --p 2");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["config"]["command"] == "solve");
    CHECK(j["config"]["family"] == "connect:a,c");
    CHECK(j["report"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(j["report"]["converged"] == true);
    CHECK(j["seconds"].get<double>() >= 0.0);
    // summary line rides stderr so stdout stays machine-readable
    CHECK(res.err.find("modulus") != std::string::npos);
}

TEST_CASE("endpoint exponents") {
    std::string g = write_file("par3.txt", "a b\na b\na b\n");
    auto p1 = run("solve --graph " + g + " --family connect:a,b --p 1");
    REQUIRE(p1.exit_code == 0);
    CHECK(envelope(p1)["report"]["value"].get<double>() == doctest::Approx(3.0));

    auto pinf = run("solve --graph " + g + " --family connect:a,b --p inf");
    REQUIRE(pinf.exit_code == 0);
    json j = envelope(pinf);
    CHECK(j["report"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["report"]["p"] == "inf");
}

TEST_CASE("output file keeps the report") {
    std::string g = write_file("p3.txt", kPath3);
    std::string out = tmp_dir() + "/solve_report.json";
    auto res = run("solve --graph " + g + " --family connect:a,c --p 2 --output " + out);
    REQUIRE(res.exit_code == 0);
    // with --output the summary moves to stdout
    CHECK(res.out.find("modulus") != std::string::npos);
    json j = json::parse(slurp(out));
    CHECK(j["report"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("usage errors exit with code 2") {
    std::string g = write_file("p3.txt", kPath3);
    CHECK(run("solve --graph " + tmp_dir() + "/absent.txt --family connect:a,c --p 2").exit_code ==
          2);
    CHECK(run("solve --graph " + g + " --family connect:a,c --p 0.5").exit_code == 2);
    CHECK(run("solve --graph " + g + " --family walk:a,c --p 2").exit_code == 2);
    CHECK(run("solve --graph " + g + " --family connect:a,c --p 2 --bogus").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    auto bad = run("solve --graph " + g + " --family connect:a,c --p 0.5");
    CHECK(bad.err.find("error") != std::string::npos);

    std::string split = write_file("split.txt", "a b\nc d\n");
    CHECK(run("solve --graph " + split + " --family connect:a,c --p 2").exit_code == 2);
}

TEST_CASE("non-converged solves exit with code 3 but still report") {
    std::string g = write_file("par3.txt", "a b\na b\na b\n");
    auto res = run("solve --graph " + g + " --family connect:a,b --p 1.5 --max-outer 1");
    CHECK(res.exit_code == 3);
    json j = envelope(res);
    CHECK(j["report"]["converged"] == false);
    CHECK(j["report"]["warnings"].size() > 0);
}

TEST_CASE("duality subcommand") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("duality --graph " + g + " --family connect:a,c --p 2");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["report"]["product"].get<double>() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(j["report"]["mod_primal"].get<double>() == doctest::Approx(0.5).epsilon(1e-5));

    auto e = run("duality --graph " + g + " --family connect:a,c --p 1");
    REQUIRE(e.exit_code == 0);
    CHECK(envelope(e)["report"]["mod_1"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("blocker subcommand and guard exit code") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("blocker --graph " + g + " --family connect:a,c");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["report"]["count"] == 2);
    CHECK(j["report"]["vertices"].size() == 2);

    std::string text;
    for (char c = 'a'; c < 'n'; ++c) {
        text += c;
        text += ' ';
        text += static_cast<char>(c + 1);
        text += '\n';
    }
    std::string lg = write_file("long.txt", text);
    auto guard = run("blocker --graph " + lg + " --family connect:a,n");
    CHECK(guard.exit_code == 4);
}

TEST_CASE("metric subcommand") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("metric --graph " + g + " --kind delta_p --p 2");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["report"]["kind"] == "delta_p");
    CHECK(j["report"]["all_converged"] == true);

    auto csv = run("metric --graph " + g + " --kind mod_inverse --p 1.5 --csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("from,to,dist", 0) == 0);

    CHECK(run("metric --graph " + g + " --kind euclid --p 2").exit_code == 2);
    CHECK(run("metric --graph " + g + " --kind mod_inverse --p 2").exit_code == 2);

    auto um = run("metric --graph " + g + " --ultrametric");
    REQUIRE(um.exit_code == 0);
    CHECK(envelope(um)["report"]["pass"] == true);

    auto sf = run("metric --graph " + g + " --snowflake --p 2 --epsilon 0.1");
    REQUIRE(sf.exit_code == 0);
    CHECK(envelope(sf)["report"]["violated"] == true);
}

TEST_CASE("sensitivity subcommand") {
    std::string g = write_file("p3.txt", kPath3);
    auto res = run("sensitivity --graph " + g + " --family connect:a,c --p 2 --seed 7");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["report"]["gradient"]["pass"] == true);
    CHECK(j["report"]["monotonicity"]["pass"] == true);
    CHECK(j["report"]["concavity"]["pass"] == true);
    CHECK(j["report"]["lipschitz"]["pass"] == true);
    CHECK(run("sensitivity --graph " + g + " --family connect:a,c --p 2 --edge 9").exit_code == 2);
}

TEST_CASE("random subcommand") {
    std::string g = write_file("p3.txt", kPath3);
    auto res =
        run("random --graph " + g + " --family connect:a,c --experiment jensen --p 1.5 "
            "--trials 120 --seed 9");
    REQUIRE(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["config"]["seed"] == 9);
    CHECK(j["report"]["trials"] == 120);
    CHECK(j["report"]["pass"] == true);

    auto lov = run("random --graph " + g + " --family connect:a,c --experiment lovasz "
                   "--trials 150 --seed 3");
    REQUIRE(lov.exit_code == 0);
    CHECK(envelope(lov)["report"]["experiment"] == "lovasz");

    CHECK(run("random --graph " + g + " --family connect:a,c --experiment lovasz --trials 50")
              .exit_code == 2);
    CHECK(run("random --graph " + g + " --family connect:a,c --experiment mixing --trials 150")
              .exit_code == 2);
}

TEST_CASE("verify runs the acceptance suite") {
    auto res = run("verify");
    CHECK(res.exit_code == 0);
    json j = envelope(res);
    CHECK(j["report"]["pass"] == true);
    REQUIRE(j["report"]["criteria"].size() == 9);
    for (const auto& c : j["report"]["criteria"]) CHECK(c["pass"] == true);
    // one progress line per criterion on stderr
    CHECK(res.err.find("criterion 9") != std::string::npos);
    CHECK(res.err.find("acceptance: PASS") != std::string::npos);
}
