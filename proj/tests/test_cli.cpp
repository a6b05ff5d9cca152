#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "/tmp/fracsum_cli_out.txt";
    std::string cmd = std::string(FRACSUM_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

}  // namespace

TEST_CASE("eval agreement and output") {
    RunResult r = run_cli("eval --a 1 --b 2 --x 1 --eps 1e-20");
    CHECK(r.code == 0);
    CHECK(r.out.find("agreement: OK") != std::string::npos);
    CHECK(r.out.find("W(block)") != std::string::npos);
    CHECK(r.out.find("V(direct)") != std::string::npos);

    RunResult half = run_cli("eval --a 1 --b 2 --x 0.5 --method direct");
    CHECK(half.code == 0);
    // W(1/2;1,2) = 1/2; the printed center sits within the tail bracket
    bool near_half = half.out.find("W(direct) = 4.99999999999999") != std::string::npos ||
                     half.out.find("W(direct) = 5.00000000000000") != std::string::npos;
    CHECK(near_half);
}

TEST_CASE("usage and precondition exit codes") {
    CHECK(run_cli("eval --a 2 --b 1 --x 1").code == 2);         // requires a < b
    CHECK(run_cli("eval --a 1 --b 2 --x 0").code == 2);         // requires x > 0
    CHECK(run_cli("eval --a abc --b 2 --x 1").code == 1);       // parse
    CHECK(run_cli("eval --a 1 --b 2").code == 1);               // missing required flag
    CHECK(run_cli("nonsense").code == 1);                       // unknown subcommand
    CHECK(run_cli("eval --a 1 --b 2 --x 1 --method fancy").code == 1);
}

TEST_CASE("check suites pass, degenerate instance included") {
    RunResult r = run_cli("check --a 1 --b 2 --x 10000");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("partition") != std::string::npos);
    CHECK(r.out.find("closed-forms") != std::string::npos);

    // degenerate instance passes vacuously
    RunResult deg = run_cli("check --a 1 --b 2 --x 1/2");
    CHECK(deg.code == 0);
    CHECK(deg.out.find("FAIL") == std::string::npos);

    RunResult named = run_cli("check --a 1 --b 5/2 --x 1000 --suites partition,tail-bound");
    CHECK(named.code == 0);
    CHECK(named.out.find("block-vs-direct") == std::string::npos);

    CHECK(run_cli("check --a 1 --b 2 --x 100 --suites nope").code == 2);
}

TEST_CASE("corrupted offset limits are detected") {
    RunResult r = run_cli("check --a 1 --b 2 --x 10000 --kj-offset 1");
    CHECK(r.code == 3);
    CHECK(r.out.find("FAIL") != std::string::npos);
    RunResult r2 = run_cli("check --a 1 --b 5/2 --x 10000 --kj-offset -1");
    CHECK(r2.code == 3);
}

TEST_CASE("scan writes deterministic csv and fit reads it") {
    std::string f1 = "/tmp/fracsum_t_scan1.csv";
    std::string f2 = "/tmp/fracsum_t_scan2.csv";
    RunResult s1 = run_cli("scan --a 1 --b 5/2 --x-start 1e3 --x-stop 1e5 --grid 6 "
                           "--eps 1e-13 --out " + f1);
    CHECK(s1.code == 0);
    RunResult s2 = run_cli("scan --a 1 --b 5/2 --x-start 1e3 --x-stop 1e5 --grid 6 "
                           "--eps 1e-13 --threads 3 --out " + f2);
    CHECK(s2.code == 0);
    std::ifstream i1(f1), i2(f2);
    std::stringstream b1, b2;
    b1 << i1.rdbuf();
    b2 << i2.rdbuf();
    CHECK(b1.str() == b2.str());
    CHECK(b1.str().rfind("x_num,x_den,a,b,c,J,", 0) == 0);

    RunResult fit = run_cli("fit --input " + f1 + " --which B");
    CHECK(fit.code == 0);
    CHECK(fit.out.find("slope") != std::string::npos);

    // corrupt the header: schema error
    std::ofstream bad("/tmp/fracsum_t_bad.csv");
    bad << "x,who,knows\n1,2,3\n";
    bad.close();
    CHECK(run_cli("fit --input /tmp/fracsum_t_bad.csv --which B").code == 1);

    // too few points for a fit
    std::string f3 = "/tmp/fracsum_t_scan3.csv";
    CHECK(run_cli("scan --a 1 --b 5/2 --x-start 1e3 --x-stop 1e4 --grid 2 --out " + f3).code ==
          0);
    CHECK(run_cli("fit --input " + f3 + " --which A").code == 2);
}

TEST_CASE("scan json format") {
    std::string f = "/tmp/fracsum_t_scan.json";
    RunResult s = run_cli("scan --a 1 --b 2 --x-start 100 --x-stop 1000 --grid 2 "
                          "--format json --out " + f);
    CHECK(s.code == 0);
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"W_value\"") != std::string::npos);
}

TEST_CASE("bench runs both methods at desk scale") {
    RunResult r = run_cli("bench --a 1 --b 2 --x 1000 --x 100000");
    CHECK(r.code == 0);
    CHECK(r.out.find("agreement: OK") != std::string::npos);
    CHECK(r.out.find("cells") != std::string::npos);
}

TEST_CASE("periodic subcommand") {
    std::ofstream f("/tmp/fracsum_t_chi4.txt");
    f << "4\n1 0 -1 0\n";
    f.close();
    RunResult r = run_cli("periodic --file /tmp/fracsum_t_chi4.txt --x 1000 --bound");
    CHECK(r.code == 0);
    CHECK(r.out.find("overlap: OK") != std::string::npos);
    CHECK(r.out.find("max ratio") != std::string::npos);

    std::ofstream badf("/tmp/fracsum_t_badfn.txt");
    badf << "2\n1 1\n";  // mean is not zero
    badf.close();
    CHECK(run_cli("periodic --file /tmp/fracsum_t_badfn.txt --x 10").code == 2);
    CHECK(run_cli("periodic --file /tmp/does_not_exist.txt --x 10").code == 1);
}
