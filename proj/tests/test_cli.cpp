// End-to-end checks of the codd-lab binary (path injected via CODD_LAB_BIN).
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary);
    out << content;
}

fs::path work_dir()
{
    fs::path dir = fs::temp_directory_path() / "codd-lab-cli-tests";
    fs::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args)
{
    fs::path dir = work_dir();
    fs::path out = dir / "stdout.txt";
    fs::path err = dir / "stderr.txt";
    std::string cmd = std::string(CODD_LAB_BIN) + " " + args + " >" + out.string() + " 2>" +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.code = status;
#else
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

} // namespace

TEST_CASE("entropy subcommand prints both entropies")
{
    fs::path dir = work_dir();
    spit(dir / "p.json", R"({"n":2,"cell":[0,0,1,1]})");
    spit(dir / "d.json", R"({"n":2,"mass":["1/4","1/4","1/4","1/4"]})");
    RunResult r = run("entropy --partition " + (dir / "p.json").string() + " --dist " +
                      (dir / "d.json").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"logical_entropy\": \"1/2\"") != std::string::npos);
    CHECK(r.out.find("\"shannon_entropy\": 1.0") != std::string::npos);
}

TEST_CASE("tree optimal and greedy on XOR")
{
    fs::path dir = work_dir();
    spit(dir / "xor.json", R"({"n":2,"label":[0,1,1,0]})");
    RunResult opt = run("tree optimal --labeling " + (dir / "xor.json").string());
    CHECK(opt.code == 0);
    CHECK(opt.out.find("\"average_depth\": \"2/1\"") != std::string::npos);
    RunResult grd = run("tree greedy --labeling " + (dir / "xor.json").string());
    CHECK(grd.code == 0);
    CHECK(grd.out.find("\"average_depth\": \"2/1\"") != std::string::npos);
}

TEST_CASE("codd encode / decode / eval round trip")
{
    fs::path dir = work_dir();
    // (K (leaf 1)) (leaf 0) reduces to leaf 1
    spit(dir / "e.json",
         R"({"apply":[{"apply":[{"comb":"K"},{"leaf":"1"}]},{"leaf":"0"}]})");
    RunResult enc = run("codd encode --in " + (dir / "e.json").string() + " --out " +
                        (dir / "e.bin").string());
    CHECK(enc.code == 0);

    RunResult dec = run("codd decode --in " + (dir / "e.bin").string());
    CHECK(dec.code == 0);
    CHECK(dec.out.find("\"comb\": \"K\"") != std::string::npos);

    RunResult ev = run("codd eval --in " + (dir / "e.bin").string() + " --out " +
                       (dir / "nf.bin").string());
    CHECK(ev.code == 0);
    CHECK(ev.out.find("\"fuel_exhausted\": false") != std::string::npos);
    RunResult nf = run("codd decode --in " + (dir / "nf.bin").string());
    CHECK(nf.code == 0);
    CHECK(nf.out.find("\"leaf\": \"1\"") != std::string::npos);
}

TEST_CASE("codd decode on an empty file fails with offset 0")
{
    fs::path dir = work_dir();
    spit(dir / "empty.bin", "");
    RunResult r = run("codd decode --in " + (dir / "empty.bin").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("decode error at offset 0") != std::string::npos);
}

TEST_CASE("codd memoize rewrites a repeated pattern")
{
    fs::path dir = work_dir();
    spit(dir / "p.json", R"({"bit":0,"zero":{"leaf":"0"},"one":{"leaf":"1"}})");
    spit(dir / "e.json",
         R"({"apply":[{"apply":[{"bit":0,"zero":{"leaf":"0"},"one":{"leaf":"1"}},{"leaf":"00"}]},)"
         R"({"apply":[{"bit":0,"zero":{"leaf":"0"},"one":{"leaf":"1"}},{"leaf":"11"}]}]})");
    REQUIRE(run("codd encode --in " + (dir / "p.json").string() + " --out " +
                (dir / "p.bin").string())
                .code == 0);
    REQUIRE(run("codd encode --in " + (dir / "e.json").string() + " --out " +
                (dir / "e.bin").string())
                .code == 0);
    RunResult r = run("codd memoize --in " + (dir / "e.bin").string() + " --pattern " +
                      (dir / "p.bin").string() + " --out " + (dir / "m.bin").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"sites_rewritten\": 1") != std::string::npos);
    RunResult dec = run("codd decode --in " + (dir / "m.bin").string());
    CHECK(dec.out.find("\"comb\": \"Sp\"") != std::string::npos);
}

TEST_CASE("pattern check verdict")
{
    fs::path dir = work_dir();
    spit(dir / "p.json", R"({"n":2,"label":[0,0,1,1]})");
    spit(dir / "f.json", R"({"n":2,"label":[0,1,2,3]})");
    spit(dir / "rho.json", R"({"n":2,"default_weight":"0","overrides":[[0,2,"1"]]})");
    spit(dir / "d.json", R"({"n":2,"mass":["1/4","1/4","1/4","1/4"]})");
    RunResult r = run("pattern check --p " + (dir / "p.json").string() + " --f " +
                      (dir / "f.json").string() + " --rho " + (dir / "rho.json").string() +
                      " --dist " + (dir / "d.json").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"is_pattern\": true") != std::string::npos);
    CHECK(r.out.find("\"intensity\": \"1/3\"") != std::string::npos);
    CHECK(r.out.find("\"runtime_factor\": \"2/1\"") != std::string::npos);
}

TEST_CASE("synsem correlate is byte-identical per seed and jobs-invariant")
{
    fs::path dir = work_dir();
    std::string base = "synsem correlate --n 3 --pairs 10 --seed 42 --out ";
    REQUIRE(run(base + (dir / "r1.json").string() + " --csv " + (dir / "r1.csv").string())
                .code == 0);
    REQUIRE(run(base + (dir / "r2.json").string() + " --csv " + (dir / "r2.csv").string())
                .code == 0);
    REQUIRE(run(base + (dir / "r3.json").string() + " --jobs 4").code == 0);
    CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
    CHECK(slurp(dir / "r1.json") == slurp(dir / "r3.json"));
    CHECK(slurp(dir / "r1.csv") == slurp(dir / "r2.csv"));
    CHECK(slurp(dir / "r1.csv").rfind("pair_id,semantic,syn_entropy,syn_depth\n", 0) == 0);
}

TEST_CASE("grow writes a monotone trace with the pinned columns")
{
    fs::path dir = work_dir();
    RunResult r = run("grow --n 4 --steps 50 --seed 7 --trace " + (dir / "t.csv").string());
    CHECK(r.code == 0);
    std::istringstream lines(slurp(dir / "t.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# config ", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "step,size,entropy_num,entropy_den");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 51);
}

TEST_CASE("grow ensemble and profile artifacts")
{
    fs::path dir = work_dir();
    RunResult e = run("grow ensemble --n 4 --sizes 1,3,5 --samples 4 --seed 1 --out " +
                      (dir / "ens.csv").string());
    CHECK(e.code == 0);
    std::string ens = slurp(dir / "ens.csv");
    CHECK(ens.find("size,mean,min,q25,median,q75,max") != std::string::npos);

    RunResult p = run("grow profile --n 4 --size 6 --samples 20 --seed 1 --out " +
                      (dir / "prof.json").string());
    CHECK(p.code == 0);
    CHECK(slurp(dir / "prof.json").find("\"fraction_near_max\"") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2")
{
    CHECK(run("entropy --no-such-flag x").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("domain errors exit with code 1")
{
    fs::path dir = work_dir();
    spit(dir / "bad.json", R"({"n":2,"mass":["1/2","1/2","1/2","1/2"]})");
    spit(dir / "p.json", R"({"n":2,"cell":[0,0,1,1]})");
    RunResult r = run("entropy --partition " + (dir / "p.json").string() + " --dist " +
                      (dir / "bad.json").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("error (domain)") != std::string::npos);

    spit(dir / "broken.json", "{not json");
    RunResult j = run("entropy --partition " + (dir / "broken.json").string() + " --dist " +
                      (dir / "bad.json").string());
    CHECK(j.code == 1);
    CHECK(j.err.find("broken.json") != std::string::npos);
    CHECK(j.err.find("byte") != std::string::npos);
}

TEST_CASE("help lists subcommands")
{
    RunResult r = run("--help");
    CHECK(r.code == 0);
    for (const char* name : {"entropy", "tree", "codd", "pattern", "synsem", "grow"}) {
        CHECK(r.out.find(name) != std::string::npos);
    }
}
