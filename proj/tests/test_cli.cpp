#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anchoralign/embedding_store.hpp"
#include "cli.hpp"
#include "synthetic.hpp"

using namespace anchoralign;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() /
               ("anchoralign_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_doc(const std::string& path, const SentenceDoc& doc) {
    std::string text;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        text += doc.sentence(i) + "\n";
    }
    write_text(path, text);
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Writes a self-aligned 50-sentence pair and returns the align arguments.
std::vector<std::string> self_inputs(const TempDir& dir, std::size_t n = 50) {
    testing::Rng rng(137);
    const auto pair = testing::self_pair(n, 32, rng);
    write_doc(dir.file("src.txt"), pair.src.doc);
    write_doc(dir.file("tgt.txt"), pair.tgt.doc);
    write_matrix(dir.file("src.aemb"), pair.src.emb, MatrixFormat::Binary);
    write_matrix(dir.file("tgt.tsv"), pair.tgt.emb, MatrixFormat::Tsv);
    return {"align", "--src-text", dir.file("src.txt"), "--tgt-text", dir.file("tgt.txt"),
            "--src-emb", dir.file("src.aemb"), "--tgt-emb", dir.file("tgt.tsv")};
}

} // namespace

TEST_CASE("self-alignment of a 50-sentence document") {
    TempDir dir;
    const auto r = run(self_inputs(dir));
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        const std::string prefix = std::to_string(i) + "\t" + std::to_string(i) + "\t";
        CHECK(line.rfind(prefix, 0) == 0);
        ++i;
    }
    CHECK(i == 50);
}

TEST_CASE("missing inputs are a usage error") {
    TempDir dir;
    auto args = self_inputs(dir);
    args.erase(args.begin() + 5, args.begin() + 7);  // drop --src-emb
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK(r.err.find("--src-emb") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"align", "--no-such-flag"}).code == 2);
}

TEST_CASE("anchor and interval dumps") {
    TempDir dir;
    auto args = self_inputs(dir);
    args.insert(args.end(), {"--dump-anchors", dir.file("anchors.tsv"), "--dump-intervals",
                             dir.file("intervals.tsv"), "--detect-intervals", "--out", dir.file("out.tsv")});
    const auto r = run(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string anchors = read_text(dir.file("anchors.tsv"));
    CHECK(anchors.rfind("x\ty\tsim\tdensity_ratio\n", 0) == 0);
    CHECK(std::count(anchors.begin(), anchors.end(), '\n') == 51);
    const std::string intervals = read_text(dir.file("intervals.tsv"));
    CHECK(intervals.find("\n0\t49\t0\t49\t50\t") != std::string::npos);
    const std::string out = read_text(dir.file("out.tsv"));
    CHECK(std::count(out.begin(), out.end(), '\n') == 50);
}

TEST_CASE("runs are byte-identical and thread count does not matter") {
    TempDir dir;
    const auto args = self_inputs(dir);
    const auto a = run(args);
    const auto b = run(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4", "--adaptive"});
    auto single = args;
    single.insert(single.end(), {"--adaptive"});
    CHECK(a.out == b.out);
    CHECK(run(threaded).out == run(single).out);
}

TEST_CASE("output formats") {
    TempDir dir;
    auto args = self_inputs(dir, 20);
    auto bert = args;
    bert.insert(bert.end(), {"--format", "bertalign"});
    const auto r = run(bert);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("[0]:[0]\n[1]:[1]\n", 0) == 0);

    auto text = args;
    text.insert(text.end(), {"--format", "text", "--text-delimiter", " ||| "});
    const auto t = run(text);
    REQUIRE(t.code == 0);
    CHECK(t.out.find(" ||| ") != std::string::npos);
}

TEST_CASE("print-config reflects defaults, file and flags, and re-feeds") {
    TempDir dir;
    write_text(dir.file("conf"), "k=5\ncos-threshold=0.45\n");
    const auto r = run({"align", "--config", dir.file("conf"), "--k", "4", "--print-config"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("k=4\n") != std::string::npos);
    CHECK(r.out.find("cos-threshold=0.45\n") != std::string::npos);
    CHECK(r.out.find("delta-x=20\n") != std::string::npos);
    write_text(dir.file("echo"), r.out);
    const auto again = run({"align", "--config", dir.file("echo"), "--print-config"});
    CHECK(again.out == r.out);

    write_text(dir.file("bad"), "cos-treshold=0.45\n");
    CHECK(run({"align", "--config", dir.file("bad"), "--print-config"}).code == 2);
}

TEST_CASE("a config file run equals the flag run") {
    TempDir dir;
    const auto args = self_inputs(dir, 30);
    auto flags = args;
    flags.insert(flags.end(), {"--size-penalty", "0.1", "--allow22"});
    write_text(dir.file("conf"), "size-penalty=0.1\nallow22=true\n");
    auto file = args;
    file.insert(file.end(), {"--config", dir.file("conf")});
    const auto a = run(flags);
    const auto b = run(file);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("timings are written to stderr") {
    TempDir dir;
    auto args = self_inputs(dir, 20);
    args.push_back("--timings");
    const auto r = run(args);
    REQUIRE(r.code == 0);
    for (const char* key : {"load_ms", "similarity_ms", "kbest_ms", "anchoring_ms", "intervals_ms", "dp_ms",
                            "avg_score"}) {
        CHECK(r.err.find(key) != std::string::npos);
    }
}

TEST_CASE("runtime errors exit 1") {
    TempDir dir;
    auto args = self_inputs(dir);
    args[6] = dir.file("missing.aemb");
    const auto r = run(args);
    CHECK(r.code == 1);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("score subcommand") {
    TempDir dir;
    write_text(dir.file("gold.tsv"), "0\t0\n1,2\t1\n");
    write_text(dir.file("pred.tsv"), "0\t0\t0.1\n1\t1\t0.2\n2\t\t1.0\n");
    const auto same = run({"score", "--pred", dir.file("gold.tsv"), "--gold", dir.file("gold.tsv")});
    CHECK(same.code == 0);
    CHECK(same.out == "100.0\t100.0\t100.0\n");
    const auto worked = run({"score", "--pred", dir.file("pred.tsv"), "--gold", dir.file("gold.tsv")});
    CHECK(worked.code == 0);
    CHECK(worked.out == "33.3\t50.0\t40.0\n");
    const auto no_null =
        run({"score", "--pred", dir.file("pred.tsv"), "--gold", dir.file("gold.tsv"), "--exclude-null"});
    CHECK(no_null.out == "50.0\t50.0\t50.0\n");

    write_text(dir.file("gold.bert"), "[0]:[0]\n[1, 2]:[1]\n");
    const auto bert =
        run({"score", "--pred", dir.file("gold.bert"), "--gold", dir.file("gold.bert"), "--format", "bertalign"});
    CHECK(bert.out == "100.0\t100.0\t100.0\n");

    CHECK(run({"score", "--pred", dir.file("pred.tsv"), "--gold", dir.file("nope.tsv")}).code == 1);
    write_text(dir.file("bad.tsv"), "a,b\t0\n");
    CHECK(run({"score", "--pred", dir.file("bad.tsv"), "--gold", dir.file("gold.tsv")}).code == 1);
    CHECK(run({"score", "--pred", dir.file("pred.tsv")}).code == 2);
}
