#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "notcontains/cli.hpp"

namespace fs = std::filesystem;
using namespace notcontains;

namespace {

const fs::path kSamples = NOTCONTAINS_SAMPLES;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "notcontains");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("notcontains-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, SolveIntroSample) {
  auto r = run({"solve", "--input", (kSamples / "intro_example.json").string(), "--oracle-check", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["status"], "sat");
  EXPECT_EQ(j["profile"], "paper");
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
  auto doc = load_document((kSamples / "intro_example.json").string());
  Assignment m;
  for (const auto& [x, w] : j["model"].items()) m[x] = doc.inst.alphabet.encode(w.get<std::string>());
  EXPECT_TRUE(satisfies(doc.inst, m));
}

TEST(Cli, RerunsAreByteIdentical) {
  for (const auto& e : fs::directory_iterator(kSamples)) {
    if (e.path().extension() != ".json") continue;
    auto a = run({"solve", "--input", e.path().string(), "--bounds-profile", "scaled:0.2"});
    auto b = run({"solve", "--input", e.path().string(), "--bounds-profile", "scaled:0.2", "--workers", "3"});
    EXPECT_EQ(a.code, 0) << e.path();
    EXPECT_EQ(a.out, b.out) << e.path();
  }
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run({"solve", "--input", "/nonexistent/file.json"}).code, 1);
  EXPECT_EQ(run({"solve", "--input", write_file("bad.json", "{not json").string()}).code, 1);
  EXPECT_EQ(run({"solve", "--input", write_file("key.json", R"({"alphabet":"ab","vars":[],"needle":[],"haystack":[],"x":1})").string()}).code, 1);
  auto regex = run({"solve", "--input",
                    write_file("re.json", R"({"alphabet":"ab","vars":[{"name":"x","regex":"(a"}],"needle":[],"haystack":[]})").string()});
  EXPECT_EQ(regex.code, 1);
  EXPECT_NE(regex.err.find("regex error"), std::string::npos);
  auto undeclared = run({"solve", "--input",
                         write_file("u.json", R"({"alphabet":"ab","vars":[],"needle":[{"var":"y"}],"haystack":[]})").string()});
  EXPECT_EQ(undeclared.code, 1);
  auto empty = run({"solve", "--input",
                    write_file("e.json", R"({"alphabet":"ab","vars":[{"name":"x","regex":"[]"}],"needle":[],"haystack":[]})").string()});
  EXPECT_EQ(empty.code, 1);
  EXPECT_EQ(run({"solve", "--input", (kSamples / "intro_example.json").string(), "--bounds-profile", "scaled:2"}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"bench", "/nonexistent-dir"}).code, 1);
}

TEST(Cli, Bench) {
  auto r = run({"bench", kSamples.string(), "--bounds-profile", "scaled:0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "file,status,ms,profile");
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    if (line.rfind("# total=", 0) == 0) {
      last = line;
      break;
    }
    ++rows;
    EXPECT_NE(line.find(",scaled:0.2"), std::string::npos) << line;
    EXPECT_EQ(line.find(",error,"), std::string::npos) << line;
  }
  EXPECT_GT(rows, 0u);
  EXPECT_EQ(last.rfind("# total=" + std::to_string(rows) + " ", 0), 0u) << last;
}

TEST(Cli, EmitSmt) {
  auto path = scratch("intro.smt2");
  auto r = run({"solve", "--input", (kSamples / "intro_example.json").string(), "--emit-smt", path.string()});
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("(check-sat)"), std::string::npos);
}

TEST(Cli, BinarySmoke) {
  const std::string cmd = std::string(NOTCONTAINS_CLI) + " solve --input " + (kSamples / "intro_example.json").string();
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) out += buf;
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NE(out.find("\"status\":\"sat\""), std::string::npos);

  FILE* q = popen((std::string(NOTCONTAINS_CLI) + " solve --input /nonexistent 2>/dev/null").c_str(), "r");
  ASSERT_NE(q, nullptr);
  while (fgets(buf, sizeof buf, q)) {
  }
  EXPECT_EQ(WEXITSTATUS(pclose(q)), 1);
}
