#include "doctest.h"
#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "proofminer-cli-XXXXXX").string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const auto p = (fs::path(path_) / name).string();
    if (!content.empty()) {
      std::FILE* f = std::fopen(p.c_str(), "wb");
      std::fwrite(content.data(), 1, content.size(), f);
      std::fclose(f);
    }
    return p;
  }

 private:
  std::string path_;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Run run(const std::string& args) {
  TempDir tmp;
  const auto err_path = tmp.file("stderr");
  const std::string cmd = quote(PROOFMINER_CLI) + " " + args + " 2>" + quote(err_path);
  std::FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, testing::read_text(err_path)};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t count_fields(const std::string& csv_line) {
  return static_cast<std::size_t>(std::count(csv_line.begin(), csv_line.end(), ',')) + 1;
}

std::string fixture(const char* name) { return quote(testing::fixture_path(name)); }

std::string stub_checker() {
  return quote(std::string(PROOFMINER_STUB_CHECKER) + " " + testing::fixture_path("premiss_rules.json"));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("features: running example") {
  const auto r = run("features " + fixture("running_example.json"));
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(count_fields(rows[0]) == 37);
  CHECK(rows[0].rfind("name,d0_j0_term,d0_j0_type,d0_j0_parent,", 0) == 0);
  CHECK(rows[6].rfind("even_odd_succ,-1,-1,-1,", 0) == 0);
  CHECK(count_fields(rows[6]) == 37);
  CHECK(r.err.find("density=") != std::string::npos);

  const auto j = run("features --format json " + fixture("running_example.json"));
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc.at("depth") == 4);
  CHECK(doc.at("width") == 3);
  CHECK(doc.at("columns").size() == 36);
  CHECK(doc.at("rows")[5].at("values").size() == 36);
  CHECK(doc.at("density").get<double>() == doctest::Approx(20.0 / 72.0));
}

TEST_CASE("features: empty library and bad input") {
  TempDir tmp;
  const auto r = run("features " + quote(tmp.file("empty.json", R"({"objects": []})")));
  CHECK(r.code == 0);
  CHECK(r.out == "name\n");

  const auto bad = run("features " + quote(tmp.file("bad.json", "{\"objects\": [\n  {\"name\": }\n]}")));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);

  const auto fwd = run("features " + quote(tmp.file("fwd.json", R"({"objects": [
    {"name": "a", "kind": "definition", "statement": {"tag": "name", "name": "b"}},
    {"name": "b", "kind": "definition", "statement": {"tag": "sort", "sort": "Set"}}]})")));
  CHECK(fwd.code == 2);

  CHECK(run("features /nonexistent/lib.json").code == 2);
}

TEST_CASE("cluster: one object, determinism, timing") {
  TempDir tmp;
  const auto one = tmp.file(
      "one.json", R"({"objects": [{"name": "nat", "kind": "definition", "statement": {"tag": "sort", "sort": "Set"}}]})");
  const auto r = run("cluster --format json " + quote(one));
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("k") == 1);
  CHECK(doc.at("clusters")[0].at("members")[0].at("name") == "nat");
  CHECK_FALSE(doc.contains("elapsed_ms"));

  const auto a = run("cluster --format json -g 5 --seed 7 " + fixture("clusters.json"));
  const auto b = run("cluster --format json -g 5 --seed 7 " + fixture("clusters.json"));
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto t = run("cluster --format json --timing " + fixture("assoc.json"));
  CHECK(json::parse(t.out).contains("elapsed_ms"));

  const auto text = run("cluster " + fixture("assoc.json"));
  REQUIRE(text.code == 0);
  CHECK(text.out.rfind("objects=18 k=2 granularity=3 seed=0 dims=", 0) == 0);
  CHECK(text.out.find("elapsed_ms=") != std::string::npos);
}

TEST_CASE("cluster: argument errors") {
  CHECK(run("cluster -g 6 " + fixture("assoc.json")).code == 2);
  CHECK(run("cluster -g 0 " + fixture("assoc.json")).code == 2);
  CHECK(run("cluster --format xml " + fixture("assoc.json")).code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("suggest: interchange lemma with the stub checker") {
  const auto r = run("suggest -g 5 --target maxnACA --checker-cmd " + stub_checker() + " " + fixture("premiss.json"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("accepted: move=> m n p q; rewrite -! maxnA maxnCA n") != std::string::npos);
  CHECK(r.out.find("->maxnA ") != std::string::npos);
  CHECK(r.out.find("->maxnCA\n") != std::string::npos);

  const auto j = run("suggest --format json -g 5 --target maxnACA --checker-cmd " + stub_checker() + " " +
                     fixture("premiss.json"));
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc.at("tried").get<int>() <= 20);
  CHECK(doc.at("accepted").at("substitutions").size() == 2);
}

TEST_CASE("suggest: exit codes") {
  const auto lib = fixture("premiss.json");
  CHECK(run("suggest -g 5 --target nope --checker-cmd 'exit 0' " + lib).code == 2);

  const auto none = run("suggest -g 5 --budget 1 --target maxnACA --checker-cmd 'exit 1' " + lib);
  CHECK(none.code == 4);
  CHECK(none.out.find("tried: 1 of budget 1") != std::string::npos);
  CHECK(none.out.find("accepted: none") != std::string::npos);

  CHECK(run("suggest -g 5 --target maxnACA --checker-cmd 'exit 7' " + lib).code == 5);
  CHECK(run("suggest -g 5 --budget 0 --target maxnACA --checker-cmd 'exit 1' " + lib).code == 2);
  CHECK(run("suggest -g 5 --target maxnACA " + lib).code == 2);
}

TEST_CASE("suggest: saved model") {
  TempDir tmp;
  const auto model = tmp.file("model.json");
  REQUIRE(run("cluster -g 5 --model-out " + quote(model) + " " + fixture("premiss.json")).code == 0);
  const auto with = run("suggest --format json --model " + quote(model) + " --target maxnACA --checker-cmd " +
                        stub_checker() + " " + fixture("premiss.json"));
  const auto without = run("suggest --format json -g 5 --target maxnACA --checker-cmd " + stub_checker() + " " +
                           fixture("premiss.json"));
  REQUIRE(with.code == 0);
  CHECK(with.out == without.out);

  const auto junk = tmp.file("junk.json", "not json");
  CHECK(run("suggest --model " + quote(junk) + " --target maxnACA --checker-cmd 'exit 0' " + fixture("premiss.json"))
            .code == 2);
}

TEST_CASE("inspect") {
  const auto r = run("inspect " + fixture("running_example.json") + " even_odd_succ");
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "d=0 j=0 p=-1 forall");
  CHECK(rows[4] == "d=2 j=0 p=2 + : nat -> nat -> nat");
  CHECK(rows[6].rfind("d=3 ", 0) == 0);

  const auto sort = run("inspect " + fixture("running_example.json") + " nat");
  REQUIRE(sort.code == 0);
  CHECK(sort.out == "d=0 j=0 p=-1 Set : Type(0)\n");

  CHECK(run("inspect " + fixture("running_example.json") + " nope").code == 2);

  const auto j = run("inspect --format json " + fixture("running_example.json") + " even_odd_succ");
  const auto doc = json::parse(j.out);
  CHECK(doc.at("depth") == 4);
  CHECK(doc.at("width") == 3);
  CHECK(doc.at("nodes").size() == 7);
  CHECK(doc.at("nodes")[0].at("gallina") == true);
}

}  // TEST_SUITE
