#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& input = "") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto in_path = dir / "horn_cli_test_input.txt";
  std::ofstream(in_path) << input;
  const std::string cmd = std::string(HORN_CLI_PATH) + " " + args + " < " + in_path.string() + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("batch mode prints one line per answer") {
  auto r = run("--goal 'inc_test(R1,R2)'");
  CHECK(r.code == 0);
  CHECK(r.out == "R1=the(0=>2), R2=the(2=>7)\n");
  r = run("--goal 'best_of(X,>,member(X,[2,1,4,3]))'");
  CHECK(r.out == "X=4\n");
  r = run("--goal 'count_partitions(10,R)'");
  CHECK(r.out == "R=42\n");
  r = run("--goal 'member(X,[a,b,c])' --limit 2");
  CHECK(r.out == "X=a\nX=b\n");
  r = run("--goal 'member(a,[a])'");
  CHECK(r.out == "yes\n");
}

TEST_CASE("batch exit codes") {
  CHECK(run("--goal fail").code == 1);
  auto missing = run("--consult /nonexistent/file.pl --goal true");
  CHECK(missing.code == 2);
  CHECK(missing.out.find("/nonexistent/file.pl") != std::string::npos);
  CHECK(run("--goal 'foo('").code == 2);
  auto err = run("--goal 'X is a+1'");
  CHECK(err.code == 2);
  CHECK(err.out.find("type_error") != std::string::npos);
  auto uncaught = run("--goal 'throw(oops)'");
  CHECK(uncaught.code == 2);
  CHECK(uncaught.out == "exception(oops)\n");
}

TEST_CASE("consulted files load in order after the library") {
  const auto dir = std::filesystem::temp_directory_path();
  std::ofstream(dir / "horn_a.pl") << "p(1).\nq(X):-p(X).\n";
  std::ofstream(dir / "horn_b.pl") << "r(X):-q(Y),X is Y*10,reverse([X],_).\n";
  auto r = run("--consult " + (dir / "horn_a.pl").string() + " --consult " + (dir / "horn_b.pl").string() +
               " --goal 'r(X)'");
  CHECK(r.code == 0);
  CHECK(r.out == "X=10\n");
  std::ofstream(dir / "horn_bad.pl") << "p(1).\np(1,).\n";
  auto bad = run("--consult " + (dir / "horn_bad.pl").string() + " --goal true");
  CHECK(bad.code == 2);
  CHECK(bad.out.find(":2:") != std::string::npos);
}

TEST_CASE("interactive session") {
  auto r = run("", "member(X,[1,2]).\n;\n;\nfail.\nbest_of(X,>,member(X,[2,1,4,3])).\n\nfoo(.\nX = f(Y).\n\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("X=1 X=2 no\n") != std::string::npos);
  CHECK(r.out.find("?- no\n") != std::string::npos);
  CHECK(r.out.find("X=4") != std::string::npos);
  CHECK(r.out.find("query:1:") != std::string::npos);
  CHECK(r.out.find("X=f(_G") != std::string::npos);
}

TEST_CASE("the library can be extracted") {
  const auto dir = std::filesystem::temp_directory_path() / "horn_prelude_extract";
  std::filesystem::remove_all(dir);
  CHECK(run("--extract-prelude " + dir.string()).code == 0);
  CHECK(std::filesystem::exists(dir / "04_db.pl"));
  std::ifstream in(dir / "04_db.pl");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("queue_server") != std::string::npos);
}
