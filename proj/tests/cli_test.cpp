#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HCROSS_CLI) + " " + args;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "hcross_cli_" + name; }

}  // namespace

TEST(Cli, NoArgumentsPrintsUsageAndExitsTwo) {
  const auto r = run("2>&1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownSubcommandOrFlagIsAUsageError) {
  EXPECT_EQ(run("frobnicate 2>/dev/null").status, 2);
  EXPECT_EQ(run("audit --bogus 1 2>/dev/null").status, 2);
}

TEST(Cli, WitnessIsDeterministic) {
  const auto a = run("witness --d 2 --n 6 --m 8 --q 1 --p 2 --seed 0");
  const auto b = run("witness --d 2 --n 6 --m 8 --q 1 --p 2 --seed 0");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("m: 8"), std::string::npos);
  EXPECT_NE(a.out.find("blocks_unique: yes"), std::string::npos);
  EXPECT_NE(run("witness --d 2 --n 6 --m 8 --q 1 --p 2 --seed 1").out, a.out);
}

TEST(Cli, InfeasibleWitnessFails) { EXPECT_EQ(run("witness --d 2 --n 7 --q 1 --p 2 2>/dev/null").status, 1); }

TEST(Cli, AuditSp1HasNoViolations) {
  const auto r = run("audit --family sp1 --trials 1000 --no-timestamp 2>&1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("violations=0"), std::string::npos);
  EXPECT_NE(r.out.find("trials=1000"), std::string::npos);
}

TEST(Cli, RatesCsvIsByteIdenticalAcrossRuns) {
  const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
  ASSERT_EQ(run("rates --experiment qpT1 --n 6,9 --seed 3 --no-timestamp --out " + a + " >/dev/null").status, 0);
  ASSERT_EQ(run("rates --experiment qpT1 --n 6,9 --seed 3 --no-timestamp --out " + b + " >/dev/null").status, 0);
  const std::string sa = slurp(a);
  EXPECT_EQ(sa.rfind("experiment,d,n,m,q,p,r,a,b,beta,value,predicted_term,ratio,status\n", 0), 0u);
  EXPECT_EQ(sa, slurp(b));

  ASSERT_EQ(run("rates --experiment qpT1 --n 6 --out " + a + " >/dev/null").status, 0);
  EXPECT_EQ(slurp(a).rfind("# generated ", 0), 0u);
}

TEST(Cli, ConfigDiagnosticsNameTheLine) {
  const std::string cfg = temp_path("bad.cfg");
  std::ofstream(cfg) << "experiment = qpT1\n# comment\nq = one\n";
  const auto r = run("--config " + cfg + " rates 2>&1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos);

  const std::string good = temp_path("good.cfg");
  std::ofstream(good) << "experiment = qpL1\nn = 1,2\nq = 2\np = 2\ntimestamp = false\n";
  const auto g = run("--config " + good + " rates");
  EXPECT_EQ(g.status, 0);
  EXPECT_NE(g.out.find("qpL1,2,2,"), std::string::npos);
}

TEST(Cli, HypothesisViolationIsRejected) {
  EXPECT_EQ(run("rates --experiment qpT1 --q 2 --p 1.5 2>/dev/null").status, 2);
  EXPECT_EQ(run("rates --experiment qpT1 --n 15 2>/dev/null").status, 2);
}

TEST(Cli, KernelFileFeedsNorms) {
  const std::string f = temp_path("fejer.txt");
  ASSERT_EQ(run("kernel --type fejer --j 4 --out " + f).status, 0);
  EXPECT_EQ(slurp(f).rfind("d=1\n", 0), 0u);
  const auto r = run("norms --file " + f + " --p 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("wiener: 4\n"), std::string::npos);
  EXPECT_NE(r.out.find("sup: 4"), std::string::npos);
  EXPECT_EQ(run("kernel --type fejer --j 8 --at 0").out, "8\n");

  const std::string bad = temp_path("bad.txt");
  std::ofstream(bad) << "d=1\n0 1\n";
  const auto e = run("norms --file " + bad + " 2>&1");
  EXPECT_EQ(e.status, 2);
  EXPECT_NE(e.out.find("line 2"), std::string::npos);
}
