#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "parabgmt/io.hpp"
#include "settings.hpp"

namespace fs = std::filesystem;
using parabgmt::cli::ConfigError;
using parabgmt::cli::Settings;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Workdir {
 public:
  explicit Workdir(const std::string& name) : path_(fs::temp_directory_path() / ("parabgmt_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Workdir() { fs::remove_all(path_); }
  Workdir(const Workdir&) = delete;
  Workdir& operator=(const Workdir&) = delete;

  [[nodiscard]] const fs::path& path() const { return path_; }

  /// Runs the tool inside the directory; stdout and stderr are captured to files.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + path_.string() + "' && " + env + " '" PARABGMT_EXE "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  [[nodiscard]] std::string out() const { return slurp(path_ / "stdout.txt"); }
  [[nodiscard]] std::string err() const { return slurp(path_ / "stderr.txt"); }
  [[nodiscard]] std::string file(const std::string& name) const { return slurp(path_ / name); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }

 private:
  fs::path path_;
};

Settings sample_settings() {
  return Settings({{"depth", "5", ""}, {"r", "0.1", ""}, {"mode", "mass", ""}, {"list", "", ""}, {"flag", "true", ""}});
}

}  // namespace

TEST(Settings, PrecedenceFlagsOverFileOverDefaults) {
  Settings s = sample_settings();
  s.load_text("depth = 3\n# comment\nr=0.5  # trailing\n", "cfg");
  s.set_flag("depth", "4");
  EXPECT_EQ(s.integer("depth"), 4);
  EXPECT_EQ(s.real("r"), 0.5);
  EXPECT_EQ(s.text("mode"), "mass");
  EXPECT_TRUE(s.boolean("flag"));
  EXPECT_TRUE(s.reals("list").empty());
}

TEST(Settings, FileErrorsCarryPosition) {
  Settings s = sample_settings();
  try {
    s.load_text("depth = 3\n  bogus = 1\n", "cfg");
    FAIL();
  } catch (const parabgmt::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  Settings t = sample_settings();
  t.load_text("\nr =  abc\n", "cfg");
  try {
    (void)t.real("r");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:2:6"), std::string::npos) << e.what();
  }
}

TEST(Settings, ListsChoicesAndReportReuse) {
  Settings s = sample_settings();
  s.set_flag("list", "1, 2.5,3e-1");
  EXPECT_EQ(s.reals("list"), (std::vector<double>{1.0, 2.5, 0.3}));
  EXPECT_THROW((void)s.choice("mode", {"power"}), ConfigError);
  s.set_flag("list", "1,x");
  EXPECT_THROW((void)s.reals("list"), ConfigError);
  Settings r = sample_settings();
  r.load_text(R"({"tool": "parabgmt", "config": {"depth": "7", "mode": "power"}})", "rep.json");
  EXPECT_EQ(r.integer("depth"), 7);
  EXPECT_EQ(r.text("mode"), "power");
  Settings bad = sample_settings();
  EXPECT_THROW(bad.load_text("{\"config\": {\"depth\": 7", "rep.json"), parabgmt::ParseError);
}

TEST(Cli, GenerateWritesCsvAndSidecar) {
  Workdir w("generate");
  ASSERT_EQ(w.run("generate --kind weierstrass_graph --n 1 --depth 0 --resolution 1e-2 --seed 7 -o g.csv"), 0) << w.err();
  const auto mu = parabgmt::read_csv_file((w.path() / "g.csv").string());
  EXPECT_EQ(mu.size(), 10001u);
  const auto doc = nlohmann::json::parse(w.file("g.csv.json"));
  for (const char* key : {"spec", "measured", "truncation_scale", "ground_truth", "config", "version", "seed"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_GT(doc["measured"]["c"].get<double>(), 0.0);
  EXPECT_EQ(doc["seed"].get<int>(), 7);
}

TEST(Cli, DimensionOfOscillatingGraph) {
  Workdir w("dim");
  ASSERT_EQ(w.run("generate --kind weierstrass_graph --resolution 1e-3 -o g.csv"), 0) << w.err();
  ASSERT_EQ(w.run("dim -i g.csv --metric parabolic --scales 8"), 0) << w.err();
  const auto doc = nlohmann::json::parse(w.out());
  EXPECT_NEAR(doc["report"]["fitted_dim"].get<double>(), 2.0, 0.15);
}

TEST(Cli, VerifyGeometry) {
  Workdir w("verify");
  ASSERT_EQ(w.run("verify --suite geometry --cases 10000 --seed 1"), 0) << w.err();
  const auto doc = nlohmann::json::parse(w.out());
  EXPECT_TRUE(doc["passed"].get<bool>());
  std::vector<std::string> names;
  for (const auto& c : doc["checks"]) names.push_back(c["name"]);
  for (const char* n : {"homogeneity", "norm_split", "cone_complement"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
  EXPECT_EQ(w.run("verify --suite nope"), 1);
}

TEST(Cli, ConfigErrorsExitOne) {
  Workdir w("errors");
  w.write("bad.cfg", "suite = geometry\ncases: 5\n");
  EXPECT_EQ(w.run("verify --config bad.cfg"), 1);
  EXPECT_NE(w.err().find("bad.cfg:2:1"), std::string::npos) << w.err();
  w.write("bad.csv", "x1,t,w\n0,1,1\n0,1,zz\n");
  EXPECT_EQ(w.run("dim -i bad.csv"), 1);
  EXPECT_NE(w.err().find("bad.csv:3:5"), std::string::npos) << w.err();
  EXPECT_EQ(w.run("verify --cases -3"), 1);
  EXPECT_EQ(w.run("verify --suite geometry", "PARABGMT_THREADS=zero"), 1);
  EXPECT_EQ(w.run("frobnicate"), 1);
}

TEST(Cli, ConfigFileAndFlags) {
  Workdir w("precedence");
  w.write("run.cfg", "suite = geometry\ncases = 50\nseed = 4\n");
  ASSERT_EQ(w.run("verify --config run.cfg --cases 60"), 0) << w.err();
  const auto doc = nlohmann::json::parse(w.out());
  EXPECT_EQ(doc["config"]["cases"], "60");
  EXPECT_EQ(doc["config"]["seed"], "4");
  EXPECT_EQ(doc["config"]["out"], "");
  EXPECT_EQ(doc["checks"][0]["cases"].get<int>(), 60);
}

/// Every command rerun with 1 and 8 workers, and once more from the embedded config, gives
/// byte-identical outputs.
TEST(Cli, BitIdenticalAcrossWorkersAndReruns) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
      {"generate --kind regular_defeater --depth 2 --resolution 0.003 -o d.csv", {"d.csv", "d.csv.json"}},
      {"generate --kind vertical_cantor --depth 3 --max-atoms 20000 -o v.csv", {"v.csv", "v.csv.json"}},
      {"dim -i v.csv --metric euclidean -o dim.json", {"dim.json"}},
      {"density -i v.csv --atom 100 --s 2 -o den.json", {"den.json"}},
      {"tangent -i v.csv --m 2 --sample-points 40 -o tan.json", {"tan.json", "tan.json.curves.csv"}},
      {"blowup -i v.csv --atom 5000 --r 0.05 --m 2 -o b.csv --report b.json", {"b.csv", "b.json"}},
      {"vconst --n 1 --m 2 --family vertical -o vc.json", {"vc.json"}},
      {"verify --suite rectify -o ver.json", {"ver.json"}},
      {"defeater-bmo --depth 3 --resolution 0.003 --points 6 --required 3 -o bmo.json", {"bmo.json"}},
  };
  Workdir one("w1");
  Workdir eight("w8");
  Workdir again("again");
  for (const auto& [args, outputs] : runs) {
    ASSERT_EQ(one.run(args + " --threads 1"), 0) << args << "\n" << one.err();
    ASSERT_EQ(eight.run(args, "PARABGMT_THREADS=8"), 0) << args << "\n" << eight.err();
    for (const auto& f : outputs) EXPECT_EQ(one.file(f), eight.file(f)) << args << " -> " << f;
  }
  // Reproduce every report from the configuration it embeds.
  fs::copy_file(one.path() / "v.csv", again.path() / "v.csv");
  for (const auto& [args, outputs] : runs) {
    const auto report = std::find_if(outputs.begin(), outputs.end(), [](const std::string& f) { return f.ends_with(".json"); });
    ASSERT_NE(report, outputs.end());
    fs::copy_file(one.path() / *report, again.path() / ("cfg_" + *report), fs::copy_options::overwrite_existing);
    const std::string command = args.substr(0, args.find(' '));
    ASSERT_EQ(again.run(command + " --config cfg_" + *report + " --threads 8"), 0) << args << "\n" << again.err();
    for (const auto& f : outputs) EXPECT_EQ(one.file(f), again.file(f)) << "rerun of " << args << " -> " << f;
  }
}
