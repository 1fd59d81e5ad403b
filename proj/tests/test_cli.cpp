#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gaugemode/cli.hpp"
#include "gaugemode/config.hpp"

namespace fs = std::filesystem;
using namespace gaugemode;

namespace {

const std::string kSource = GAUGEMODE_SOURCE_DIR;
const std::string kCli = GAUGEMODE_CLI_PATH;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("gaugemode_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

struct Outcome {
  int status;
  std::string out;
};

/// Runs the real binary through the shell; stderr is folded into the captured text.
Outcome shell(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text};
}

Outcome in_process(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str() + err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int count_dominant(const std::vector<std::vector<std::string>>& rows) {
  int n = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) n += rows[r].back() == "1";
  return n;
}

}  // namespace

TEST_CASE("every shipped figure config runs to exit 0") {
  Scratch s;
  const std::pair<const char*, const char*> runs[] = {
      {"spectrum", "fig1b"}, {"sweep", "fig1d"}, {"rotate", "fig1e"},   {"modes", "fig2c"},
      {"modes", "fig2d"},    {"spectrum", "fig3b"}, {"spectrum", "fig3f"}, {"fold", "fig4c"},
      {"spectrum", "fig1e_caption"}, {"spectrum", "fig3b_text"}};
  for (const auto& [kind, name] : runs) {
    CAPTURE(name);
    const auto r = shell(std::string(kind) + " '" + kSource + "/configs/" + name + ".yaml' -d '" + s.dir.string() + "'");
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
    CHECK(fs::exists(s.dir / (std::string(name) + ".csv")));
  }

  // what the plotting side will emphasize
  CHECK(count_dominant(csv(s.dir / "fig1b.csv")) == 1);
  CHECK(count_dominant(csv(s.dir / "fig1e.csv")) == 1);
  CHECK(count_dominant(csv(s.dir / "fig2c.csv")) == 1);
  CHECK(count_dominant(csv(s.dir / "fig2d.csv")) == 1);
  CHECK(count_dominant(csv(s.dir / "fig3b.csv")) == 2);
  CHECK(count_dominant(csv(s.dir / "fig3f.csv")) == 4);
  CHECK(count_dominant(csv(s.dir / "fig4c.csv")) == 3);
  CHECK(fs::exists(s.dir / "fig2c_mode1.csv"));
  CHECK(fs::exists(s.dir / "fig2d_mode3.csv"));

  const auto b = csv(s.dir / "fig1b.csv");
  CHECK(b.size() == 7);  // header + N rows

  const auto sweep = csv(s.dir / "fig1d.csv");
  REQUIRE(sweep.size() == 29);
  CHECK(sweep[0] == std::vector<std::string>{"sites", "gap", "top", "runner_up"});
  for (std::size_t r = 2; r < sweep.size(); ++r) {
    CHECK(std::stoi(sweep[r][0]) == std::stoi(sweep[r - 1][0]) + 2);
    CHECK(std::stod(sweep[r][1]) > std::stod(sweep[r - 1][1]));
  }
}

TEST_CASE("every annotated example runs to exit 0") {
  Scratch s;
  for (const char* kind : {"validate", "spectrum", "modes", "sweep", "rotate", "fold", "compare"}) {
    CAPTURE(kind);
    const auto r = in_process({kind, kSource + "/configs/examples/" + kind + ".yaml", "-d", s.dir.string()});
    CHECK(r.status == 0);
  }
  CHECK(fs::exists(s.dir / "fcg6.csv"));
  CHECK(fs::exists(s.dir / "compare.json"));
  CHECK(fs::exists(s.dir / "modes_mode9.csv"));
  CHECK_FALSE(fs::exists(s.dir / "validate.csv"));
}

TEST_CASE("compare reports the matched distance") {
  Scratch s;
  const auto cfg = s.write("fig2.yaml", "sites: 6\nt_forward: 2i\nt_backward: 1i\ngauge: 1\n");
  const auto r = in_process({"compare", cfg, "-f", "json", "-d", s.dir.string()});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(s.dir / "fig2.json"));
  CHECK(j["summary"]["max_distance"].get<double>() <= 1e-9 * j["summary"]["scale"].get<double>());
  CHECK(j["summary"]["pass"].get<bool>());
  CHECK(j["compare"].size() == 6);
}

TEST_CASE("exit codes") {
  Scratch s;
  const auto good = s.write("good.yaml", "sites: 6\nt_forward: 2\n");
  const auto declared = s.write("declared.yaml", "experiment: spectrum\nsites: 6\nt_forward: 2\n");
  const auto odd = s.write("odd.yaml", "sites: 7\npattern: hcs\nt_forward: 2\n");
  const auto typo = s.write("typo.yaml", "sites: 6\nt_forwrd: 2\n");

  CHECK(shell("spectrum '" + good + "' -d '" + s.dir.string() + "'").status == 0);
  CHECK(shell("--help").status == 0);
  CHECK(shell("").status == 1);
  CHECK(shell("plot '" + good + "'").status == 1);
  CHECK(shell("spectrum").status == 1);
  CHECK(shell("spectrum '" + (s.dir / "missing.yaml").string() + "'").status == 1);
  CHECK(shell("spectrum '" + good + "' --format xml").status == 1);
  CHECK(shell("spectrum '" + good + "' --tie-tol -1").status == 1);

  const auto hcs = shell("validate '" + odd + "'");
  CHECK(hcs.status == 1);
  CHECK(hcs.out.find("HCS requires even site count") != std::string::npos);
  const auto unknown = shell("spectrum '" + typo + "'");
  CHECK(unknown.status == 1);
  CHECK(unknown.out.find("unknown keys: t_forwrd") != std::string::npos);

  CHECK(shell("compare '" + declared + "'").status == 1);
  CHECK(shell("validate '" + declared + "'").status == 0);
  CHECK(shell("rotate '" + good + "'").status == 1);  // no rotation block

  // numerical failures
  CHECK(shell("compare '" + good + "' --match-tol 1e-30 -d '" + s.dir.string() + "'").status == 2);
  const auto solver = shell("spectrum '" + good + "' --solver-tol 1e-300 -d '" + s.dir.string() + "'");
  CHECK(solver.status == 2);
  CHECK(solver.out.find("numerical failure") != std::string::npos);

  // unwritable destination
  const auto blocker = s.write("blocker", "x");
  CHECK(in_process({"spectrum", good, "-d", blocker}).status == 1);
}

TEST_CASE("output locations") {
  Scratch s;
  const auto cfg = s.write("loc.yaml", "sites: 4\nt_forward: 3\noutput: {path: nested/named}\n");
  CHECK(in_process({"spectrum", cfg, "-d", s.dir.string()}).status == 0);
  CHECK(fs::exists(s.dir / "nested" / "named.csv"));

  CHECK(in_process({"spectrum", cfg, "-o", (s.dir / "direct.json").string(), "-f", "json"}).status == 0);
  CHECK(fs::exists(s.dir / "direct.json"));

  const fs::path env_dir = s.dir / "from_env";
  ::setenv("GAUGEMODE_OUT_DIR", env_dir.c_str(), 1);
  const auto r = in_process({"spectrum", cfg});
  ::unsetenv("GAUGEMODE_OUT_DIR");
  CHECK(r.status == 0);
  CHECK(fs::exists(env_dir / "nested" / "named.csv"));
}

TEST_CASE("byte-identical output and embedded config round trip") {
  Scratch s;
  const std::string fig = kSource + "/configs/fig3f.yaml";
  for (const char* format : {"csv", "json"}) {
    CHECK(shell(std::string("spectrum '") + fig + "' -f " + format + " -o '" + (s.dir / "a").string() + "." + format + "'").status == 0);
    CHECK(shell(std::string("spectrum '") + fig + "' -f " + format + " -o '" + (s.dir / "b").string() + "." + format + "'").status == 0);
    const auto a = slurp(s.dir / (std::string("a.") + format));
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(s.dir / (std::string("b.") + format)));
  }

  // overrides land in the embedded config, which reparses to the effective config
  CHECK(in_process({"spectrum", fig, "-f", "json", "--criterion", "max_im", "--tie-tol", "1e-6", "-o",
                    (s.dir / "c.json").string()}).status == 0);
  const auto j = nlohmann::json::parse(slurp(s.dir / "c.json"));
  ExperimentConfig expected = load_config(fig);
  expected.criterion = Criterion::MaxIm;
  expected.tolerances.tie = 1e-6;
  expected.output.format = OutputFormat::Json;
  CHECK(parse_config(j["config"].dump()) == expected);

  const auto embedded = s.write("embedded.json", j["config"].dump(2));
  CHECK(in_process({"spectrum", embedded, "-o", (s.dir / "d.json").string()}).status == 0);
  auto d = nlohmann::json::parse(slurp(s.dir / "d.json"));
  CHECK(d["spectrum"] == j["spectrum"]);
}
