#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct RunOut {
  int code = -1;
  std::string out;
};

RunOut run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(FOLDCODE_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::string out;
  while (fgets(buf, sizeof buf, p)) out += buf;
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

// minimal structural validation for the subset of JSON Schema the record uses
bool validates(const json& schema, const json& doc, std::string& err) {
  const std::string type = schema.value("type", "");
  if (type == "object") {
    if (!doc.is_object()) return err = "not an object", false;
    for (const auto& req : schema.value("required", json::array()))
      if (!doc.contains(req.get<std::string>()))
        return err = "missing " + req.get<std::string>(), false;
    if (schema.contains("properties"))
      for (auto& [key, sub] : schema["properties"].items())
        if (doc.contains(key) && !validates(sub, doc[key], err))
          return err = key + ": " + err, false;
    return true;
  }
  if (type == "integer") return doc.is_number_integer() ? true : (err = "not integer", false);
  if (type == "number") return doc.is_number() ? true : (err = "not number", false);
  if (type == "string") {
    if (!doc.is_string()) return err = "not string", false;
    if (schema.contains("enum")) {
      for (const auto& v : schema["enum"])
        if (v == doc) return true;
      return err = "not in enum", false;
    }
    return true;
  }
  if (type == "array") {
    if (!doc.is_array()) return err = "not array", false;
    if (schema.contains("items"))
      for (const auto& item : doc)
        if (!validates(schema["items"], item, err)) return false;
    return true;
  }
  return true;
}

void check_schema(const std::string& text) {
  std::ifstream in(FOLDCODE_SCHEMA_PATH);
  REQUIRE(in.good());
  json schema = json::parse(in);
  json doc = json::parse(text);
  std::string err;
  const bool ok = validates(schema, doc, err);
  if (!ok) MESSAGE(err);
  CHECK(ok);
}

}  // namespace

TEST_CASE("bound subcommand computes table entries") {
  auto lp = run("bound --n 10 --d 3 --method delsarte --format json --deterministic");
  CHECK(lp.code == 0);
  json j = json::parse(lp.out);
  CHECK(j["bound"] == 32);
  CHECK(j["method"] == "delsarte-lp");
  CHECK(j["timestamp"] == "");
  check_schema(lp.out);

  auto sdp = run("bound --n 10 --d 3 --method sdp --format json");
  CHECK(sdp.code == 0);
  json js = json::parse(sdp.out);
  CHECK(js["bound"] == 24);
  CHECK(js["status"] == "optimal");
  check_schema(sdp.out);

  auto triv = run("bound --n 8 --d 1 --method sdp --format json");
  CHECK(triv.code == 0);
  CHECK(json::parse(triv.out)["bound"] == 128);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("bound --n 40 --d 2").code == 1);
  CHECK(run("bound --n 8 --d 9").code == 1);
  CHECK(run("bound --d 2").code == 1);
  CHECK(run("verify --n 14").code == 1);
  CHECK(run("table --n-min 8 --n-max 9").code == 1);
  CHECK(run("nonsense").code == 1);
}

TEST_CASE("table output is reproducible and matches the bundled expectations") {
  const std::string args = "table --n-min 8 --n-max 9 --d 2 --deterministic";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,d,", 0) == 0);

  auto c = run("table --n-min 8 --n-max 10 --d 2,3 --deterministic --expected");
  CHECK(c.code == 0);
  CHECK(c.out.find("MISMATCH") == std::string::npos);
  CHECK(c.out.find(",28,") != std::string::npos);
}

TEST_CASE("verify subcommand reports and exits cleanly") {
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                          "/foldcode_verify.json";
  auto v = run("verify --n 8 --json " + tmp);
  CHECK(v.code == 0);
  CHECK(v.out.find("all checks passed") != std::string::npos);
  std::ifstream in(tmp);
  REQUIRE(in.good());
  json j = json::parse(in);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].is_array());
  CHECK(j["checks"].size() > 10);
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("identity"));
    CHECK(c.contains("status"));
    CHECK(c.contains("max_residual"));
  }
  std::remove(tmp.c_str());
}

TEST_CASE("export writes an SDPA file with the instance comment") {
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                          "/foldcode_export.dat-s";
  auto e = run("export --n 10 --d 3 --out " + tmp);
  CHECK(e.code == 0);
  std::ifstream in(tmp);
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("* foldcode n=10 d=3", 0) == 0);
  std::remove(tmp.c_str());
}

TEST_CASE("config precedence: flags beat environment beats file") {
  const std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  const std::string cfg = dir + "/foldcode_cfg.txt";
  {
    std::ofstream out(cfg);
    out << "max_iter = 1\n";
  }
  // file alone starves the solver
  CHECK(run("bound --n 8 --d 2 --config " + cfg).code == 2);
  // environment overrides the file
  CHECK(run("bound --n 8 --d 2 --config " + cfg, "FOLDCODE_MAXITER=200").code == 0);
  // flag overrides the environment
  CHECK(run("bound --n 8 --d 2 --max-iter 200", "FOLDCODE_MAXITER=1").code == 0);
  CHECK(run("bound --n 8 --d 2", "FOLDCODE_MAXITER=1").code == 2);
  std::remove(cfg.c_str());
}

TEST_CASE("dump-beta emits the coefficient table") {
  auto d = run("dump-beta --n 8 --oracle");
  CHECK(d.code == 0);
  CHECK(d.out.rfind("n,r,i,j,t,beta,provenance", 0) == 0);
  CHECK(d.out.find("oracle-derived") == std::string::npos);  // tables agree
}
