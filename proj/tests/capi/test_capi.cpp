// Copyright 2026 The drso Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "drso/drso.h"
#include "json.hpp"

#ifndef DRSO_DATA_DIR
#error "DRSO_DATA_DIR must point at the shipped input files"
#endif

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(DRSO_DATA_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Outcome {
  drso_status status = DRSO_OK;
  std::string text;
  bool has_gap = false;
  double gap = 0.0;
};

Outcome run(const std::string& command, const std::vector<std::string>& files, bool check = false,
            drso_format format = DRSO_FORMAT_JSON, uint64_t seed = 20160101) {
  Outcome o;
  drso_request* req = nullptr;
  o.status = drso_request_create(command.c_str(), &req);
  if (o.status != DRSO_OK) return o;
  for (const auto& f : files) {
    o.status = drso_request_add_input(req, slurp(f).c_str());
    if (o.status != DRSO_OK) {
      drso_request_destroy(req);
      return o;
    }
  }
  drso_request_set_seed(req, seed);
  drso_request_set_check_oracle(req, check ? 1 : 0);
  drso_result* res = nullptr;
  o.status = drso_run(req, &res);
  if (o.status == DRSO_OK) {
    const char* text = nullptr;
    REQUIRE(drso_result_render(res, format, &text) == DRSO_OK);
    o.text = text;
    int has = 0;
    REQUIRE(drso_result_oracle_gap(res, &has, &o.gap) == DRSO_OK);
    o.has_gap = has != 0;
  }
  drso_result_destroy(res);
  drso_request_destroy(req);
  return o;
}

nlohmann::json parsed(const Outcome& o) { return nlohmann::json::parse(o.text); }

}  // namespace

TEST_CASE("dual-solve reproduces the shifted hinge example") {
  const auto o = run("dual-solve", {"hinge.json"});
  REQUIRE(o.status == DRSO_OK);
  const auto j = parsed(o);
  CHECK(j["lambda_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["value"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(j["existence"] == "exists");
  CHECK(o.text.find("\"lambda_star\": 1.0") != std::string::npos);
}

TEST_CASE("wasserstein between identical inputs is zero") {
  const auto o = run("wasserstein", {"mu.json", "mu.json"});
  REQUIRE(o.status == DRSO_OK);
  CHECK(parsed(o)["distance"].get<double>() == 0.0);
}

TEST_CASE("oracle gap is tiny on every shipped example") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"dual-solve", {"hinge.json"}},      {"dual-solve", {"hinge_plus.json"}},
      {"dual-solve", {"bump.json"}},      {"dual-solve", {"reciprocal.json"}},
      {"worst-case", {"hinge.json"}},      {"worst-case", {"hinge_plus.json"}},
      {"worst-case", {"bump.json"}},      {"worst-case", {"reciprocal.json"}},
      {"oracle", {"hinge.json"}},          {"oracle", {"reciprocal.json"}},
      {"wasserstein", {"mu.json", "nu.json"}},
      {"newsvendor", {"newsvendor.json"}}, {"uq", {"uq.json"}},
      {"var", {"var.json"}},              {"affine", {"affine.json"}},
      {"process-eval", {"process_eval.json"}}, {"drtp", {"drtp.json"}},
      {"calibrate", {"calibrate.json"}},
  };
  for (const auto& [command, files] : cases) {
    CAPTURE(command);
    CAPTURE(files.front());
    const auto o = run(command, files, true);
    REQUIRE(o.status == DRSO_OK);
    REQUIRE(o.has_gap);
    CHECK(o.gap <= 1e-8);
  }
}

TEST_CASE("random seeded dual instance passes the strong-duality check") {
  for (uint64_t seed : {42u, 7u, 1234u}) {
    const auto o = run("dual-solve", {}, true, DRSO_FORMAT_JSON, seed);
    REQUIRE(o.status == DRSO_OK);
    CHECK(o.gap <= 1e-8);
    CHECK(parsed(o).contains("instance"));
  }
}

TEST_CASE("same seed gives byte-identical output") {
  for (const char* command : {"process-gen", "phi-compare", "newsvendor", "dual-solve"}) {
    CAPTURE(command);
    const auto a = run(command, {}, false, DRSO_FORMAT_CSV, 99);
    const auto b = run(command, {}, false, DRSO_FORMAT_CSV, 99);
    REQUIRE(a.status == DRSO_OK);
    CHECK(a.text == b.text);
  }
  CHECK(run("process-gen", {}, false, DRSO_FORMAT_CSV, 1).text != run("process-gen", {}, false, DRSO_FORMAT_CSV, 2).text);
}

TEST_CASE("process search output does not depend on the thread count") {
  setenv("DRSO_THREADS", "1", 1);
  const auto one = run("process-opt", {}, false, DRSO_FORMAT_JSON, 5);
  setenv("DRSO_THREADS", "4", 1);
  const auto four = run("process-opt", {}, false, DRSO_FORMAT_JSON, 5);
  unsetenv("DRSO_THREADS");
  REQUIRE(one.status == DRSO_OK);
  CHECK(one.text == four.text);
}

TEST_CASE("phi-compare emits the plotting columns") {
  const auto o = run("phi-compare", {}, false, DRSO_FORMAT_CSV);
  REQUIRE(o.status == DRSO_OK);
  CHECK(o.text.rfind("bin,q,p*_wasserstein,p*_burg,p*_kl\n", 0) == 0);
  // One header plus bins 0..100.
  CHECK(std::count(o.text.begin(), o.text.end(), '\n') == 102);
}

TEST_CASE("errors map onto status codes") {
  drso_request* req = nullptr;
  CHECK(drso_request_create("no-such-command", &req) == DRSO_ERR_INVALID_ARGUMENT);
  CHECK(req == nullptr);
  REQUIRE(drso_request_create("dual-solve", &req) == DRSO_OK);
  CHECK(drso_request_add_input(req, "{not json") == DRSO_ERR_SCHEMA);
  CHECK(std::string(drso_last_error_json()).find("\"schema\"") != std::string::npos);
  CHECK(drso_request_add_input(req, "{\"schema\": \"drso/0\"}") == DRSO_ERR_SCHEMA);
  CHECK(drso_request_add_input(req, "{\"schema\": \"drso/1\", \"theta\": 1}") == DRSO_OK);
  drso_result* res = nullptr;
  CHECK(drso_run(req, &res) == DRSO_ERR_SCHEMA);
  CHECK(res == nullptr);
  CHECK(std::string(drso_last_error()).find("candidates") != std::string::npos);
  CHECK(drso_request_set_tolerance(req, -1.0) == DRSO_ERR_INVALID_ARGUMENT);
  drso_request_destroy(req);

  REQUIRE(drso_request_create("drtp", &req) == DRSO_OK);
  REQUIRE(drso_request_add_input(req, R"({"schema": "drso/1", "grid": {"kind": "square", "n": 4},
      "nominal": {"points": [[0.5, 0.5]]}, "theta": 5})") == DRSO_OK);
  CHECK(drso_run(req, &res) == DRSO_ERR_INFEASIBLE);
  drso_request_destroy(req);

  REQUIRE(drso_request_create("process-eval", &req) == DRSO_OK);
  REQUIRE(drso_request_add_input(req, R"({"schema": "drso/1", "paths": [[0.5, 0.5, 0.5]],
      "control": [[0.1, 0.9]], "theta": 0.1, "c": 1, "oracle_budget": 4})") == DRSO_OK);
  drso_request_set_check_oracle(req, 1);
  CHECK(drso_run(req, &res) == DRSO_ERR_BUDGET);
  drso_request_destroy(req);

  CHECK(drso_run(nullptr, &res) == DRSO_ERR_INVALID_ARGUMENT);
  CHECK(std::string(drso_status_name(DRSO_ERR_BUDGET)) == "budget_exceeded");
}

TEST_CASE("direct numeric entry points") {
  const double x[] = {0.0, 1.0}, wx[] = {0.5, 0.5}, y[] = {1.0, 2.0}, wy[] = {0.5, 0.5};
  double w = -1.0;
  REQUIRE(drso_wasserstein_1d(x, wx, 2, y, wy, 2, 1.0, &w) == DRSO_OK);
  CHECK(w == doctest::Approx(1.0));
  const double q[] = {0.5, 0.5, 0.0}, psi[] = {0.0, 1.0, 2.0};
  double v = 0.0, p[3];
  REQUIRE(drso_phi_worst_case(q, psi, 3, 0.1, "kl", &v, p) == DRSO_OK);
  CHECK(p[2] == 0.0);
  CHECK(v > 0.5);
  CHECK(drso_phi_worst_case(q, psi, 3, 0.1, "bogus", &v, p) == DRSO_ERR_INVALID_ARGUMENT);
  CHECK(drso_command_count() == 14);
}
