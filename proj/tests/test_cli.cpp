#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bridgehack/io.hpp"
#include "testutil.hpp"

// CLI_BIN and FIXTURES_DIR come from the build system.

namespace fs = std::filesystem;
using namespace bridgehack;
namespace bio = bridgehack::io;

namespace {

const std::string kCli = CLI_BIN;
const fs::path kFixtures = FIXTURES_DIR;

fs::path out_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "bridgehack_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Replays a golden command with --out into the temp dir and compares bytes.
void check_golden(const std::string& args_template,
                  const std::string& golden_name, int expected_exit) {
  const fs::path fresh = out_dir() / golden_name;
  fs::create_directories(fresh.parent_path());
  const int code = run(args_template + " --out " + fresh.string());
  CHECK_MESSAGE(code == expected_exit, "command: " << args_template);
  CHECK_MESSAGE(slurp(fresh) == slurp(kFixtures / "golden" / golden_name),
                "golden mismatch for " << golden_name);
}

std::string fx(const std::string& rel) { return (kFixtures / rel).string(); }

}  // namespace

TEST_CASE("golden: make-channel families") {
  check_golden("make-channel erasure --dim 3 --name erasure-uniform-trit",
               "erasure_trit.json", 0);
  check_golden("make-channel random-positive --dim 3 --seed 7 "
               "--name random-positive-7",
               "random_positive_7.json", 0);
  check_golden("make-channel permutation --map 1,2,0 --name cycle3",
               "cycle3.json", 0);
  check_golden("make-channel absorber --dim 3 --absorbing 0,1 --rate 0.5 "
               "--name absorber-01",
               "absorber01.json", 0);
  check_golden("make-channel block-symmetric --blocks '0,1|2' --lambda 0.5 "
               "--name block-symmetric-trit",
               "blocksym.json", 0);
  check_golden("make-channel depolarising --lambda 0.5 "
               "--name depolarising-half",
               "depolarising_half.json", 0);
  check_golden("make-channel dephasing --lambda 1.0 --name dephasing-full",
               "dephasing_full.json", 0);
}

TEST_CASE("golden: classical solvers") {
  const std::string erasure = fx("golden/erasure_trit.json");
  const std::string random = fx("golden/random_positive_7.json");
  const std::string absorber = fx("golden/absorber01.json");
  const std::string p = fx("trit_p.json");
  const std::string q = fx("trit_q.json");

  check_golden("classical-hack " + erasure + " " + p + " " + q,
               "hack_erasure.json", 0);
  check_golden("classical-hack " + random + " " + p + " " + q,
               "hack_random.json", 0);
  check_golden("classical-feasible " + random + " " + p + " " + q,
               "feasible_random.json", 0);
  check_golden("classical-feasible " + absorber + " " + p + " " + q,
               "feasible_absorber.json", 2);
  check_golden("classical-bridge " + random + " " + p + " " + q,
               "bridge_random.json", 0);
}

TEST_CASE("golden: quantum solvers") {
  const std::string dep = fx("golden/depolarising_half.json");
  const std::string rho = fx("qubit_rho.json");
  const std::string omega = fx("qubit_omega.json");

  check_golden("quantum-hack " + dep + " " + rho + " " + omega,
               "qhack_dep.json", 0);
  check_golden("quantum-hack " + dep + " " + rho + " " + omega + " --seed 5",
               "qhack_dep_seeded.json", 0);
  check_golden("quantum-bridge " + dep + " " + rho + " " + omega +
                   " --mode hermitian",
               "qbridge_herm.json", 0);
  check_golden("quantum-bridge " + dep + " " + rho + " " + omega + " --mode ic",
               "qbridge_ic.json", 0);
}

TEST_CASE("golden: image CSVs") {
  check_golden("image classical " + fx("golden/erasure_trit.json") + " " +
                   fx("trit_q.json") + " --entropy 0.7 --samples 12 --seed 3",
               "image_classical.csv", 0);
  check_golden("image quantum " + fx("golden/depolarising_half.json") + " " +
                   fx("qubit_omega.json") + " --purity 0.8 --samples 12 --seed 4",
               "image_quantum.csv", 0);
}

TEST_CASE("erasure image output equals its input columns") {
  std::istringstream csv(slurp(kFixtures / "golden" / "image_classical.csv"));
  std::string line;
  std::getline(csv, line);  // header
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::abs(std::stod(cells[1]) - std::stod(cells[3])) < 1e-12);
    CHECK(std::abs(std::stod(cells[2]) - std::stod(cells[4])) < 1e-12);
    CHECK(cells[6] == "ok");
    ++rows;
  }
  CHECK(rows == 12);
}

TEST_CASE("exit codes: non-convergence, singularity, input errors") {
  const fs::path id_path = out_dir() / "identity.json";
  {
    StochasticMatrix id = StochasticMatrix::identity(3);
    bio::save_json_file(id_path.string(), bio::to_json(id, "identity"));
  }
  CHECK(run("classical-hack " + id_path.string() + " " + fx("trit_p.json") +
            " " + fx("trit_q.json")) == 2);
  CHECK(run("classical-hack " + id_path.string() + " " + fx("trit_p.json") +
            " " + fx("trit_p.json")) == 0);

  CHECK(run("quantum-hack " + fx("golden/dephasing_full.json") + " " +
            fx("rho_diag.json") + " " + fx("omega_diag.json")) == 2);
  CHECK(run("quantum-hack " + fx("golden/dephasing_full.json") + " " +
            fx("rho_diag.json") + " " + fx("rho_diag.json")) == 0);

  // Erasure to a pure state: Petz map structurally undefined.
  const fs::path pure_erasure = out_dir() / "pure_erasure.json";
  {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(2);
    ket[0] = 1.0;
    KrausChannel erase =
        make_qubit_channel(QuantumErasure{DensityMatrix::pure(ket)});
    bio::save_json_file(pure_erasure.string(), bio::to_json(erase, "erase-0"));
  }
  CHECK(run("quantum-hack " + pure_erasure.string() + " " +
            fx("qubit_rho.json") + " " + fx("qubit_omega.json")) == 3);

  CHECK(run("classical-hack /nonexistent.json " + fx("trit_p.json") + " " +
            fx("trit_q.json")) == 1);
  CHECK(run("classical-hack " + fx("trit_p.json") + " " + fx("trit_p.json") +
            " " + fx("trit_q.json")) == 1);
}

TEST_CASE("CLI output is byte-identical to the library serialization") {
  StochasticMatrix e =
      bio::stochastic_from_json(bio::load_json_file(fx("golden/random_positive_7.json")));
  ProbabilityVector p =
      bio::probability_from_json(bio::load_json_file(fx("trit_p.json")));
  ProbabilityVector q =
      bio::probability_from_json(bio::load_json_file(fx("trit_q.json")));
  HackSolution sol = prior_hack_ras(e, p, q);
  const std::string direct = bio::hack_solution_doc(sol).dump(2) + "\n";
  CHECK(direct == slurp(kFixtures / "golden" / "hack_random.json"));
}

TEST_CASE("documents round-trip through save/load") {
  StochasticMatrix e = make_channel(RandomPositive{3, 4, 19});
  bio::json doc = bio::to_json(e, "roundtrip");
  StochasticMatrix back = bio::stochastic_from_json(doc);
  CHECK(testutil::max_diff(back.entries(), e.entries()) == 0.0);
  CHECK(bio::to_json(back, "roundtrip") == doc);

  KrausChannel k = make_random_channel(2, 2, 2, 20);
  bio::json kdoc = bio::to_json(k, "kraus-roundtrip");
  KrausChannel kback = bio::kraus_from_json(kdoc);
  CHECK(bio::to_json(kback, "kraus-roundtrip") == kdoc);

  DensityMatrix rho = testutil::random_density(3, 21);
  CHECK(bio::density_from_json(bio::to_json(rho)).matrix() == rho.matrix());

  ProbabilityVector p = testutil::random_dirichlet(4, 22);
  CHECK(bio::probability_from_json(bio::to_json(p)).weights() == p.weights());
}

TEST_CASE("loader validates at 1e-9 and repairs short decimals") {
  bio::json doc{{"kind", "probability"},
                {"dim", 3},
                {"data", {0.333333333, 0.333333333, 0.333333333}}};
  ProbabilityVector p = bio::probability_from_json(doc);
  CHECK(std::abs(p.weights().sum() - 1.0) < 1e-15);

  bio::json bad{{"kind", "probability"}, {"dim", 2}, {"data", {0.7, 0.2}}};
  CHECK_THROWS_AS(bio::probability_from_json(bad), std::invalid_argument);
}

TEST_CASE("quantum CLI output is byte-identical to the library serialization") {
  KrausChannel e =
      bio::kraus_from_json(bio::load_json_file(fx("golden/depolarising_half.json")));
  DensityMatrix rho =
      bio::density_from_json(bio::load_json_file(fx("qubit_rho.json")));
  DensityMatrix omega =
      bio::density_from_json(bio::load_json_file(fx("qubit_omega.json")));
  QuantumHackSolution sol = quantum_prior_hack(e, rho, omega);
  const std::string direct = bio::quantum_hack_doc(sol).dump(2) + "\n";
  CHECK(direct == slurp(kFixtures / "golden" / "qhack_dep.json"));
}
