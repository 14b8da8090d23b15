// Command-line frontend for the prior-hacking / Schroedinger-bridge library.
// Exit codes: 0 success (converged / feasible), 1 input error,
// 2 non-convergence or infeasible, 3 singularity / rank deficiency.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bridgehack/classical.hpp"
#include "bridgehack/imaging.hpp"
#include "bridgehack/io.hpp"
#include "bridgehack/log.hpp"
#include "bridgehack/quantum.hpp"

namespace {

using namespace bridgehack;
namespace io = bridgehack::io;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitSingular = 3;

void emit(const io::json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    io::save_json_file(out_path, doc);
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    out << text;
  }
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::MaxIterations: return kExitNoConvergence;
    case SolveStatus::Singular: return kExitSingular;
  }
  return kExitInput;
}

int exit_code(QuantumStatus s) {
  switch (s) {
    case QuantumStatus::Converged: return kExitOk;
    case QuantumStatus::MaxIterations: return kExitNoConvergence;
    case QuantumStatus::RankDeficientIterate: return kExitSingular;
  }
  return kExitInput;
}

struct SolverFlags {
  double tol = 1e-10;
  int max_iters = 10000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags, double default_tol) {
  flags.tol = default_tol;
  cmd->add_option("--tol", flags.tol, "convergence tolerance");
  cmd->add_option("--max-iters", flags.max_iters, "iteration cap");
  cmd->add_option("--seed", flags.seed,
                  "seed for a random start (default: deterministic start)");
  cmd->add_option("--out", flags.out, "output file (default: stdout)");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

StochasticMatrix load_stochastic(const std::string& path) {
  return io::stochastic_from_json(io::load_json_file(path));
}

KrausChannel load_kraus(const std::string& path) {
  return io::kraus_from_json(io::load_json_file(path));
}

ProbabilityVector load_probability(const std::string& path) {
  return io::probability_from_json(io::load_json_file(path));
}

DensityMatrix load_density(const std::string& path) {
  return io::density_from_json(io::load_json_file(path));
}

// ---- subcommand bodies ----------------------------------------------------

int run_classical_hack(const std::string& channel_path,
                       const std::string& target_path,
                       const std::string& evidence_path,
                       const SolverFlags& flags) {
  StochasticMatrix e = load_stochastic(channel_path);
  ProbabilityVector p = load_probability(target_path);
  ProbabilityVector q = load_probability(evidence_path);
  RasOptions opts;
  opts.tol = flags.tol;
  opts.max_iterations = flags.max_iters;
  opts.seed = flags.seed;
  HackSolution sol = prior_hack_ras(e, p, q, opts);
  log_info("classical hack: " + to_string(sol.status) + " after " +
           std::to_string(sol.iterations) + " iterations, residual " +
           io::format_double(sol.residual));
  emit(io::hack_solution_doc(sol), flags.out);
  return exit_code(sol.status);
}

int run_classical_feasible(const std::string& channel_path,
                           const std::string& target_path,
                           const std::string& evidence_path,
                           const std::string& out_path) {
  StochasticMatrix e = load_stochastic(channel_path);
  ProbabilityVector p = load_probability(target_path);
  ProbabilityVector q = load_probability(evidence_path);
  FeasibilityVerdict v = check_feasibility(e, p, q);
  emit(io::feasibility_doc(v), out_path);
  return v.feasible ? kExitOk : kExitNoConvergence;
}

int run_classical_bridge(const std::string& channel_path,
                         const std::string& target_path,
                         const std::string& evidence_path,
                         const SolverFlags& flags) {
  StochasticMatrix e = load_stochastic(channel_path);
  ProbabilityVector p = load_probability(target_path);
  ProbabilityVector q = load_probability(evidence_path);
  RasOptions opts;
  opts.tol = flags.tol;
  opts.max_iterations = flags.max_iters;
  opts.seed = flags.seed;
  HackSolution sol = prior_hack_ras(e, p, q, opts);
  if (sol.status != SolveStatus::Converged) {
    emit(io::hack_solution_doc(sol), flags.out);
    return exit_code(sol.status);
  }
  StochasticMatrix bridge = bridge_from_prior(e, sol);
  const double forward =
      (bridge.entries() * p.weights() - q.weights()).lpNorm<1>();
  const double duality = (bayes_inverse(bridge, p).entries() -
                          bayes_inverse(e, sol.gamma).entries())
                             .cwiseAbs()
                             .maxCoeff();
  emit(io::classical_bridge_doc(sol, bridge, forward, duality), flags.out);
  return kExitOk;
}

int run_quantum_hack(const std::string& channel_path,
                     const std::string& target_path,
                     const std::string& evidence_path,
                     const SolverFlags& flags) {
  KrausChannel e = load_kraus(channel_path);
  DensityMatrix rho = load_density(target_path);
  DensityMatrix omega = load_density(evidence_path);
  QuantumSolveOptions opts;
  opts.tol = flags.tol;
  opts.max_iterations = flags.max_iters;
  opts.seed = flags.seed;
  QuantumHackSolution sol = quantum_prior_hack(e, rho, omega, opts);
  log_info("quantum hack: " + to_string(sol.status) + " after " +
           std::to_string(sol.iterations) + " iterations, residual " +
           io::format_double(sol.residual));
  emit(io::quantum_hack_doc(sol), flags.out);
  return exit_code(sol.status);
}

int run_quantum_bridge(const std::string& channel_path,
                       const std::string& target_path,
                       const std::string& evidence_path,
                       const std::string& mode, const SolverFlags& flags) {
  KrausChannel e = load_kraus(channel_path);
  DensityMatrix rho = load_density(target_path);
  DensityMatrix omega = load_density(evidence_path);
  QuantumSolveOptions opts;
  opts.tol = flags.tol;
  opts.max_iterations = flags.max_iters;
  opts.seed = flags.seed;

  BridgeResult result;
  std::optional<double> duality;
  if (mode == "hermitian") {
    result = qsb_hermitian(e, rho, omega, opts);
  } else if (mode == "ic") {
    result = qsb_inference_consistent(e, rho, omega, opts);
    if (result.bridge && result.status == QuantumStatus::Converged) {
      double worst = 0.0;
      const ComplexMatrix& gamma = result.potentials[2];
      for (const ComplexMatrix& op : hermitian_basis(rho.dim())) {
        const ComplexMatrix lhs = petz_apply(*result.bridge, rho.matrix(), op);
        const ComplexMatrix rhs = petz_apply(e, gamma, op);
        worst = std::max(worst, (lhs - rhs).norm());
      }
      duality = worst;
    }
  } else {
    throw std::invalid_argument("mode must be 'hermitian' or 'ic'");
  }
  log_info("quantum bridge (" + mode + "): " + to_string(result.status) +
           ", forward " + io::format_double(result.forward_residual) +
           ", tp " + io::format_double(result.tp_residual));
  emit(io::quantum_bridge_doc(result, duality), flags.out);
  return exit_code(result.status);
}

int run_image(const std::string& regime, const std::string& channel_path,
              const std::string& evidence_path, std::optional<double> entropy,
              std::optional<double> purity_level, int samples,
              std::uint64_t seed, const std::string& out_path) {
  std::ostringstream csv;
  if (regime == "classical") {
    if (!entropy)
      throw std::invalid_argument("classical imaging needs --entropy");
    StochasticMatrix e = load_stochastic(channel_path);
    ProbabilityVector q = load_probability(evidence_path);
    io::write_classical_image_csv(
        csv, hack_image_classical(e, q, *entropy, samples, seed));
  } else if (regime == "quantum") {
    if (!purity_level)
      throw std::invalid_argument("quantum imaging needs --purity");
    KrausChannel e = load_kraus(channel_path);
    DensityMatrix omega = load_density(evidence_path);
    io::write_quantum_image_csv(
        csv, hack_image_quantum(e, omega, *purity_level, samples, seed));
  } else {
    throw std::invalid_argument("image regime must be classical or quantum");
  }
  emit_text(csv.str(), out_path);
  return kExitOk;
}

struct MakeChannelFlags {
  std::string kind;
  Eigen::Index dim = 3;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  double lambda = 0.5;
  double rate = 0.5;
  std::uint64_t seed = 0;
  Eigen::Index env = 2;
  std::string map;
  std::string absorbing;
  std::string blocks;
  std::string target = "uniform";
  std::string name;
  std::string out;
};

int run_make_channel(const MakeChannelFlags& f) {
  io::json doc;
  if (f.kind == "permutation") {
    doc = io::to_json(make_channel(Permutation{parse_int_list(f.map)}), f.name);
  } else if (f.kind == "erasure") {
    ProbabilityVector target = f.target == "uniform"
                                   ? ProbabilityVector::uniform(f.dim)
                                   : load_probability(f.target);
    doc = io::to_json(make_channel(Erasure{target}), f.name);
  } else if (f.kind == "bistochastic") {
    doc = io::to_json(make_channel(Bistochastic{f.dim, f.lambda}), f.name);
  } else if (f.kind == "absorber") {
    doc = io::to_json(
        make_channel(Absorber{f.dim, parse_int_list(f.absorbing), f.rate}),
        f.name);
  } else if (f.kind == "block-symmetric") {
    std::vector<std::vector<int>> blocks;
    std::stringstream ss(f.blocks);
    std::string chunk;
    while (std::getline(ss, chunk, '|')) blocks.push_back(parse_int_list(chunk));
    doc = io::to_json(make_channel(BlockSymmetric{blocks, f.lambda}), f.name);
  } else if (f.kind == "random-positive") {
    const Eigen::Index rows = f.rows > 0 ? f.rows : f.dim;
    const Eigen::Index cols = f.cols > 0 ? f.cols : f.dim;
    doc = io::to_json(make_channel(RandomPositive{rows, cols, f.seed}), f.name);
  } else if (f.kind == "depolarising") {
    doc = io::to_json(make_qubit_channel(Depolarising{f.lambda}), f.name);
  } else if (f.kind == "dephasing") {
    doc = io::to_json(make_qubit_channel(Dephasing{f.lambda}), f.name);
  } else if (f.kind == "amplitude-damping") {
    doc = io::to_json(make_qubit_channel(AmplitudeDamping{f.lambda}), f.name);
  } else if (f.kind == "random-kraus") {
    const Eigen::Index rows = f.rows > 0 ? f.rows : f.dim;
    const Eigen::Index cols = f.cols > 0 ? f.cols : f.dim;
    doc = io::to_json(make_random_channel(cols, rows, f.env, f.seed), f.name);
  } else {
    throw std::invalid_argument("unknown channel kind '" + f.kind + "'");
  }
  emit(doc, f.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bridgehack: prior hacking and single-step Schroedinger bridges for "
      "stochastic matrices and quantum channels"};
  app.require_subcommand(1);

  std::string channel_path, target_path, evidence_path, mode = "hermitian";
  std::string regime, verdict_out;
  SolverFlags hack_flags, bridge_flags, qhack_flags, qbridge_flags;
  MakeChannelFlags make_flags;
  std::optional<double> entropy, purity_level;
  int samples = 100;
  std::uint64_t image_seed = 0;
  std::string image_out;

  auto* chack = app.add_subcommand("classical-hack",
                                   "solve the RAS prior-hacking problem");
  chack->add_option("channel", channel_path)->required();
  chack->add_option("target", target_path)->required();
  chack->add_option("evidence", evidence_path)->required();
  add_solver_flags(chack, hack_flags, 1e-10);

  auto* cfeas = app.add_subcommand("classical-feasible",
                                   "Sinkhorn feasibility by subset enumeration");
  cfeas->add_option("channel", channel_path)->required();
  cfeas->add_option("target", target_path)->required();
  cfeas->add_option("evidence", evidence_path)->required();
  cfeas->add_option("--out", verdict_out, "output file (default: stdout)");

  auto* cbridge = app.add_subcommand(
      "classical-bridge", "hack the prior, then build the bridge");
  cbridge->add_option("channel", channel_path)->required();
  cbridge->add_option("target", target_path)->required();
  cbridge->add_option("evidence", evidence_path)->required();
  add_solver_flags(cbridge, bridge_flags, 1e-10);

  auto* qhack = app.add_subcommand("quantum-hack",
                                   "solve Petz prior hacking for a channel");
  qhack->add_option("channel", channel_path)->required();
  qhack->add_option("target", target_path)->required();
  qhack->add_option("evidence", evidence_path)->required();
  add_solver_flags(qhack, qhack_flags, 1e-8);

  auto* qbridge = app.add_subcommand("quantum-bridge",
                                     "quantum Schroedinger bridge");
  qbridge->add_option("channel", channel_path)->required();
  qbridge->add_option("target", target_path)->required();
  qbridge->add_option("evidence", evidence_path)->required();
  qbridge->add_option("--mode", mode, "hermitian | ic");
  add_solver_flags(qbridge, qbridge_flags, 1e-8);

  auto* image = app.add_subcommand("image",
                                   "sample hacking-map images as CSV");
  image->add_option("regime", regime, "classical | quantum")->required();
  image->add_option("channel", channel_path)->required();
  image->add_option("evidence", evidence_path)->required();
  image->add_option("--entropy", entropy, "entropy shell (classical)");
  image->add_option("--purity", purity_level, "purity shell (quantum)");
  image->add_option("--samples", samples, "number of samples");
  image->add_option("--seed", image_seed, "sampling seed");
  image->add_option("--out", image_out, "output CSV (default: stdout)");

  auto* make = app.add_subcommand("make-channel", "emit a channel document");
  make->add_option("kind", make_flags.kind,
                   "permutation | erasure | bistochastic | absorber | "
                   "block-symmetric | random-positive | depolarising | "
                   "dephasing | amplitude-damping | random-kraus")
      ->required();
  make->add_option("--dim", make_flags.dim);
  make->add_option("--rows", make_flags.rows);
  make->add_option("--cols", make_flags.cols);
  make->add_option("--lambda", make_flags.lambda);
  make->add_option("--rate", make_flags.rate);
  make->add_option("--seed", make_flags.seed);
  make->add_option("--env", make_flags.env, "environment dimension");
  make->add_option("--map", make_flags.map, "permutation image list, e.g. 1,2,0");
  make->add_option("--absorbing", make_flags.absorbing, "absorbing states");
  make->add_option("--blocks", make_flags.blocks, "blocks, e.g. 0,1|2");
  make->add_option("--target", make_flags.target,
                   "'uniform' or a state document path");
  make->add_option("--name", make_flags.name);
  make->add_option("--out", make_flags.out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (chack->parsed())
      return run_classical_hack(channel_path, target_path, evidence_path,
                                hack_flags);
    if (cfeas->parsed())
      return run_classical_feasible(channel_path, target_path, evidence_path,
                                    verdict_out);
    if (cbridge->parsed())
      return run_classical_bridge(channel_path, target_path, evidence_path,
                                  bridge_flags);
    if (qhack->parsed())
      return run_quantum_hack(channel_path, target_path, evidence_path,
                              qhack_flags);
    if (qbridge->parsed())
      return run_quantum_bridge(channel_path, target_path, evidence_path, mode,
                                qbridge_flags);
    if (image->parsed())
      return run_image(regime, channel_path, evidence_path, entropy,
                       purity_level, samples, image_seed, image_out);
    if (make->parsed()) return run_make_channel(make_flags);
  } catch (const Singular& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSingular;
  } catch (const RankDeficient& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSingular;
  } catch (const DivisionSingularity& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSingular;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSingular;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
