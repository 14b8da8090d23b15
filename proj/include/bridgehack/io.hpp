#ifndef BRIDGEHACK_IO_HPP_
#define BRIDGEHACK_IO_HPP_

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bridgehack/classical.hpp"
#include "bridgehack/imaging.hpp"
#include "bridgehack/quantum.hpp"

namespace bridgehack::io {

using nlohmann::json;

// Documents are validated on load at 1e-9 and re-normalized onto the strict
// library invariants, so hand-written files with short decimal literals load
// cleanly. Files written by this module round-trip exactly.
inline constexpr double kLoadTol = 1e-9;

using ChannelVariant = std::variant<StochasticMatrix, KrausChannel>;
using StateVariant = std::variant<ProbabilityVector, DensityMatrix>;

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& doc);

json to_json(const StochasticMatrix& e, const std::string& name = "");
json to_json(const KrausChannel& e, const std::string& name = "");
json to_json(const ProbabilityVector& p);
json to_json(const DensityMatrix& rho);
json to_json(const ComplexMatrix& m);

ChannelVariant channel_from_json(const json& doc);
StateVariant state_from_json(const json& doc);

ProbabilityVector probability_from_json(const json& doc);
DensityMatrix density_from_json(const json& doc);
StochasticMatrix stochastic_from_json(const json& doc);
KrausChannel kraus_from_json(const json& doc);
ComplexMatrix complex_matrix_from_json(const json& doc);

json hack_solution_doc(const HackSolution& s);
json feasibility_doc(const FeasibilityVerdict& v);
json classical_bridge_doc(const HackSolution& s, const StochasticMatrix& bridge,
                          double forward_residual, double duality_residual);
json quantum_hack_doc(const QuantumHackSolution& s);
json quantum_bridge_doc(const BridgeResult& r,
                        std::optional<double> duality_residual);

// 17 significant digits; non-finite values print as nan/inf.
std::string format_double(double v);

void write_classical_image_csv(std::ostream& os,
                               const std::vector<ClassicalImageSample>& rows);
void write_quantum_image_csv(std::ostream& os,
                             const std::vector<QuantumImageSample>& rows);

}  // namespace bridgehack::io

#endif  // BRIDGEHACK_IO_HPP_
