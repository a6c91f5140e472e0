#pragma once

#include "sqt/linalg.hpp"
#include "sqt/observables.hpp"
#include "sqt/scattering.hpp"
#include "sqt/schemes.hpp"
#include "sqt/sq.hpp"

#include <json.hpp>

#include <string>

namespace sqt {

using Json = nlohmann::json;

// Rounds to 12 significant digits, the precision of every reported entropy.
double round12(double x);

// {"factor_dims": [...], "amplitudes": [[re, im], ...]} in row-major multi-index order.
Json to_json(const StateVector &state);
// Accepts states whose norm is within 1e-6 of one and renormalizes them; throws InvalidInput otherwise.
StateVector state_from_json(const Json &j);

// {"events": [...], "weights": [...]}. Non-string event labels are kept as their JSON text.
Json to_json(const Scheme &scheme);
Scheme scheme_from_json(const Json &j);

// {"eigenvalues": [...], "eigenbasis": [[re, im], ...]} with the basis flattened column-major.
Json to_json(const PointObservable &obs);
PointObservable observable_from_json(const Json &j);

// {"value", "method", "weights", "restarts_used", "converged", "argmin": [observables]}.
Json to_json(const SqResult &result);

Json to_json(const GasTrajectory &traj);
// Header `t,sq_estimate,pair_i,pair_j`, one row per entry.
std::string to_csv(const GasTrajectory &traj);

} // namespace sqt
