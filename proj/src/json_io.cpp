#include "sqt/json_io.hpp"

#include "sqt/errors.hpp"

#include <cmath>
#include <sstream>

namespace sqt {

namespace {

Json complex_list(const Complex *data, Eigen::Index n) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < n; ++i) out.push_back({data[i].real(), data[i].imag()});
    return out;
}

Complex complex_entry(const Json &e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InvalidInput("complex entries must be [re, im] pairs");
    return {e[0].get<double>(), e[1].get<double>()};
}

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::string format12(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

} // namespace

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    return std::stod(format12(x));
}

Json to_json(const StateVector &state) {
    return {{"factor_dims", state.factor_dims()},
            {"amplitudes", complex_list(state.amplitudes().data(), state.amplitudes().size())}};
}

StateVector state_from_json(const Json &j) {
    const Json &dims_j = field(j, "factor_dims");
    const Json &amps_j = field(j, "amplitudes");
    if (!dims_j.is_array() || dims_j.empty()) throw InvalidInput("factor_dims must be a non-empty array");
    Dims dims;
    for (const auto &d : dims_j) {
        if (!d.is_number_integer() || d.get<long long>() <= 0) throw InvalidInput("factor_dims must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    if (!amps_j.is_array()) throw InvalidInput("amplitudes must be an array");
    const auto n = total_dim(dims);
    if (amps_j.size() != n) throw InvalidInput("amplitude count does not match factor_dims");
    ComplexVector amps(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) amps(static_cast<Eigen::Index>(i)) = complex_entry(amps_j[i]);
    const double norm = amps.norm();
    if (!(std::abs(norm - 1.0) <= 1e-6)) throw InvalidInput("state amplitudes are not normalized");
    return StateVector::normalized(std::move(dims), std::move(amps));
}

Json to_json(const Scheme &scheme) { return {{"events", scheme.events()}, {"weights", scheme.weights()}}; }

Scheme scheme_from_json(const Json &j) {
    const Json &events_j  = field(j, "events");
    const Json &weights_j = field(j, "weights");
    if (!events_j.is_array() || !weights_j.is_array()) throw InvalidInput("events and weights must be arrays");
    std::vector<std::string> events;
    for (const auto &e : events_j) events.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    std::vector<double> weights;
    for (const auto &w : weights_j) {
        if (!w.is_number()) throw InvalidInput("weights must be numbers");
        weights.push_back(w.get<double>());
    }
    return Scheme(std::move(events), std::move(weights));
}

Json to_json(const PointObservable &obs) {
    std::vector<double> values(obs.eigenvalues().data(), obs.eigenvalues().data() + obs.eigenvalues().size());
    // Eigen storage is column-major already.
    return {{"eigenvalues", values}, {"eigenbasis", complex_list(obs.eigenbasis().data(), obs.eigenbasis().size())}};
}

PointObservable observable_from_json(const Json &j) {
    const Json &values_j = field(j, "eigenvalues");
    const Json &basis_j  = field(j, "eigenbasis");
    if (!values_j.is_array() || values_j.empty()) throw InvalidInput("eigenvalues must be a non-empty array");
    const auto d = static_cast<Eigen::Index>(values_j.size());
    RealVector values(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!values_j[static_cast<std::size_t>(i)].is_number()) throw InvalidInput("eigenvalues must be numbers");
        values(i) = values_j[static_cast<std::size_t>(i)].get<double>();
    }
    if (!basis_j.is_array() || basis_j.size() != static_cast<std::size_t>(d * d))
        throw InvalidInput("eigenbasis must hold dim*dim entries");
    ComplexMatrix basis(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) basis(r, c) = complex_entry(basis_j[static_cast<std::size_t>(c * d + r)]);
    return PointObservable(std::move(values), std::move(basis));
}

Json to_json(const SqResult &result) {
    Json argmin = Json::array();
    for (const auto &f : result.argmin.factors) argmin.push_back(to_json(f));
    Json weights = Json::array();
    for (double w : result.weights) weights.push_back(round12(w));
    return {{"value", round12(result.value)},
            {"method", std::string(to_string(result.method))},
            {"weights", weights},
            {"restarts_used", result.restarts_used},
            {"converged", result.converged},
            {"argmin", argmin}};
}

Json to_json(const GasTrajectory &traj) {
    Json rows = Json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        rows.push_back({{"t", round12(traj.times[k])},
                        {"sq_estimate", round12(traj.sq_estimates[k])},
                        {"pair_i", traj.pair_schedule[k].first},
                        {"pair_j", traj.pair_schedule[k].second},
                        {"pair_entropy", round12(traj.pair_entropies[k])}});
    }
    return {{"trajectory", rows}};
}

std::string to_csv(const GasTrajectory &traj) {
    std::ostringstream os;
    os << "t,sq_estimate,pair_i,pair_j\n";
    for (std::size_t k = 0; k < traj.size(); ++k)
        os << format12(traj.times[k]) << ',' << format12(traj.sq_estimates[k]) << ',' << traj.pair_schedule[k].first
           << ',' << traj.pair_schedule[k].second << '\n';
    return os.str();
}

} // namespace sqt
