/**
 * @file spec_io.hpp
 * @brief JSON potential spec files.
 *
 * Schema:
 *   {
 *     "kind": "polynomial",            // any built-in family name
 *     "n": 1,
 *     "radius": 1.0,
 *     "params": {
 *       "matrix": [[[re, im], ...], ...],   // gl_pullback_fs, u1n_pullback_ch; row-major
 *       "epsilon": 0.1,                     // perturbed_fs
 *       "terms": [ {"alpha": [..], "beta": [..], "c": [re, im]} ]   // polynomial
 *     }
 *   }
 * The reality constraint c_ba = conj(c_ab) of polynomial terms is checked on load.
 */

#pragma once

#include "jetcurv/potential.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace jetcurv {

inline nlohmann::json complex_to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Config, "complex numbers must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json spec_to_json(const PotentialSpec& spec) {
    if (spec.gauge) throw Error(ErrorKind::Argument, "normalized specs are not serializable");
    nlohmann::json j;
    j["kind"] = std::string(to_string(spec.kind));
    j["n"] = spec.n;
    j["radius"] = spec.radius;
    nlohmann::json params = nlohmann::json::object();
    if (spec.kind == PotentialKind::GlPullbackFs || spec.kind == PotentialKind::U1nPullbackCh) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < spec.matrix.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < spec.matrix.cols(); ++c) row.push_back(complex_to_json(spec.matrix(r, c)));
            rows.push_back(row);
        }
        params["matrix"] = rows;
    }
    if (spec.kind == PotentialKind::PerturbedFs) params["epsilon"] = spec.epsilon;
    if (spec.kind == PotentialKind::Polynomial) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : spec.terms) {
            terms.push_back({{"alpha", t.alpha}, {"beta", t.beta}, {"c", complex_to_json(t.c)}});
        }
        params["terms"] = terms;
    }
    j["params"] = params;
    return j;
}

inline PotentialSpec spec_from_json(const nlohmann::json& j) {
    PotentialSpec spec;
    try {
        const auto kind = kind_from_string(j.at("kind").get<std::string>());
        if (!kind) throw Error(ErrorKind::Config, "unknown potential kind");
        spec.kind = *kind;
        spec.n = j.at("n").get<int>();
        spec.radius = j.value("radius", 1.0);
        const nlohmann::json params = j.value("params", nlohmann::json::object());
        if (params.contains("matrix")) {
            const auto& rows = params.at("matrix");
            spec.matrix.resize(static_cast<Eigen::Index>(rows.size()),
                               rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != rows[0].size()) throw Error(ErrorKind::Config, "ragged matrix");
                for (std::size_t c = 0; c < rows[r].size(); ++c)
                    spec.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        complex_from_json(rows[r][c]);
            }
        }
        spec.epsilon = params.value("epsilon", 0.0);
        if (params.contains("terms")) {
            for (const auto& t : params.at("terms")) {
                spec.terms.push_back({t.at("alpha").get<std::vector<int>>(), t.at("beta").get<std::vector<int>>(),
                                      complex_from_json(t.at("c"))});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("malformed potential spec: ") + e.what());
    }
    try {
        validate(spec);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    return spec;
}

inline PotentialSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open potential spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("cannot parse potential spec: ") + e.what());
    }
    return spec_from_json(j);
}

} // namespace jetcurv
