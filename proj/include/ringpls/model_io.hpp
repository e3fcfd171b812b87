#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ringpls/common.hpp"
#include "ringpls/plsr.hpp"

namespace ringpls {

inline constexpr int kModelSchemaVersion = 1;

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array()) throw SchemaError("model field '" + name + "' is not an array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    if (rows > 0) {
        if (!j[0].is_array()) throw SchemaError("model field '" + name + "' is not nested");
        cols = static_cast<Eigen::Index>(j[0].size());
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw SchemaError("model field '" + name + "' has ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row[static_cast<size_t>(c)].is_number()) {
                throw SchemaError("model field '" + name + "' has a non-numeric entry");
            }
            m(i, c) = row[static_cast<size_t>(c)].get<double>();
        }
    }
    return m;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array()) throw SchemaError("model field '" + name + "' is not an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw SchemaError("model field '" + name + "' has a non-numeric entry");
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("model JSON missing field '") + key + "'");
    return *it;
}

}  // namespace detail

inline nlohmann::json model_to_json(const PlsrModel& m) {
    nlohmann::json j;
    j["schema_version"] = kModelSchemaVersion;
    j["n_components"] = m.n_components;
    j["n_train"] = m.n_train;
    j["n_predictors"] = m.n_predictors();
    j["n_responses"] = m.n_responses();
    j["x_standardiser"] = {{"mean", detail::vector_to_json(m.x_standardiser.mean)},
                           {"stddev", detail::vector_to_json(m.x_standardiser.stddev)}};
    j["y_standardiser"] = {{"mean", detail::vector_to_json(m.y_standardiser.mean)},
                           {"stddev", detail::vector_to_json(m.y_standardiser.stddev)}};
    j["x_weights"] = detail::matrix_to_json(m.x_weights);
    j["x_loadings"] = detail::matrix_to_json(m.x_loadings);
    j["y_loadings"] = detail::matrix_to_json(m.y_loadings);
    j["x_scores"] = detail::matrix_to_json(m.x_scores);
    j["y_scores"] = detail::matrix_to_json(m.y_scores);
    j["coefficients"] = detail::matrix_to_json(m.coefficients);
    j["explained_y_variance"] = detail::vector_to_json(m.explained_y_variance);
    return j;
}

inline PlsrModel model_from_json(const nlohmann::json& j) {
    const auto& ver = detail::require(j, "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != kModelSchemaVersion) {
        throw SchemaError("unsupported model schema_version");
    }
    PlsrModel m;
    m.n_components = detail::require(j, "n_components").get<int>();
    m.n_train = detail::require(j, "n_train").get<long>();
    const auto p = detail::require(j, "n_predictors").get<Eigen::Index>();
    const auto resp = detail::require(j, "n_responses").get<Eigen::Index>();

    const auto& sx = detail::require(j, "x_standardiser");
    m.x_standardiser.mean = detail::vector_from_json(detail::require(sx, "mean"), "x mean");
    m.x_standardiser.stddev =
        detail::vector_from_json(detail::require(sx, "stddev"), "x stddev");
    const auto& sy = detail::require(j, "y_standardiser");
    m.y_standardiser.mean = detail::vector_from_json(detail::require(sy, "mean"), "y mean");
    m.y_standardiser.stddev =
        detail::vector_from_json(detail::require(sy, "stddev"), "y stddev");

    m.x_weights = detail::matrix_from_json(detail::require(j, "x_weights"), "x_weights");
    m.x_loadings = detail::matrix_from_json(detail::require(j, "x_loadings"), "x_loadings");
    m.y_loadings = detail::matrix_from_json(detail::require(j, "y_loadings"), "y_loadings");
    m.x_scores = detail::matrix_from_json(detail::require(j, "x_scores"), "x_scores");
    m.y_scores = detail::matrix_from_json(detail::require(j, "y_scores"), "y_scores");
    m.coefficients =
        detail::matrix_from_json(detail::require(j, "coefficients"), "coefficients");
    m.explained_y_variance = detail::vector_from_json(
        detail::require(j, "explained_y_variance"), "explained_y_variance");

    const int a = m.n_components;
    if (m.x_weights.rows() != p || m.x_weights.cols() != a || m.x_loadings.rows() != p ||
        m.x_loadings.cols() != a || m.y_loadings.rows() != resp || m.y_loadings.cols() != a ||
        m.coefficients.rows() != p || m.coefficients.cols() != resp ||
        m.x_scores.cols() != a || m.y_scores.cols() != a ||
        m.explained_y_variance.size() != a || m.x_standardiser.mean.size() != p ||
        m.x_standardiser.stddev.size() != p || m.y_standardiser.mean.size() != resp ||
        m.y_standardiser.stddev.size() != resp) {
        throw SchemaError("model JSON dimensions are inconsistent");
    }
    return m;
}

/// Serialise with sorted keys and shortest round-trip doubles: saving the
/// same model twice (or saving a freshly loaded model) is byte-identical.
inline std::string model_to_string(const PlsrModel& m) {
    return model_to_json(m).dump(2) + "\n";
}

inline void save_model(const std::string& path, const PlsrModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open model file '" + path + "' for writing");
    out << model_to_string(m);
    if (!out) throw Error("failed writing model file '" + path + "'");
}

inline PlsrModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace ringpls
