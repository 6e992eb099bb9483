#include "hospsim/model_io.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/version.hpp"

#include <nlohmann/json.hpp>

namespace hospsim {

namespace {

using nlohmann::json;

void check_format(const json& j, const char* kind) {
    if (!j.is_object() || j.value("format", "") != kind)
        throw DataError(std::string("model artifact: expected format '") + kind + "'");
    if (j.value("version", 0) != 1)
        throw DataError(std::string("model artifact '") + kind + "': unsupported version");
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

} // namespace

nlohmann::json design_to_json(const Design& design) {
    json rows = json::array();
    for (int i = 0; i < design.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < design.d(); ++k) row.push_back(design.X(i, k));
        rows.push_back(std::move(row));
    }
    return json{{"X", std::move(rows)},
                {"y", vector_to_json(design.y)},
                {"param_indices", design.param_indices}};
}

Design design_from_json(const nlohmann::json& j) {
    Design design;
    const json& rows = j.at("X");
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) throw DataError("model artifact: empty design");
    const Eigen::Index d = static_cast<Eigen::Index>(rows[0].size());
    design.X.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != d)
            throw DataError("model artifact: ragged design matrix");
        for (Eigen::Index k = 0; k < d; ++k)
            design.X(i, k) = row[static_cast<size_t>(k)].get<double>();
    }
    design.y = vector_from_json(j.at("y"));
    if (design.y.size() != n) throw DataError("model artifact: response length mismatch");
    if (j.contains("param_indices"))
        design.param_indices = j.at("param_indices").get<std::vector<int>>();
    return design;
}

nlohmann::json kriging_to_json(const KrigingModel& model) {
    return json{{"format", "kriging"},
                {"version", 1},
                {"tool", kToolName},
                {"tool_version", kToolVersion},
                {"design", design_to_json(model.training())},
                {"theta", vector_to_json(model.theta())},
                {"nugget", model.nugget()}};
}

KrigingModel kriging_from_json(const nlohmann::json& j) {
    check_format(j, "kriging");
    return KrigingModel::restore(design_from_json(j.at("design")),
                                 vector_from_json(j.at("theta")), j.at("nugget").get<double>());
}

nlohmann::json linear_to_json(const LinearModel& model) {
    return json{{"format", "linear"},
                {"version", 1},
                {"tool", kToolName},
                {"tool_version", kToolVersion},
                {"intercept", model.intercept},
                {"beta", vector_to_json(model.beta)},
                {"col_mean", vector_to_json(model.col_mean)},
                {"col_sd", vector_to_json(model.col_sd)},
                {"residual_sd", model.residual_sd}};
}

LinearModel linear_from_json(const nlohmann::json& j) {
    check_format(j, "linear");
    LinearModel model;
    model.intercept = j.at("intercept").get<double>();
    model.beta = vector_from_json(j.at("beta"));
    model.col_mean = vector_from_json(j.at("col_mean"));
    model.col_sd = vector_from_json(j.at("col_sd"));
    model.residual_sd = j.at("residual_sd").get<double>();
    if (model.beta.size() != model.col_mean.size() || model.beta.size() != model.col_sd.size())
        throw DataError("model artifact 'linear': inconsistent coefficient lengths");
    return model;
}

nlohmann::json forest_to_json(const ForestModel& model) {
    // The forest is rebuilt from (design, config, seed) on load; tree growth
    // is deterministic in the seed, so the artifact stays small and exact.
    return json{{"format", "forest"},
                {"version", 1},
                {"tool", kToolName},
                {"tool_version", kToolVersion},
                {"design", design_to_json(model.training())},
                {"trees", model.config().trees},
                {"min_leaf", model.config().min_leaf},
                {"mtry", model.config().mtry},
                {"seed", model.seed()}};
}

ForestModel forest_from_json(const nlohmann::json& j) {
    check_format(j, "forest");
    ForestConfig cfg;
    cfg.trees = j.at("trees").get<int>();
    cfg.min_leaf = j.at("min_leaf").get<int>();
    cfg.mtry = j.at("mtry").get<int>();
    return ForestModel::fit(design_from_json(j.at("design")), cfg,
                            j.at("seed").get<std::uint64_t>());
}

} // namespace hospsim
