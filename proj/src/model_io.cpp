#include "quanting/model_io.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include <json.hpp>

namespace quanting {

namespace {

using Json = nlohmann::ordered_json;

Json scorer_to_json(const BinaryScorer& scorer) {
    Json j;
    j["kind"] = scorer.kind();
    if (const auto* tree = dynamic_cast<const TreeScorer*>(&scorer)) {
        j["feature_count"] = tree->feature_count();
        Json nodes = Json::array();
        for (const auto& node : tree->nodes()) {
            if (node.is_leaf())
                nodes.push_back({{"score", node.score}});
            else
                nodes.push_back({{"feature", node.feature},
                                 {"cut", node.cut},
                                 {"left", node.left},
                                 {"right", node.right}});
        }
        j["nodes"] = std::move(nodes);
    } else if (const auto* logreg = dynamic_cast<const LogregScorer*>(&scorer)) {
        j["coefficients"] = logreg->coefficients();
        j["intercept"] = logreg->intercept();
    } else if (const auto* constant = dynamic_cast<const ConstantScorer*>(&scorer)) {
        j["feature_count"] = constant->feature_count();
        j["value"] = constant->value();
    } else if (const auto* aug = dynamic_cast<const ThresholdAugmentedScorer*>(&scorer)) {
        j["threshold"] = aug->threshold();
        j["inner"] = scorer_to_json(*aug->inner());
    } else {
        throw std::runtime_error("cannot serialize scorer kind: " + scorer.kind());
    }
    return j;
}

ScorerPtr scorer_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tree") {
        std::vector<TreeNode> nodes;
        for (const auto& n : j.at("nodes")) {
            TreeNode node;
            if (n.contains("feature")) {
                node.feature = n.at("feature").get<int>();
                node.cut = n.at("cut").get<double>();
                node.left = n.at("left").get<int>();
                node.right = n.at("right").get<int>();
            } else {
                node.score = n.at("score").get<double>();
            }
            nodes.push_back(node);
        }
        return std::make_shared<TreeScorer>(std::move(nodes),
                                            j.at("feature_count").get<std::size_t>());
    }
    if (kind == "logreg")
        return std::make_shared<LogregScorer>(j.at("coefficients").get<std::vector<double>>(),
                                              j.at("intercept").get<double>());
    if (kind == "constant")
        return std::make_shared<ConstantScorer>(j.at("value").get<double>(),
                                                j.at("feature_count").get<std::size_t>());
    if (kind == "threshold_augmented")
        return std::make_shared<ThresholdAugmentedScorer>(scorer_from_json(j.at("inner")),
                                                          j.at("threshold").get<double>());
    throw std::runtime_error("unknown scorer kind in model file: " + kind);
}

Json normalization_to_json(const LabelNormalization& norm) {
    return {{"label_min", norm.label_min}, {"label_max", norm.label_max}};
}

LabelNormalization normalization_from_json(const Json& j) {
    return {j.at("label_min").get<double>(), j.at("label_max").get<double>()};
}

Json learner_to_json(const LearnerConfig& config) {
    return {{"kind", learner_kind_name(config.kind)},
            {"tree_max_depth", config.tree_max_depth},
            {"tree_min_leaf_weight", config.tree_min_leaf_weight},
            {"logreg_max_iterations", config.logreg_max_iterations},
            {"logreg_l2", config.logreg_l2},
            {"logreg_tolerance", config.logreg_tolerance},
            {"seed", config.seed}};
}

LearnerConfig learner_from_json(const Json& j) {
    LearnerConfig config;
    config.kind = learner_kind_from_name(j.at("kind").get<std::string>());
    config.tree_max_depth = j.at("tree_max_depth").get<std::size_t>();
    config.tree_min_leaf_weight = j.at("tree_min_leaf_weight").get<double>();
    config.logreg_max_iterations = j.at("logreg_max_iterations").get<std::size_t>();
    config.logreg_l2 = j.at("logreg_l2").get<double>();
    config.logreg_tolerance = j.at("logreg_tolerance").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

constexpr int kFormatVersion = 1;

} // namespace

std::string model_to_json(const AnyModel& model) {
    Json j;
    j["format"] = "quanting-model";
    j["version"] = kFormatVersion;
    if (const auto* qm = std::get_if<QuantingModel>(&model)) {
        j["kind"] = "quanting";
        j["q"] = qm->ensemble.q.q;
        j["normalization"] = normalization_to_json(qm->ensemble.normalization);
        j["grid"] = {{"scheme", grid_scheme_name(qm->ensemble.grid.scheme)},
                     {"thresholds", qm->ensemble.grid.thresholds}};
        j["learner"] = learner_to_json(qm->learner);
        j["weighted_path"] = weighted_path_name(qm->path);
        j["hard_outputs"] = qm->ensemble.hard_outputs;
        Json classifiers = Json::array();
        for (const auto& c : qm->ensemble.classifiers)
            classifiers.push_back(scorer_to_json(*c));
        j["classifiers"] = std::move(classifiers);
    } else if (const auto* lm = std::get_if<LinearQuantileModel>(&model)) {
        j["kind"] = "linear";
        j["q"] = lm->q.q;
        j["normalization"] = normalization_to_json(lm->normalization);
        j["coefficients"] = lm->coefficients;
        j["intercept"] = lm->intercept;
    } else {
        const auto& cm = std::get<ConstantModel>(model);
        j["kind"] = "constant";
        j["q"] = cm.q.q;
        j["normalization"] = normalization_to_json(cm.normalization);
        j["value"] = cm.value;
    }
    return j.dump(2);
}

AnyModel model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "quanting-model")
        throw std::runtime_error("not a quanting model file");
    if (j.value("version", -1) != kFormatVersion)
        throw std::runtime_error("unsupported model file version");
    const std::string kind = j.at("kind").get<std::string>();
    const QuantileSpec q{j.at("q").get<double>()};
    const LabelNormalization norm = normalization_from_json(j.at("normalization"));

    if (kind == "quanting") {
        QuantingModel model;
        model.ensemble.q = q;
        model.ensemble.normalization = norm;
        model.ensemble.grid.scheme =
            grid_scheme_from_name(j.at("grid").at("scheme").get<std::string>());
        model.ensemble.grid.thresholds =
            j.at("grid").at("thresholds").get<std::vector<double>>();
        model.ensemble.grid.validate();
        model.ensemble.hard_outputs = j.at("hard_outputs").get<bool>();
        model.learner = learner_from_json(j.at("learner"));
        model.path = weighted_path_from_name(j.at("weighted_path").get<std::string>());
        for (const auto& c : j.at("classifiers"))
            model.ensemble.classifiers.push_back(scorer_from_json(c));
        if (model.ensemble.classifiers.size() != model.ensemble.grid.size())
            throw std::runtime_error("model file: classifier count does not match grid");
        return model;
    }
    if (kind == "linear") {
        LinearQuantileModel model;
        model.q = q;
        model.normalization = norm;
        model.coefficients = j.at("coefficients").get<std::vector<double>>();
        model.intercept = j.at("intercept").get<double>();
        return model;
    }
    if (kind == "constant")
        return ConstantModel{j.at("value").get<double>(), q, norm};
    throw std::runtime_error("unknown model kind: " + kind);
}

void save_model(const std::string& path, const AnyModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open model file for writing: " + path);
    out << model_to_json(model) << "\n";
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

double predict_with(const AnyModel& model, std::span<const double> x) {
    if (const auto* qm = std::get_if<QuantingModel>(&model))
        return quanting_predict(qm->ensemble, x);
    if (const auto* lm = std::get_if<LinearQuantileModel>(&model))
        return predict_linear(*lm, x);
    return std::get<ConstantModel>(model).value;
}

std::size_t model_feature_count(const AnyModel& model) {
    if (const auto* qm = std::get_if<QuantingModel>(&model))
        return qm->ensemble.feature_count();
    if (const auto* lm = std::get_if<LinearQuantileModel>(&model))
        return lm->coefficients.size();
    return 0; // constant model accepts any arity
}

QuantileSpec model_quantile(const AnyModel& model) {
    if (const auto* qm = std::get_if<QuantingModel>(&model))
        return qm->ensemble.q;
    if (const auto* lm = std::get_if<LinearQuantileModel>(&model))
        return lm->q;
    return std::get<ConstantModel>(model).q;
}

std::string model_kind(const AnyModel& model) {
    if (std::holds_alternative<QuantingModel>(model))
        return "quanting";
    if (std::holds_alternative<LinearQuantileModel>(model))
        return "linear";
    return "constant";
}

} // namespace quanting
