#include "malc/model.hpp"

#include "malc/data.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace malc {

using nlohmann::json;

std::string to_string(TieBreak) { return "smallest_index"; }

TieBreak parse_tie_break(const std::string& name) {
    if (name == "smallest_index") return TieBreak::smallest_index;
    throw Error("unknown tie_break rule '" + name + "'");
}

PredictionOutcome predict_hybrid(const HybridModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, int bb_label) {
    const int k = model.num_classes();
    if (bb_label < 0 || bb_label >= k)
        throw Error("black-box label " + std::to_string(bb_label + 1) + " outside {1.." + std::to_string(k) + "}");
    PredictionOutcome out;
    out.scores = predict_scores(model.params, x);
    out.margins = class_margins(out.scores);
    const int agent = claiming_agent(model.params, out.scores);
    if (agent >= 0) {
        out.label = agent;
        out.source = Source::agent;
    } else {
        out.label = bb_label;
        out.source = Source::blackbox;
    }
    return out;
}

Eigen::VectorXi claim_rows(const ModelParams& params, const Eigen::Ref<const Eigen::MatrixXd>& features) {
    if (features.cols() != params.dims())
        throw ShapeError("data has " + std::to_string(features.cols()) + " features, model expects " +
                         std::to_string(params.dims()));
    const Eigen::MatrixXd scores = features * params.w.transpose();
    Eigen::VectorXi claims(features.rows());
    for (Index i = 0; i < features.rows(); ++i) claims(i) = claiming_agent(params, scores.row(i).transpose());
    return claims;
}

double transparency(const HybridModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features) {
    if (features.rows() == 0) throw Error("transparency of an empty data set is undefined");
    const Eigen::VectorXi claims = claim_rows(model.params, features);
    return static_cast<double>((claims.array() >= 0).count()) / static_cast<double>(features.rows());
}

double avg_nonzeros(const ModelParams& params, double zero_tol) {
    if (params.num_classes() == 0) return 0.0;
    return static_cast<double>((params.w.array().abs() > zero_tol).count()) / static_cast<double>(params.num_classes());
}

Metrics evaluate(const ModelParams& params, const Dataset& ds, const BlackboxPredictions& bb) {
    if (bb.size() != ds.rows())
        throw ShapeError("black-box predictions have " + std::to_string(bb.size()) + " rows, dataset has " +
                         std::to_string(ds.rows()));
    if (ds.rows() == 0) throw Error("cannot evaluate on an empty data set");
    const Index k = params.num_classes();
    if (bb.preds.minCoeff() < 0 || bb.preds.maxCoeff() >= k)
        throw Error("black-box prediction outside {1.." + std::to_string(k) + "}");

    const Eigen::VectorXi claims = claim_rows(params, ds.features);
    Metrics m;
    m.rows = ds.rows();
    m.per_class_claim_rate = Eigen::VectorXd::Zero(k);
    Index deferred = 0;
    for (Index i = 0; i < ds.rows(); ++i) {
        if (claims(i) >= 0) {
            ++m.claimed;
            m.per_class_claim_rate(claims(i)) += 1.0;
            if (claims(i) == ds.labels(i)) ++m.claimed_correct;
        } else {
            ++deferred;
            if (bb.preds(i) == ds.labels(i)) ++m.deferred_correct;
        }
    }
    const auto n = static_cast<double>(m.rows);
    m.accuracy = static_cast<double>(m.claimed_correct + m.deferred_correct) / n;
    m.transparency = static_cast<double>(m.claimed) / n;
    m.accuracy_on_claimed = m.claimed ? static_cast<double>(m.claimed_correct) / static_cast<double>(m.claimed) : 0.0;
    m.accuracy_on_deferred = deferred ? static_cast<double>(m.deferred_correct) / static_cast<double>(deferred) : 0.0;
    m.per_class_claim_rate /= n;
    m.avg_nonzeros = avg_nonzeros(params);
    return m;
}

Metrics evaluate(const HybridModel& model, const Dataset& ds, const BlackboxPredictions& bb) {
    return evaluate(model.params, ds, bb);
}

Dataset prepare_features(const HybridModel& model, const Dataset& raw) {
    Dataset ds = raw;
    if (model.scaling) ds = apply_scale(ds, *model.scaling);
    if (model.bias_column && !raw.bias_column) ds = append_bias(ds);
    if (ds.dims() != model.dims())
        throw ShapeError("data has " + std::to_string(ds.dims()) + " features after preprocessing, model expects " +
                         std::to_string(model.dims()));
    return ds;
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

const json& require(const json& doc, const char* field) {
    if (!doc.is_object() || !doc.contains(field)) throw ParseError(std::string("model file missing field '") + field + "'");
    return doc.at(field);
}

Eigen::VectorXd read_vector(const json& arr, const char* field, Index expected) {
    if (!arr.is_array() || static_cast<Index>(arr.size()) != expected)
        throw ParseError(std::string("model field '") + field + "' must be an array of " + std::to_string(expected) +
                         " numbers");
    Eigen::VectorXd v(expected);
    for (Index i = 0; i < expected; ++i) {
        const auto& e = arr[static_cast<std::size_t>(i)];
        if (!e.is_number()) throw ParseError(std::string("model field '") + field + "' holds a non-number");
        v(i) = e.get<double>();
    }
    return v;
}

}  // namespace

std::string model_to_json(const HybridModel& model) {
    json doc;
    doc["version"] = kModelSchemaVersion;
    doc["K"] = model.num_classes();
    doc["d"] = model.dims();
    doc["phi"] = to_string(model.phi);
    doc["c1"] = model.c1;
    doc["c2"] = model.c2;
    doc["tie_break"] = to_string(model.tie_break);
    doc["feature_names"] = model.feature_names;
    doc["bias_column"] = model.bias_column ? json(*model.bias_column) : json(nullptr);
    if (model.scaling)
        doc["scaling"] = {{"min", vector_json(model.scaling->min)}, {"max", vector_json(model.scaling->max)}};
    json w = json::array();
    for (Index k = 0; k < model.params.num_classes(); ++k) w.push_back(vector_json(model.params.w.row(k).transpose()));
    doc["w"] = std::move(w);
    doc["theta"] = vector_json(model.params.theta);
    doc["provenance"] = model.provenance;
    return doc.dump(2) + "\n";
}

HybridModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("corrupted model file: ") + e.what());
    }
    try {
        const int version = require(doc, "version").get<int>();
        if (version != kModelSchemaVersion)
            throw ParseError("model schema version " + std::to_string(version) + " not supported (expected " +
                             std::to_string(kModelSchemaVersion) + ")");
        HybridModel m;
        const Index k = require(doc, "K").get<Index>();
        const Index d = require(doc, "d").get<Index>();
        if (k < 2 || d < 1) throw ParseError("model file has invalid K or d");
        m.phi = parse_phi(require(doc, "phi").get<std::string>());
        m.c1 = require(doc, "c1").get<double>();
        m.c2 = require(doc, "c2").get<double>();
        m.tie_break = parse_tie_break(require(doc, "tie_break").get<std::string>());
        m.feature_names = require(doc, "feature_names").get<std::vector<std::string>>();
        if (static_cast<Index>(m.feature_names.size()) != d)
            throw ParseError("model field 'feature_names' must have d entries");
        if (doc.contains("bias_column") && !doc.at("bias_column").is_null()) {
            m.bias_column = doc.at("bias_column").get<Index>();
            if (*m.bias_column < 0 || *m.bias_column >= d) throw ParseError("model field 'bias_column' out of range");
        }
        if (doc.contains("scaling")) {
            const auto& s = doc.at("scaling");
            const Index raw_d = m.bias_column ? d - 1 : d;
            m.scaling = ScalingParams{read_vector(require(s, "min"), "scaling.min", raw_d),
                                      read_vector(require(s, "max"), "scaling.max", raw_d)};
            if ((m.scaling->max.array() < m.scaling->min.array()).any())
                throw ParseError("model scaling has max < min");
        }
        const json& w = require(doc, "w");
        if (!w.is_array() || static_cast<Index>(w.size()) != k) throw ParseError("model field 'w' must have K rows");
        m.params.w.resize(k, d);
        for (Index r = 0; r < k; ++r) m.params.w.row(r) = read_vector(w[static_cast<std::size_t>(r)], "w", d).transpose();
        m.params.theta = read_vector(require(doc, "theta"), "theta", k);
        if ((m.params.theta.array() < 0.0).any()) throw ParseError("model field 'theta' has a negative entry");
        if (doc.contains("provenance"))
            m.provenance = doc.at("provenance").get<std::map<std::string, std::string>>();
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file schema violation: ") + e.what());
    }
}

void save_model(const HybridModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write model " + path.string());
    out << model_to_json(model);
}

HybridModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace malc
